#include "bellman/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "bellman/parallel.hpp"

namespace bellman {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_maximal(const Surface& s) { return s.kind == Candidate::Maximal || s.kind == Candidate::MaximalExtended; }

struct Triple {
    Point x, xm, xp;
};

double default_radius(const Surface&) { return 0.5; }

// One attempt at drawing an admissible triple; nullopt when a point falls
// outside the problem domain.
std::optional<Triple> draw_triple(const Surface& s, std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double r = radius * U(rng);
    const double theta = 2.0 * kPi * U(rng);
    const double c = std::cos(theta), sn = std::sin(theta);
    Point x{};
    double d1 = 0.0, d2 = 0.0;
    switch (s.kind) {
        case Candidate::Buckley: {
            const double logd = std::log(s.delta);
            x.x1 = std::exp(-2.0 + 4.0 * U(rng));
            x.x2 = std::log(x.x1) - logd * U(rng);
            d1 = r * x.x1 * c;
            d2 = r * (c + sn * logd);
            break;
        }
        case Candidate::TwoWeight: {
            x.x1 = std::exp(-2.0 + 4.0 * U(rng));
            x.x2 = (s.m * s.m + (s.M * s.M - s.m * s.m) * U(rng)) / x.x1;
            d1 = r * x.x1 * c;
            d2 = r * x.x2 * sn;
            break;
        }
        case Candidate::JnUpper:
        case Candidate::JnLower: {
            x.x1 = -1.0 + 2.0 * U(rng);
            x.x2 = x.x1 * x.x1 + s.eps * s.eps * U(rng);
            d1 = r * c;
            d2 = 2.0 * x.x1 * d1 + r * s.eps * sn;
            break;
        }
        case Candidate::Maximal:
        case Candidate::MaximalExtended: {
            x.x1 = s.L * (1.0 - U(rng));
            x.x2 = x.x1 * x.x1 + 4.0 * s.L * s.L * U(rng);
            x.L = s.L;
            d1 = r * s.L * c;
            d2 = 2.0 * x.x1 * d1 + 2.0 * r * s.L * s.L * sn;
            break;
        }
    }
    Triple t{x, {x.x1 - d1, x.x2 - d2, x.L}, {x.x1 + d1, x.x2 + d2, x.L}};
    if (is_maximal(s)) {
        for (Point* p : {&t.xm, &t.xp}) {
            if (!(p->x1 > 0.0) || p->x2 < p->x1 * p->x1) return std::nullopt;
            p->L = std::max(p->x1, s.L);
        }
        return t;
    }
    const Domain dom = problem_domain(s);
    if (!contains(dom, t.x, 0.0) || !contains(dom, t.xm, 0.0) || !contains(dom, t.xp, 0.0)) return std::nullopt;
    return t;
}

}  // namespace

double cost_value(Cost c, const Point& x, const Point& x_minus, const Point& x_plus) {
    switch (c) {
        case Cost::Zero:
        case Cost::MaximalZero: return 0.0;
        case Cost::BuckleySquare: {
            const double r = (x_plus.x1 - x_minus.x1) / x.x1;
            return r * r;
        }
        case Cost::TwoWeightProduct:
            return std::abs(x_plus.x1 - x_minus.x1) * std::abs(x_plus.x2 - x_minus.x2) / 4.0;
    }
    return 0.0;
}

Cost default_cost(const Surface& s) {
    switch (s.kind) {
        case Candidate::Buckley: return Cost::BuckleySquare;
        case Candidate::TwoWeight: return Cost::TwoWeightProduct;
        case Candidate::Maximal:
        case Candidate::MaximalExtended: return Cost::MaximalZero;
        default: return Cost::Zero;
    }
}

std::string to_string(Cost c) {
    switch (c) {
        case Cost::Zero: return "Zero";
        case Cost::BuckleySquare: return "BuckleySquare";
        case Cost::TwoWeightProduct: return "TwoWeightProduct";
        case Cost::MaximalZero: return "MaximalZero";
    }
    return "Unknown";
}

Domain problem_domain(const Surface& s) {
    if (s.kind == Candidate::JnUpper || s.kind == Candidate::JnLower) return BmoDomain{s.eps};
    return s.domain();
}

std::vector<Violation> main_inequality_scan(const Surface& s, Cost cost, const Sampler& sampler, double slack) {
    const double radius = sampler.max_radius > 0.0 ? sampler.max_radius : default_radius(s);
    const unsigned threads = sampler.threads ? sampler.threads : default_threads();
    std::vector<std::optional<Violation>> found(sampler.count);
    parallel_for(sampler.count, threads, [&](std::size_t i) {
        auto rng = stream_rng(sampler.seed, i);
        std::optional<Triple> t;
        for (int attempt = 0; attempt < 64 && !t; ++attempt) t = draw_triple(s, rng, radius);
        if (!t) return;
        const double lhs = s.value(t->x);
        const double rhs = 0.5 * (s.value(t->xp) + s.value(t->xm)) + cost_value(cost, t->x, t->xm, t->xp);
        const double defect = s.orientation() * (rhs - lhs);
        if (defect > slack * (1.0 + std::abs(lhs))) found[i] = Violation{t->x, t->xp, t->xm, lhs, rhs, defect};
    });
    std::vector<Violation> out;
    for (auto& v : found)
        if (v) out.push_back(*v);
    return out;
}

namespace {

std::vector<std::vector<double>> pyramid(std::vector<double> finest, int depth) {
    std::vector<std::vector<double>> lv(depth + 1);
    lv[depth] = std::move(finest);
    for (int k = depth - 1; k >= 0; --k) {
        lv[k].resize(lv[k + 1].size() / 2);
        for (std::size_t i = 0; i < lv[k].size(); ++i) lv[k][i] = 0.5 * (lv[k + 1][2 * i] + lv[k + 1][2 * i + 1]);
    }
    return lv;
}

template <class F>
std::vector<double> mapped(const DyadicFunction& f, F fn) {
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(f[i]);
    return v;
}

}  // namespace

InductionReport bellman_induction(const Surface& s, Cost cost, const DyadicFunction& f, const DyadicFunction* second,
                                  std::optional<double> L, double slack) {
    const int depth = f.depth();
    const double len = f.length();
    std::vector<std::vector<double>> c1, c2;
    double objective = 0.0;

    switch (s.kind) {
        case Candidate::Buckley: {
            for (double w : f.values())
                if (!(w > 0.0)) throw std::invalid_argument("inadmissible weight: values must be positive");
            const double ratio = ainf_ratio(f);
            if (ratio > s.delta * (1.0 + 1e-12))
                throw std::invalid_argument("inadmissible weight: A-infinity ratio " + std::to_string(ratio) +
                                            " exceeds delta");
            c1 = pyramid(f.values(), depth);
            c2 = pyramid(mapped(f, [](double w) { return std::log(w); }), depth);
            objective = len * buckley_sum(f);
            break;
        }
        case Candidate::TwoWeight: {
            if (!second) throw std::invalid_argument("two-weight induction needs the second weight");
            c1 = pyramid(f.values(), depth);
            c2 = pyramid(second->values(), depth);
            if (second->depth() != depth) throw std::invalid_argument("weights differ in depth");
            for (int k = 0; k <= depth; ++k)
                for (std::size_t i = 0; i < c1[k].size(); ++i) {
                    const double p = c1[k][i] * c2[k][i];
                    if (c1[k][i] < 0.0 || c2[k][i] < 0.0 || p < s.m * s.m * (1.0 - 1e-12) ||
                        p > s.M * s.M * (1.0 + 1e-12))
                        throw std::invalid_argument("inadmissible pair: <u><v> leaves [m^2, M^2]");
                }
            objective = len * two_weight_sum(f, *second) / 4.0;
            break;
        }
        case Candidate::JnUpper:
        case Candidate::JnLower: {
            const double norm = bmo_norm_sq(f);
            if (norm > s.eps * s.eps + kDyadicTol)
                throw std::invalid_argument("inadmissible function: dyadic BMO norm squared " + std::to_string(norm) +
                                            " exceeds eps^2");
            c1 = pyramid(f.values(), depth);
            c2 = pyramid(mapped(f, [](double v) { return v * v; }), depth);
            objective = len * averages(f, {0, 0}).mean_exp;
            break;
        }
        case Candidate::Maximal:
        case Candidate::MaximalExtended: {
            for (double w : f.values())
                if (w < 0.0) throw std::invalid_argument("inadmissible weight: values must be nonnegative");
            c1 = pyramid(f.values(), depth);
            c2 = pyramid(mapped(f, [](double v) { return v * v; }), depth);
            const double Lext = L.value_or(c1[0][0]);
            if (Lext < c1[0][0] * (1.0 - 1e-12))
                throw std::invalid_argument("inadmissible parameter: L below the average of w");
            L = Lext;
            const auto Mw = dyadic_maximal(f, Lext);
            objective = len * averages(Mw, {0, 0}).mean_sq;
            break;
        }
    }

    // External maximal parameter per cell: running max of ancestor averages.
    std::vector<double> Lcur;
    if (is_maximal(s)) Lcur = {std::max(*L, c1[0][0])};

    InductionReport rep{};
    double accumulated = 0.0;
    for (int k = 0; k <= depth; ++k) {
        const double cell = std::ldexp(len, -k);
        long double total = 0.0L;
        for (std::size_t i = 0; i < c1[k].size(); ++i) {
            Point x{c1[k][i], c2[k][i]};
            if (is_maximal(s)) x.L = Lcur[i];
            total += cell * s.value(x);
        }
        rep.totals.push_back(static_cast<double>(total) + accumulated);
        if (k == depth) break;
        long double level_cost = 0.0L;
        if (cost != Cost::Zero && cost != Cost::MaximalZero) {
            for (std::size_t i = 0; i < c1[k].size(); ++i) {
                const Point x{c1[k][i], c2[k][i]};
                const Point xm{c1[k + 1][2 * i], c2[k + 1][2 * i]};
                const Point xp{c1[k + 1][2 * i + 1], c2[k + 1][2 * i + 1]};
                level_cost += cell * cost_value(cost, x, xm, xp);
            }
        }
        accumulated += static_cast<double>(level_cost);
        if (is_maximal(s)) {
            std::vector<double> next(c1[k + 1].size());
            for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::max(Lcur[i / 2], c1[k + 1][i]);
            Lcur = std::move(next);
        }
    }

    rep.top = rep.totals.front();
    rep.objective = objective;
    rep.monotone = true;
    rep.max_increase = -std::numeric_limits<double>::infinity();
    const double orient = s.orientation();
    for (std::size_t n = 0; n + 1 < rep.totals.size(); ++n) {
        const double inc = orient * (rep.totals[n + 1] - rep.totals[n]);
        rep.max_increase = std::max(rep.max_increase, inc);
        if (inc > slack * (1.0 + std::abs(rep.totals[n]))) rep.monotone = false;
    }
    rep.bound_holds = orient * (rep.top - objective) >= -slack * (1.0 + std::abs(objective));
    return rep;
}

Point GridSolution::node(std::size_t i1, std::size_t i2) const {
    const double x1 = x1_lo + static_cast<double>(i1) * h1;
    if (problem == DpProblem::Buckley) return {x1, 0.0};
    return {x1, x1 * x1 + static_cast<double>(i2) * h2};
}

void GridSolution::write_csv(std::ostream& os) const {
    os << "x1,x2,value\n" << std::setprecision(17);
    for (std::size_t i2 = 0; i2 < n2; ++i2)
        for (std::size_t i1 = 0; i1 < n1; ++i1) {
            const Point p = node(i1, i2);
            os << p.x1 << ',' << p.x2 << ',' << value(i1, i2) << '\n';
        }
}

namespace {

struct Split {
    double d1, d2;
};

std::vector<double> radii(double r_min, double r_max, int n) {
    std::vector<double> r;
    for (int j = 0; j < n; ++j) r.push_back(n == 1 ? r_max : r_min * std::pow(r_max / r_min, double(j) / (n - 1)));
    return r;
}

GridSolution solve_bmo(const DpConfig& cfg) {
    const double eps = cfg.eps;
    const auto f = cfg.boundary ? cfg.boundary : [](double u) { return std::exp(u); };
    GridSolution g{};
    g.problem = DpProblem::Bmo;
    g.eps = eps;
    g.x1_lo = cfg.x1_lo;
    g.n1 = static_cast<std::size_t>(std::llround((cfg.x1_hi - cfg.x1_lo) / cfg.h)) + 1;
    g.h1 = (cfg.x1_hi - cfg.x1_lo) / static_cast<double>(g.n1 - 1);
    g.n2 = static_cast<std::size_t>(std::ceil(eps * eps / cfg.h - 1e-9)) + 1;
    g.h2 = eps * eps / static_cast<double>(g.n2 - 1);
    g.values.resize(g.n1 * g.n2);
    for (std::size_t i2 = 0; i2 < g.n2; ++i2)
        for (std::size_t i1 = 0; i1 < g.n1; ++i1) g.values[i2 * g.n1 + i1] = f(g.node(i1, 0).x1);
    if (cfg.zero_split_only) {
        g.converged = true;
        return g;
    }

    std::vector<Split> fixed;
    const auto rs = radii(g.h1, eps * (1.0 + 2.0 * (std::max(std::abs(cfg.x1_lo), std::abs(cfg.x1_hi)) + eps)),
                          cfg.radii);
    for (int k = 0; k < cfg.directions; ++k) {
        const double th = kPi * k / cfg.directions;
        for (double r : rs) fixed.push_back({r * std::cos(th), r * std::sin(th)});
    }

    const double top = eps * eps;
    // Linear interpolation along x1 overshoots convex data and the overshoot
    // compounds under iteration; interpolate exponential data geometrically.
    const bool geometric =
        cfg.exp_translation && std::all_of(g.values.begin(), g.values.end(), [](double v) { return v > 0.0; });
    std::vector<double> logs(g.values.size());
    auto refresh_logs = [&] {
        if (geometric) std::transform(g.values.begin(), g.values.end(), logs.begin(), [](double v) { return std::log(v); });
    };
    // Bilinear lookup in (x1, t); NaN outside the domain or an untranslatable window.
    auto lookup = [&](const std::vector<double>& V, double y1, double y2) {
        double t = y2 - y1 * y1;
        const double tiny = 1e-12 * (1.0 + std::abs(y2));
        if (t < -tiny || t > top + tiny) return std::numeric_limits<double>::quiet_NaN();
        t = std::clamp(t, 0.0, top);
        double scale = 1.0;
        const double hi = g.x1_lo + g.h1 * static_cast<double>(g.n1 - 1);
        if (y1 < g.x1_lo || y1 > hi) {
            if (!cfg.exp_translation) return std::numeric_limits<double>::quiet_NaN();
            const double inside = std::clamp(y1, g.x1_lo, hi);
            scale = std::exp(y1 - inside);
            y1 = inside;
        }
        const double p1 = (y1 - g.x1_lo) / g.h1, p2 = t / g.h2;
        const std::size_t i1 = std::min<std::size_t>(static_cast<std::size_t>(p1), g.n1 - 2);
        const std::size_t i2 = std::min<std::size_t>(static_cast<std::size_t>(p2), g.n2 - 2);
        const double a = p1 - static_cast<double>(i1), b = p2 - static_cast<double>(i2);
        const double v00 = V[i2 * g.n1 + i1], v10 = V[i2 * g.n1 + i1 + 1];
        const double v01 = V[(i2 + 1) * g.n1 + i1], v11 = V[(i2 + 1) * g.n1 + i1 + 1];
        if (geometric) {
            // Exact along x1 for data of the form e^{x1} G(t).
            const auto& lv = logs;
            const double lo = std::exp((1 - a) * lv[i2 * g.n1 + i1] + a * lv[i2 * g.n1 + i1 + 1]);
            const double hi = std::exp((1 - a) * lv[(i2 + 1) * g.n1 + i1] + a * lv[(i2 + 1) * g.n1 + i1 + 1]);
            return scale * ((1 - b) * lo + b * hi);
        }
        return scale * ((1 - a) * (1 - b) * v00 + a * (1 - b) * v10 + (1 - a) * b * v01 + a * b * v11);
    };

    const unsigned threads = cfg.threads ? cfg.threads : default_threads();
    std::vector<double> next = g.values;
    const std::size_t interior = g.n1 * (g.n2 - 1);
    std::vector<double> change(interior);
    for (g.iterations = 0; g.iterations < cfg.max_iter;) {
        refresh_logs();
        parallel_for(interior, threads, [&](std::size_t k) {
            const std::size_t i1 = k % g.n1, i2 = k / g.n1 + 1;
            const Point x = g.node(i1, i2);
            const double old = g.values[i2 * g.n1 + i1];
            double best = old;
            auto consider = [&](double d1, double d2) {
                // The whole chord must stay in the domain; along x + tau d, t = t0 + tau lin - tau^2 quad.
                const double lin = d2 - 2.0 * x.x1 * d1, quad = d1 * d1;
                const double t0 = x.x2 - x.x1 * x.x1;
                const double peak = quad > 0.0 && std::abs(lin) < 2.0 * quad ? t0 + lin * lin / (4.0 * quad)
                                                                             : t0 + std::abs(lin) - quad;
                if (peak > top * (1.0 + 1e-12)) return;
                const double vp = lookup(g.values, x.x1 + d1, x.x2 + d2);
                const double vm = lookup(g.values, x.x1 - d1, x.x2 - d2);
                if (std::isnan(vp) || std::isnan(vm)) return;
                best = std::max(best, 0.5 * (vp + vm));
            };
            for (const auto& s : fixed) consider(s.d1, s.d2);
            if (cfg.inject_extremal) {
                const double R = std::sqrt(std::max(0.0, top - static_cast<double>(i2) * g.h2));
                for (double sgn : {1.0, -1.0}) {
                    const double a = x.x1 + sgn * R;
                    const double n = std::hypot(1.0, 2.0 * a);
                    for (double r : rs) consider(r / n, 2.0 * a * r / n);
                    // Split landing exactly on the lower boundary.
                    const double u = a - sgn * eps;
                    consider(x.x1 - u, x.x2 - u * u);
                }
            }
            next[i2 * g.n1 + i1] = best;
            change[k] = best - old;
        });
        ++g.iterations;
        g.values.swap(next);
        g.final_update = *std::max_element(change.begin(), change.end());
        if (g.final_update < cfg.tol) {
            g.converged = true;
            break;
        }
        next = g.values;
    }
    return g;
}

GridSolution solve_buckley(const DpConfig& cfg) {
    const double delta = cfg.delta;
    if (!(delta > 1.0)) throw std::invalid_argument("dp_solve: Buckley needs delta > 1");
    GridSolution g{};
    g.problem = DpProblem::Buckley;
    g.delta = delta;
    g.x1_lo = 1.0;
    g.n1 = static_cast<std::size_t>(std::llround((delta - 1.0) / cfg.h)) + 1;
    g.h1 = (delta - 1.0) / static_cast<double>(g.n1 - 1);
    g.n2 = 1;
    g.values.assign(g.n1, 0.0);
    if (cfg.zero_split_only) {
        g.converged = true;
        return g;
    }

    const double log_delta = std::log(delta);
    std::vector<Split> fixed;
    const auto rs = radii(g.h1, 1.0, cfg.radii);
    for (int k = 0; k < cfg.directions; ++k) {
        const double th = kPi * k / cfg.directions;
        for (double r : rs) fixed.push_back({r * std::cos(th), r * std::sin(th) * log_delta});
    }
    auto lookup = [&](const std::vector<double>& V, double s) {
        if (s < 1.0 - 1e-12 || s > delta + 1e-12) return std::numeric_limits<double>::quiet_NaN();
        const double p = (std::clamp(s, 1.0, delta) - 1.0) / g.h1;
        const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(p), g.n1 - 2);
        const double a = p - static_cast<double>(i);
        return (1 - a) * V[i] + a * V[i + 1];
    };

    const unsigned threads = cfg.threads ? cfg.threads : default_threads();
    std::vector<double> next = g.values;
    std::vector<double> change(g.n1, 0.0);
    for (g.iterations = 0; g.iterations < cfg.max_iter;) {
        parallel_for(g.n1 - 1, threads, [&](std::size_t k) {
            const std::size_t i = k + 1;
            const double s = g.x1_lo + static_cast<double>(i) * g.h1;
            const double old = g.values[i];
            double best = old;
            for (const auto& sp : fixed) {
                // Relative split of x = (s, 0): x1 +- s d1, x2 +- d2.
                const double d1 = s * sp.d1;
                if (s - std::abs(d1) <= 0.0) continue;
                const double sp_ = (s + d1) * std::exp(-sp.d2);
                const double sm_ = (s - d1) * std::exp(sp.d2);
                const double vp = lookup(g.values, sp_), vm = lookup(g.values, sm_);
                if (std::isnan(vp) || std::isnan(vm)) continue;
                const double c = 2.0 * d1 / s;
                best = std::max(best, 0.5 * (vp + vm) + c * c);
            }
            next[i] = best;
            change[i] = best - old;
        });
        ++g.iterations;
        g.values.swap(next);
        g.final_update = *std::max_element(change.begin(), change.end());
        if (g.final_update < cfg.tol) {
            g.converged = true;
            break;
        }
        next = g.values;
    }
    return g;
}

}  // namespace

GridSolution dp_solve(const DpConfig& cfg) {
    if (!(cfg.h > 0.0)) throw std::invalid_argument("dp_solve: grid step must be positive");
    return cfg.problem == DpProblem::Buckley ? solve_buckley(cfg) : solve_bmo(cfg);
}

GridGap compare_to_candidate(const GridSolution& g, const Surface& s) {
    GridGap out{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity()};
    for (std::size_t i2 = 0; i2 < g.n2; ++i2)
        for (std::size_t i1 = 0; i1 < g.n1; ++i1) {
            const double v = g.value(i1, i2);
            out.max_value = std::max(out.max_value, v);
            double c;
            try {
                c = s.value(g.node(i1, i2));
            } catch (const std::exception&) {
                continue;
            }
            out.max_excess = std::max(out.max_excess, v - c);
            out.max_relative_gap = std::max(out.max_relative_gap, (c - v) / std::max(std::abs(c), 1e-12));
        }
    return out;
}

NondyadicReport nondyadic_induction(const Surface& s, const DyadicFunction& f, double eps, double delta, int levels,
                                    double slack) {
    if (!(eps < delta)) throw std::invalid_argument("nondyadic_induction: need eps < delta");
    const double norm = bmo_norm_sq(f);
    if (norm > eps * eps + kDyadicTol)
        throw std::invalid_argument("nondyadic_induction: BMO norm squared " + std::to_string(norm) + " exceeds eps^2");

    NondyadicReport rep{};
    rep.passed = true;
    rep.max_concavity_defect = -std::numeric_limits<double>::infinity();
    rep.max_chord_excess = -std::numeric_limits<double>::infinity();
    rep.min_alpha = 0.5;
    rep.separation_bound = std::sqrt(1.0 - (eps / delta) * (eps / delta));
    rep.separation_holds = true;
    const double root_tol = 1e-13;

    struct Node {
        double a, b;
        std::string address;
    };
    std::vector<Node> gen{{f.left(), f.right(), "J"}};
    const Point root{f.mean_on(f.left(), f.right()), f.mean_sq_on(f.left(), f.right())};
    rep.top = s.value(root);
    rep.objective = averages(f, {0, 0}).mean_exp;

    for (int level = 0; level < levels && rep.passed; ++level) {
        std::vector<Node> next;
        for (const auto& node : gen) {
            ++rep.nodes;
            const auto d = split_interval(f, node.a, node.b, eps, delta, root_tol);
            if (d.stopped_by == SplitStop::NotFound) {
                rep.passed = false;
                rep.failure = "splitting failed at node " + node.address;
                break;
            }
            const double am = 1.0 - d.alpha_plus;
            const double parent = s.value(d.x_parent);
            const double defect = d.alpha_plus * s.value(d.x_plus) + am * s.value(d.x_minus) - parent;
            rep.max_concavity_defect = std::max(rep.max_concavity_defect, defect);
            if (defect > slack * (1.0 + std::abs(parent))) {
                rep.passed = false;
                rep.failure = "concavity step fails at node " + node.address;
            }
            rep.max_chord_excess = std::max(rep.max_chord_excess, d.rho_at_stop - delta * delta);
            const double amin = std::min(d.alpha_plus, am);
            rep.min_alpha = std::min(rep.min_alpha, amin);
            if (d.stopped_by == SplitStop::Tangency) {
                ++rep.tangency_stops;
                if (amin < rep.separation_bound - 1e-9) rep.separation_holds = false;
            }
            next.push_back({node.a, d.split_point, node.address + "-"});
            next.push_back({d.split_point, node.b, node.address + "+"});
        }
        gen = std::move(next);
    }
    if (rep.max_chord_excess > 1e-9) rep.passed = false;
    if (!rep.separation_holds) rep.passed = false;
    if (rep.top < rep.objective - slack * (1.0 + rep.objective)) {
        rep.passed = false;
        if (rep.failure.empty()) rep.failure = "B(x^J) below <e^f>_J";
    }
    return rep;
}

}  // namespace bellman
