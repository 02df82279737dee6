#include "bellman/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bellman {
namespace {

// Cell averages of u + sign * eps * log(l / t) on [0, l], u beyond.
DyadicFunction log_profile(double u, double l, double eps, double sign, int depth) {
    if (l <= 0.0) return DyadicFunction::constant(0.0, 1.0, depth, u);
    const double log_l = std::log(l);
    return DyadicFunction::from_cell_means(0.0, 1.0, depth, [=](double a, double b) {
        if (a >= l) return u;
        const double top = std::min(b, l);
        const double on_log = u + sign * eps * (log_l - log_mean(a, top));
        return ((top - a) * on_log + (b - top) * u) / (b - a);
    });
}

double bmo_radius(const Point& x, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("JN optimizer: need 0 < eps < 1");
    if (!contains(BmoDomain{eps}, x, kClosedFormTol * (1.0 + x.x2)))
        throw std::domain_error("JN optimizer: point outside the BMO domain");
    return std::sqrt(std::max(0.0, eps * eps - x.x2 + x.x1 * x.x1));
}

double max_quadratic(double c0, double c1, double c2) {
    double best = std::max(c0, c0 + c1 + c2);
    if (c2 < 0.0) {
        const double t = -c1 / (2.0 * c2);
        if (t > 0.0 && t < 1.0) best = std::max(best, c0 + c1 * t + c2 * t * t);
    }
    return best;
}

}  // namespace

DyadicFunction jn_optimizer(const Point& x, double eps, int depth) {
    const double R = bmo_radius(x, eps);
    const double u = x.x1 + R - eps;
    return log_profile(u, (x.x1 - u) / eps, eps, 1.0, depth);
}

DyadicFunction jn_lower_optimizer(const Point& x, double eps, int depth) {
    const double R = bmo_radius(x, eps);
    const double u = x.x1 - R + eps;
    return log_profile(u, (u - x.x1) / eps, eps, -1.0, depth);
}

AlphaRoots maximal_alpha_roots(double L, double v, int n) {
    if (!(L > 0.0) || !(v > L * L)) throw std::invalid_argument("maximal optimizer: need v > L^2 > 0");
    if (n < 2) throw std::invalid_argument("maximal optimizer: need n >= 2");
    const double c = std::ldexp(1.0, 1 - n);
    const double r = L * L / v;
    const double s = std::sqrt(1.0 + c);
    const double q = std::sqrt(1.0 - r);
    return {s * (s - q) / (r + c), s * (s + q) / (r + c)};
}

double maximal_beta(double alpha, int n) { return 1.0 + std::ldexp(1.0, 1 - n) * (1.0 - alpha); }

MaximalOptimizer maximal_optimizer(double L, double v, int n, double fill_tol, int max_depth) {
    const auto roots = maximal_alpha_roots(L, v, n);
    const double alpha = roots.minus;
    const double beta = maximal_beta(alpha, n);
    if (!(fill_tol > 0.0 && fill_tol < 1.0)) throw std::invalid_argument("maximal optimizer: need 0 < fill_tol < 1");
    const int depth = std::min(max_depth, n + static_cast<int>(std::ceil(std::log2(1.0 / fill_tol))));
    if (depth < 1) throw std::invalid_argument("maximal optimizer: depth must be positive");

    // Level d holds exact cell averages of w_n at resolution 2^-d.
    std::vector<std::vector<double>> vals(depth + 1);
    std::vector<std::vector<bool>> res(depth + 1);
    vals[0] = {L};  // <w_n> = L
    res[0] = {false};
    for (int d = 1; d <= depth; ++d) {
        auto& cur = vals[d];
        auto& ok = res[d];
        cur.reserve(std::size_t{1} << d);
        ok.reserve(std::size_t{1} << d);
        int kmax = d;
        if (d >= n) {
            const std::size_t k = std::size_t{1} << (d - n);
            cur.insert(cur.end(), k, alpha * L);
            ok.insert(ok.end(), k, true);
            kmax = n;
        } else {
            const double share = std::ldexp(1.0, d - n);
            cur.push_back(share * alpha * L + (1.0 - share) * L);
            ok.push_back(false);
        }
        for (int k = kmax; k >= 2; --k) {
            cur.insert(cur.end(), vals[d - k].begin(), vals[d - k].end());
            ok.insert(ok.end(), res[d - k].begin(), res[d - k].end());
        }
        for (double w : vals[d - 1]) cur.push_back(beta * w);
        ok.insert(ok.end(), res[d - 1].begin(), res[d - 1].end());
    }

    DyadicFunction w(0.0, 1.0, depth, vals[depth]);
    const auto stats = averages(w, {0, 0});
    const auto Mw = dyadic_maximal(w, L);
    long double energy = 0.0L;
    for (double m : Mw.values()) energy += static_cast<long double>(m) * m;
    const auto unresolved = std::count(res[depth].begin(), res[depth].end(), false);
    return {L,
            v,
            n,
            alpha,
            beta,
            depth,
            static_cast<double>(unresolved) / static_cast<double>(w.size()),
            w,
            res[depth],
            stats.mean,
            stats.mean_sq,
            v / (alpha * alpha),
            static_cast<double>(energy / static_cast<long double>(Mw.size()))};
}

std::string to_string(SplitStop s) {
    switch (s) {
        case SplitStop::AcceptAtHalf: return "Accept_at_half";
        case SplitStop::Tangency: return "Tangency";
        case SplitStop::NotFound: return "NotFound";
    }
    return "Unknown";
}

double chord_rho(const Point& p, const Point& q) {
    const double d1 = q.x1 - p.x1, d2 = q.x2 - p.x2;
    return max_quadratic(p.x2 - p.x1 * p.x1, d2 - 2.0 * p.x1 * d1, -d1 * d1);
}

SplitDecision split_interval(const DyadicFunction& f, double a, double b, double eps, double delta,
                             double root_tol) {
    if (!(eps < delta)) throw std::invalid_argument("split_interval: need eps < delta");
    const Point x0{f.mean_on(a, b), f.mean_sq_on(a, b)};
    if (x0.x2 - x0.x1 * x0.x1 > eps * eps + kDyadicTol * (1.0 + std::abs(x0.x2)))
        throw std::invalid_argument("split_interval: parent point lies outside the eps-domain");

    const double len = b - a;
    auto children = [&](double alpha_plus) {
        const double s = a + (1.0 - alpha_plus) * len;
        return std::pair<Point, Point>{{f.mean_on(a, s), f.mean_sq_on(a, s)}, {f.mean_on(s, b), f.mean_sq_on(s, b)}};
    };
    const double target = delta * delta;

    auto [xm, xp] = children(0.5);
    const double rho_half = chord_rho(xm, xp);
    if (rho_half <= target) return {0.5, xm, xp, x0, a + 0.5 * len, rho_half, SplitStop::AcceptAtHalf};

    // Offending side: the child whose half-chord to the parent leaves the domain.
    const bool plus_side = chord_rho(x0, xp) >= chord_rho(xm, x0);
    auto side_rho = [&](double alpha_plus) {
        if (plus_side && alpha_plus >= 1.0) return x0.x2 - x0.x1 * x0.x1;
        if (!plus_side && alpha_plus <= 0.0) return x0.x2 - x0.x1 * x0.x1;
        const auto [m, p] = children(alpha_plus);
        return plus_side ? chord_rho(x0, p) : chord_rho(m, x0);
    };
    // Bracket: `bad` end has rho > delta^2, `good` end has rho <= delta^2.
    double bad = 0.5, good = plus_side ? 1.0 : 0.0;
    if (side_rho(good) > target) return {0.5, xm, xp, x0, a + 0.5 * len, rho_half, SplitStop::NotFound};
    while (std::abs(good - bad) > root_tol) {
        const double mid = 0.5 * (good + bad);
        if (mid == good || mid == bad) break;
        (side_rho(mid) > target ? bad : good) = mid;
    }
    if (good <= 0.0 || good >= 1.0) return {0.5, xm, xp, x0, a + 0.5 * len, rho_half, SplitStop::NotFound};
    const auto [m, p] = children(good);
    return {good, m, p, x0, a + (1.0 - good) * len, chord_rho(m, p), SplitStop::Tangency};
}

}  // namespace bellman
