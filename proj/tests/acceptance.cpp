// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "bellman/candidates.hpp"
#include "bellman/dyadic.hpp"
#include "bellman/monge_ampere.hpp"
#include "bellman/optimizers.hpp"
#include "bellman/verifier.hpp"

using namespace bellman;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < limit_s;
    const bool ok = r.ok && in_time;
    if (!ok) ++failures;
    std::printf("%s [%d] %s: %s (%.2f s, limit %.0f s%s)\n", ok ? "PASS" : "FAIL", id, name, r.detail.c_str(), secs,
                limit_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
}

std::vector<double> random_values(std::mt19937_64& rng, int depth, const std::function<double(std::mt19937_64&)>& draw) {
    std::vector<double> v(std::size_t{1} << depth);
    for (auto& x : v) x = draw(rng);
    return v;
}

Outcome jn_sharp_constant() {
    const double eps = 0.5;
    const auto phi = jn_optimizer({0.0, eps * eps}, eps, 20);
    const double got = averages(phi, {0, 0}).mean_exp;
    const double target = std::exp(-eps) / (1 - eps);
    const double err = std::abs(got - target);
    return {err <= 1e-3, fmt("<e^phi> = %.7f, target %.7f, |error| = %.2e <= 1e-3", got, target, err)};
}

Outcome maximal_sharpness() {
    const double L = 1.0, v = 2.0, target = 3 + 2 * std::sqrt(2.0);
    bool monotone = true;
    double last = 0.0;
    for (int n = 2; n <= 20; ++n) {
        const double a = maximal_alpha_roots(L, v, n).minus;
        const double obj = v / (a * a);
        if (obj < last) monotone = false;
        last = obj;
    }
    const auto opt = maximal_optimizer(L, v, 20);
    const double err = std::abs(opt.objective - target);
    const bool moments = std::abs(opt.mean - L) <= 1e-9;
    return {err <= 1e-3 && monotone && moments && opt.objective == last,
            fmt("v/alpha_20^2 = %.7f, |error| = %.2e <= 1e-3, monotone in n: %s, <w> = %.12f", opt.objective, err,
                monotone ? "yes" : "no", opt.mean)};
}

Outcome buckley_suite() {
    std::mt19937_64 rng(20240601);
    int exceptions = 0;
    double worst = -INFINITY;
    for (int i = 0; i < 200; ++i) {
        const double spread = 0.05 + 2.0 * (i % 20) / 19.0;
        std::normal_distribution<double> N(0.0, spread);
        const DyadicFunction w(0.0, 1.0, 12, random_values(rng, 12, [&](auto& g) { return std::exp(N(g)); }));
        const double lhs = buckley_sum(w), rhs = 8.0 * std::log(ainf_ratio(w));
        worst = std::max(worst, lhs - rhs);
        if (lhs > rhs + 1e-9) ++exceptions;
    }
    return {exceptions == 0, fmt("200 weights at depth 12, exceptions = %d, max(sum - 8 log ratio) = %.3e", exceptions, worst)};
}

Outcome dichotomy() {
    Sampler s;
    s.count = 100000;
    s.seed = 42;
    const auto bad = main_inequality_scan(Surface::jn(0.5, 0.5, JnBranch::Upper), Cost::Zero, s);
    const auto good = main_inequality_scan(Surface::jn(0.5, 0.55, JnBranch::Upper), Cost::Zero, s);
    return {!bad.empty() && good.empty(),
            fmt("1e5 triples: delta = eps gives %zu violations (need >= 1), delta = 0.55 gives %zu (need 0)", bad.size(),
                good.size())};
}

Outcome degeneracy() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0), D(-1.0, 1.0);
    double worst_det = 0.0, worst_form = -INFINITY, min_ext_det = INFINITY;
    auto check = [&](const Surface& s, const Point& x, bool degenerate) {
        const Mat2 h = concavity_matrix(s, x);
        const double n2 = h.norm() * h.norm();
        if (degenerate) {
            worst_det = std::max(worst_det, n2 > 0 ? std::abs(h.det()) / n2 : std::abs(h.det()));
        } else {
            min_ext_det = std::min(min_ext_det, h.det() / n2);
        }
        const Vec2 d{D(rng), D(rng)};
        worst_form = std::max(worst_form, s.orientation() * h.form(d) / std::max(1.0, h.norm()));
    };
    const double delta = 0.5, L = 1.0;
    for (int i = 0; i < 1000; ++i) {
        const double logd = std::log(2.0);
        const double x1 = std::exp(-2 + 4 * U(rng));
        check(Surface::buckley(2.0), {x1, std::log(x1) - logd * (0.01 + 0.98 * U(rng))}, true);
        const double j1 = -1 + 2 * U(rng);
        const Point jx{j1, j1 * j1 + delta * delta * (0.01 + 0.98 * U(rng))};
        check(Surface::jn(delta, delta, JnBranch::Upper), jx, true);
        check(Surface::jn(delta, delta, JnBranch::Lower), jx, true);
        const double s = 0.01 + 2 * U(rng);
        const double left = L * (0.01 + 0.48 * U(rng)), right = L * (0.51 + 0.48 * U(rng));
        check(Surface::maximal(L), {left, left * left + s, L}, true);
        check(Surface::maximal(L), {right, right * right + s, L}, true);
        const double ext = L * (1.01 + U(rng));
        check(Surface::maximal_extended(L), {ext, ext * ext + s, L}, false);
    }
    // C1 seams of the extension: second-order one-sided differences, and the
    // closed-form gradients of the neighbouring pieces at the seam.
    double seam = 0.0;
    const double h = 1e-6;
    const auto ext = Surface::maximal_extended(L);
    for (int i = 0; i < 100; ++i) {
        const double x2 = L * L * (1.01 + 3 * U(rng));
        for (double at : {0.5 * L, L}) {
            const auto f = [&](double a) { return maximal_value_extended({a, x2}, L); };
            const double l = (3 * f(at) - 4 * f(at - h) + f(at - 2 * h)) / (2 * h);
            const double r = (-3 * f(at) + 4 * f(at + h) - f(at + 2 * h)) / (2 * h);
            seam = std::max(seam, std::abs(l - r) / (1 + std::abs(l)));
            const Vec2 gl = gradient(ext, {at, x2}), gr = gradient(ext, {std::nextafter(at, 2 * at), x2});
            for (int k : {0, 1}) seam = std::max(seam, std::abs(gl[k] - gr[k]) / (1 + std::abs(gl[k])));
        }
    }
    const bool ok = worst_det <= 1e-6 && worst_form <= 1e-12 && min_ext_det >= 0.0 && seam <= 1e-6;
    return {ok, fmt("max |det|/|H|^2 = %.2e on the foliated candidates, extension det >= 0 (min %.2e), "
                    "max oriented form = %.2e <= 0, C1 seam gap = %.2e <= 1e-6",
                    worst_det, min_ext_det, worst_form, seam)};
}

Outcome foliation() {
    double straight = 0.0, drift = 0.0;
    bool clean = true;
    auto trace = [&](const Surface& s, const Point& x) {
        const auto tr = trace_trajectory(s, x);
        straight = std::max(straight, tr.straightness);
        drift = std::max({drift, tr.drift_t0, tr.drift_t1, tr.drift_t2});
        clean = clean && !tr.truncated && !tr.lower_to_lower;
    };
    for (double x1 : {-0.5, 0.0, 0.3, 0.7})
        for (double t : {0.05, 0.125, 0.2}) {
            trace(Surface::jn(0.5, 0.5, JnBranch::Upper), {x1, x1 * x1 + t});
            trace(Surface::jn(0.5, 0.5, JnBranch::Lower), {x1, x1 * x1 + t});
        }
    for (double x1 : {0.6, 0.8, 0.95})
        for (double s : {0.1, 0.5, 1.5}) trace(Surface::maximal(1.0), {x1, x1 * x1 + s, 1.0});

    const auto e = [](double u) { return std::exp(u); };
    const double eps = 0.5;
    const BoundaryReconstruction up(e, e, eps, JnBranch::Upper), low(e, e, eps, JnBranch::Lower);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(-1.0, 1.0), T(0.0, 1.0);
    double recon = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x1 = U(rng);
        const Point x{x1, x1 * x1 + eps * eps * T(rng)};
        const auto b = i % 2 ? JnBranch::Upper : JnBranch::Lower;
        const double exact = jn_value(x, eps, eps, b);
        recon = std::max(recon, std::abs((b == JnBranch::Upper ? up(x) : low(x)) - exact) / exact);
    }
    return {clean && straight <= 1e-6 && drift <= 1e-5 && recon <= 1e-6,
            fmt("33 trajectories: straightness %.2e <= 1e-6, coefficient drift %.2e <= 1e-5; "
                "reconstruction error %.2e <= 1e-6 at 1000 points",
                straight, drift, recon)};
}

Outcome dp_oracle() {
    DpConfig bmo;
    bmo.eps = 0.5;
    bmo.h = 0.01;
    const auto g = dp_solve(bmo);
    const auto gap = compare_to_candidate(g, Surface::jn(0.5, 0.5, JnBranch::Upper));

    DpConfig bk;
    bk.problem = DpProblem::Buckley;
    bk.delta = 2.0;
    bk.h = 0.005;
    const auto b = dp_solve(bk);
    const double top = *std::max_element(b.values.begin(), b.values.end());
    const bool ok = g.converged && b.converged && gap.max_relative_gap <= 0.02 && gap.max_excess <= 1e-9 &&
                    top <= 8 * std::log(2.0) + 1e-9;
    return {ok, fmt("JN h = 0.01: relative gap %.4f <= 0.02, excess %.1e, %d iterations; Buckley: max %.4f <= 8 log 2 = %.4f",
                    gap.max_relative_gap, gap.max_excess, g.iterations, top, 8 * std::log(2.0))};
}

Outcome maximal_l2() {
    std::mt19937_64 rng(8);
    int bad = 0;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const int depth = 4 + i % 9;
        std::exponential_distribution<double> E(1.0 + i % 5);
        std::bernoulli_distribution zero(0.3);
        const DyadicFunction w(0.0, 1.0, depth, random_values(rng, depth, [&](auto& g) { return zero(g) ? 0.0 : E(g); }));
        const auto s = averages(w, {0, 0});
        const auto M = dyadic_maximal(w, s.mean);
        double energy = 0.0;
        for (double m : M.values()) energy += m * m;
        energy /= M.size();
        worst = std::max(worst, energy / (4 * s.mean_sq));
        if (energy > 4 * s.mean_sq) ++bad;
    }
    std::uniform_real_distribution<double> X(0.01, 5.0), S(0.0, 10.0);
    int cand_bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const double x1 = X(rng), x2 = x1 * x1 + S(rng);
        if (maximal_value({x1, x2, x1}) > 4 * x2 * (1 + 1e-12)) ++cand_bad;
    }
    return {bad == 0 && cand_bad == 0,
            fmt("200 functions: max <(Mw)^2>/(4<w^2>) = %.4f, exceptions %d; candidate B(x; x1) <= 4 x2 exceptions %d/1000",
                worst, bad, cand_bad)};
}

Outcome identities() {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-2.0, 2.0), T(0.001, 0.999);
    double cut = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const int depth = 1 + i % 8;
        const DyadicFunction f(0.0, 1.0, depth, random_values(rng, depth, [&](auto& g) { return U(g); }));
        cut = std::max(cut, std::abs(cutoff_identity_residual(f, U(rng), {0, 0})));
    }
    double ode = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double delta = 0.1 + 0.8 * T(rng);
        const auto b = i % 2 ? JnBranch::Upper : JnBranch::Lower;
        ode = std::max(ode, std::abs(jn_g_ode_residual(T(rng) * delta * delta, delta, b)));
    }
    const double c = 0.05, d = 2.0;
    const auto f = DyadicFunction::from_cell_means(c, d, 18, log_mean);
    double foot = 0.0;
    for (int k = 0; k <= 10; ++k)
        for (std::size_t i = 0; i < (std::size_t{1} << k); ++i) {
            const auto s = averages(f, {k, i});
            const double lo = f.cell_left({k, i}), hi = f.cell_right({k, i});
            const double l = std::log(hi / lo);
            foot = std::max(foot, std::abs(s.mean_sq - s.mean * s.mean - (1 - lo * hi * l * l / ((hi - lo) * (hi - lo)))));
        }
    return {cut < 1e-10 && ode < 1e-12 && foot <= 1e-6,
            fmt("cut-off residual %.2e < 1e-10 (1000 cases), ODE residual %.2e < 1e-12 (100 points), "
                "log variance identity %.2e <= 1e-6 (depth 18)",
                cut, ode, foot)};
}

}  // namespace

int main() {
    criterion(1, "JN sharp constant", 1, jn_sharp_constant);
    criterion(2, "maximal-operator sharpness", 5, maximal_sharpness);
    criterion(3, "Buckley inequality on random weights", 10, buckley_suite);
    criterion(4, "main-inequality dichotomy", 30, dichotomy);
    criterion(5, "Hessian degeneracy and concavity", 10, degeneracy);
    criterion(6, "Monge-Ampere foliation", 30, foliation);
    criterion(7, "DP oracle equivalence", 300, dp_oracle);
    criterion(8, "maximal operator L2 bound", 10, maximal_l2);
    criterion(9, "identity suites", 10, identities);
    std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
