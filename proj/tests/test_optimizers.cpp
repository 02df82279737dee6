#include <doctest.h>

#include <cmath>
#include <random>

#include "bellman/candidates.hpp"
#include "bellman/optimizers.hpp"

using namespace bellman;

TEST_CASE("JN optimizer reproduces the sharp constant") {
    const double eps = 0.5;
    const auto phi = jn_optimizer({0.0, eps * eps}, eps, 20);
    const auto s = averages(phi, {0, 0});
    CHECK(std::abs(s.mean_exp - std::exp(-eps) / (1 - eps)) <= 1e-3);
    CHECK(s.mean == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(s.mean_sq == doctest::Approx(eps * eps).epsilon(1e-6));
    CHECK(bmo_norm_sq(phi) <= eps * eps + 1e-9);
    // Exact cell average of 0.5 log(1/t) - 0.5 on the first cell.
    const double h = std::ldexp(1.0, -20);
    CHECK(phi[0] == doctest::Approx(-0.5 * (std::log(h) - 1.0) - 0.5).epsilon(1e-13));
}

TEST_CASE("JN optimizer moments at general points") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(-1.0, 1.0), T(0.0, 1.0);
    const double eps = 0.4;
    for (int i = 0; i < 10; ++i) {
        const double x1 = U(rng);
        const Point x{x1, x1 * x1 + T(rng) * eps * eps};
        for (auto make : {jn_optimizer, jn_lower_optimizer}) {
            const auto s = averages(make(x, eps, 20), {0, 0});
            CHECK(std::abs(s.mean - x.x1) <= 1e-6);
            CHECK(std::abs(s.mean_sq - x.x2) <= 1e-6);
        }
    }
    for (auto make : {jn_optimizer, jn_lower_optimizer}) {
        const auto c = make({0.3, 0.09}, eps, 6);
        for (double v : c.values()) CHECK(v == doctest::Approx(0.3));
    }
    CHECK_THROWS(jn_optimizer({0.0, 0.5}, eps, 10));
    CHECK_THROWS(jn_optimizer({0.0, 0.5}, 1.0, 10));
}

TEST_CASE("JN optimizers approach the candidate monotonically") {
    const double eps = 0.5;
    const Point x{0.2, 0.04 + 0.15};
    const double upper = jn_value(x, eps, eps, JnBranch::Upper);
    const double lower = jn_value(x, eps, eps, JnBranch::Lower);
    double last_up = INFINITY, last_low = INFINITY;
    for (int depth : {8, 12, 16, 20}) {
        const double up = upper - averages(jn_optimizer(x, eps, depth), {0, 0}).mean_exp;
        const double low = std::abs(lower - averages(jn_lower_optimizer(x, eps, depth), {0, 0}).mean_exp);
        CHECK(up > 0.0);
        CHECK(up < last_up);
        CHECK(low < last_low);
        last_up = up;
        last_low = low;
    }
    CHECK(last_up <= 1e-3);
    CHECK(std::abs(averages(jn_lower_optimizer({0.0, eps * eps}, eps, 20), {0, 0}).mean_exp -
                   std::exp(eps) / (1 + eps)) <= 2e-3);
}

TEST_CASE("maximal alpha roots solve the moment system") {
    for (double L : {0.5, 1.0, 2.0}) {
        for (double ratio : {1.1, 2.0, 5.0}) {
            const double v = ratio * L * L;
            for (int n : {2, 3, 5, 10, 20}) {
                const auto r = maximal_alpha_roots(L, v, n);
                const double c = std::ldexp(1.0, -n);
                for (double a : {r.minus, r.plus}) {
                    // Mean fixes beta; the second moment must then close.
                    const double beta = maximal_beta(a, n);
                    CHECK(c * a + (0.5 - c) + 0.5 * beta == doctest::Approx(1.0).epsilon(1e-14));
                    const double residual = v * (0.5 + c - 0.5 * beta * beta) - c * a * a * L * L;
                    CHECK(std::abs(residual) <= 1e-12 * v);
                }
                CHECK(r.minus < 1.0);
                CHECK(r.plus > 1.0);
            }
        }
    }
    // Limits: the lower-boundary endpoint u/L and the far intersection xi/L.
    const auto r = maximal_alpha_roots(1.0, 2.0, 50);
    const double u = 2.0 - std::sqrt(2.0);
    CHECK(r.minus == doctest::Approx(u).epsilon(1e-12));
    CHECK(r.plus == doctest::Approx(u / (2 * u - 1)).epsilon(1e-12));
    CHECK_THROWS(maximal_alpha_roots(1.0, 1.0, 5));
    CHECK_THROWS(maximal_alpha_roots(1.0, 2.0, 1));
}

TEST_CASE("maximal objective converges monotonically") {
    const double target = 3.0 + 2.0 * std::sqrt(2.0);
    double last = 0.0;
    for (int n = 2; n <= 30; ++n) {
        const double a = maximal_alpha_roots(1.0, 2.0, n).minus;
        const double obj = 2.0 / (a * a);
        CHECK(obj >= last);
        CHECK(obj <= target);
        last = obj;
    }
    CHECK(std::abs(2.0 / std::pow(maximal_alpha_roots(1.0, 2.0, 20).minus, 2) - target) <= 1e-3);
}

TEST_CASE("maximal optimizer function") {
    const auto opt = maximal_optimizer(1.0, 2.0, 6, 1e-4, 22);
    CHECK(opt.depth == 6 + 14);
    CHECK(opt.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(opt.mean_sq <= 2.0 + 1e-12);
    CHECK(opt.objective == doctest::Approx(2.0 / (opt.alpha_n * opt.alpha_n)));
    CHECK(opt.w[0] == doctest::Approx(opt.alpha_n));
    CHECK(opt.unfilled_measure < 1.0);

    // On resolved cells the maximal function is the value scaled by 1/alpha.
    const auto Mw = dyadic_maximal(opt.w, 1.0);
    int resolved = 0;
    for (std::size_t i = 0; i < opt.w.size(); ++i) {
        if (!opt.resolved[i]) continue;
        ++resolved;
        CHECK(Mw[i] == doctest::Approx(opt.w[i] / opt.alpha_n).epsilon(1e-12));
    }
    CHECK(resolved > 0);

    // Deeper fill brings the second moment closer to v.
    const auto coarse = maximal_optimizer(1.0, 2.0, 4, 1e-2, 12);
    const auto fine = maximal_optimizer(1.0, 2.0, 4, 1e-6, 22);
    CHECK(std::abs(fine.mean_sq - 2.0) < std::abs(coarse.mean_sq - 2.0));
    CHECK(fine.unfilled_measure < coarse.unfilled_measure);
    CHECK_THROWS(maximal_optimizer(1.0, 0.5, 4));
}

TEST_CASE("chord maximum of the variance coordinate") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const Point p{U(rng), U(rng) + 4.0}, q{U(rng), U(rng) + 4.0};
        double best = -INFINITY;
        for (int k = 0; k <= 10000; ++k) {
            const double t = k / 10000.0;
            const double x1 = p.x1 + t * (q.x1 - p.x1), x2 = p.x2 + t * (q.x2 - p.x2);
            best = std::max(best, x2 - x1 * x1);
        }
        CHECK(chord_rho(p, q) >= best - 1e-12);
        CHECK(chord_rho(p, q) <= best + 1e-6);
    }
}

TEST_CASE("splitting lemma") {
    const double eps = 0.5;
    SUBCASE("constant function") {
        const auto d = split_interval(DyadicFunction::constant(0.0, 1.0, 4, 2.0), 0.0, 1.0, eps, 0.55);
        CHECK(d.stopped_by == SplitStop::AcceptAtHalf);
        CHECK(d.alpha_plus == 0.5);
        CHECK(d.rho_at_stop == doctest::Approx(0.0).scale(1.0));
    }
    const auto phi = jn_optimizer({0.0, eps * eps}, eps, 16);
    SUBCASE("wide margin accepts the half split") {
        const auto d = split_interval(phi, 0.0, 1.0, eps, 0.55);
        CHECK(d.stopped_by == SplitStop::AcceptAtHalf);
        CHECK(segment_in_domain(BmoDomain{0.55}, d.x_minus, d.x_plus).inside);
    }
    SUBCASE("narrow margin stops at tangency") {
        const double delta = 0.51;
        const auto d = split_interval(phi, 0.0, 1.0, eps, delta);
        REQUIRE(d.stopped_by == SplitStop::Tangency);
        CHECK(std::abs(d.rho_at_stop - delta * delta) <= 1e-9);
        const double a = std::min(d.alpha_plus, 1 - d.alpha_plus);
        CHECK(a >= std::sqrt(1 - (eps / delta) * (eps / delta)) - 1e-13);
        const double am = 1 - d.alpha_plus;
        CHECK(std::abs(am * d.x_minus.x1 + d.alpha_plus * d.x_plus.x1 - d.x_parent.x1) <= 1e-12);
        CHECK(std::abs(am * d.x_minus.x2 + d.alpha_plus * d.x_plus.x2 - d.x_parent.x2) <= 1e-12);
        CHECK(d.split_point == doctest::Approx(1 - d.alpha_plus));

        const auto again = split_interval(phi, 0.0, 1.0, eps, delta);
        CHECK(again.alpha_plus == d.alpha_plus);
        CHECK(again.rho_at_stop == d.rho_at_stop);
    }
    CHECK_THROWS(split_interval(phi, 0.0, 1.0, eps, eps));
    CHECK(to_string(SplitStop::AcceptAtHalf) == "Accept_at_half");
}
