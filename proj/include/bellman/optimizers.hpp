#pragma once

#include <string>
#include <vector>

#include "bellman/dyadic.hpp"
#include "bellman/geometry.hpp"

namespace bellman {

/// Extremal function for the JN supremum at x on [0,1]: the log profile
/// u + eps log(l / t) on [0, l] followed by the constant u, where
/// u = x1 + sqrt(eps^2 - x2 + x1^2) - eps and l = (x1 - u) / eps.
/// Sampled by exact cell averages.
DyadicFunction jn_optimizer(const Point& x, double eps, int depth);

/// Mirror construction for the JN infimum: u - eps log(l / t) on [0, l], then
/// u, with u = x1 - sqrt(eps^2 - x2 + x1^2) + eps and l = (u - x1) / eps.
DyadicFunction jn_lower_optimizer(const Point& x, double eps, int depth);

/// Both roots of the moment system for the maximal optimizer; `minus` is the
/// one used by the construction, `plus` tends to the far intersection of the
/// extremal line with the lower parabola.
struct AlphaRoots {
    double minus;
    double plus;
};
AlphaRoots maximal_alpha_roots(double L, double v, int n);
double maximal_beta(double alpha, int n);

struct MaximalOptimizer {
    double L, v;
    int n;
    double alpha_n, beta_n;
    int depth;                 // resolution of `w`
    double unfilled_measure;   // measure of cells holding an averaged copy rather than a resolved constant
    DyadicFunction w;
    std::vector<bool> resolved;  // cell holds a constant piece of the recursion
    double mean, mean_sq;        // moments of the sampled w
    double objective;            // v / alpha_n^2 = <(M w_n)^2> of the exact recursion
    double objective_sampled;    // <(M w)^2> of the sampled w with the same L
};

/// Self-similar recursion w_n: alpha_n L on (0, 2^-n), copies of w_n on
/// (2^-k, 2^-k+1) for 2 <= k <= n, beta_n w_n(2t - 1) on (1/2, 1). Cells are
/// exact averages; the fill depth is n + ceil(log2(1 / fill_tol)) capped at
/// `max_depth`. Throws for v <= L^2 or n < 2.
MaximalOptimizer maximal_optimizer(double L, double v, int n, double fill_tol = 1e-3, int max_depth = 20);

enum class SplitStop { AcceptAtHalf, Tangency, NotFound };
std::string to_string(SplitStop s);

struct SplitDecision {
    double alpha_plus;  // |I+| / |I|, I+ the right part
    Point x_minus, x_plus, x_parent;
    double split_point;
    double rho_at_stop;  // max of x2 - x1^2 over the chord [x-, x+]
    SplitStop stopped_by;
};

/// Splitting-lemma choice of alpha for f on [a, b]: accept 1/2 if the chord of
/// child Bellman points stays in the delta-domain, else bisect toward the
/// parent on the offending side until the chord touches x2 = x1^2 + delta^2.
SplitDecision split_interval(const DyadicFunction& f, double a, double b, double eps, double delta,
                             double root_tol = 1e-13);

/// max over the chord [p, q] of x2 - x1^2.
double chord_rho(const Point& p, const Point& q);

}  // namespace bellman
