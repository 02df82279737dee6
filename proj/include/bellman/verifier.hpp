#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bellman/candidates.hpp"
#include "bellman/dyadic.hpp"
#include "bellman/geometry.hpp"
#include "bellman/optimizers.hpp"

namespace bellman {

/// Additive term of the main inequality B(x) >= (B(x+) + B(x-))/2 + cost.
enum class Cost { Zero, BuckleySquare, TwoWeightProduct, MaximalZero };

double cost_value(Cost c, const Point& x, const Point& x_minus, const Point& x_plus);
Cost default_cost(const Surface& s);
std::string to_string(Cost c);

struct Violation {
    Point x, x_plus, x_minus;
    double lhs;     // B(x)
    double rhs;     // (B(x+) + B(x-))/2 + cost
    double defect;  // rhs - lhs (sign flipped for infimum candidates); > 0 means violation
};

struct Sampler {
    std::size_t count = 100000;
    std::uint64_t seed = 0;
    double max_radius = 0.0;  // 0 selects a per-problem default
    unsigned threads = 0;     // 0 selects default_threads()
};

/// Domain over which test functions range: for JN the eps-domain, whatever
/// delta the candidate is evaluated with.
Domain problem_domain(const Surface& s);

/// Random triples x = (x+ + x-)/2 with x, x+- in the problem domain; returns
/// every triple where the candidate misses the main inequality by more than
/// 1e-9 (1 + |B(x)|). For the maximal problem x+- carry L+- = max(x1+-, L).
std::vector<Violation> main_inequality_scan(const Surface& s, Cost cost, const Sampler& sampler,
                                            double slack = 1e-9);

struct InductionReport {
    std::vector<double> totals;  // per generation: sum |I| B(x^I) + accumulated cost
    bool monotone;               // totals nonincreasing within slack
    double max_increase;         // largest totals[n+1] - totals[n]
    double top;                  // |J| B(x^J)
    double objective;            // integral functional the induction bounds
    bool bound_holds;            // top >= objective within slack
};

/// Telescopes the main inequality down the dyadic tree of f. `second` is the
/// weight v of the two-weight problem; `L` the external maximal parameter
/// (defaults to <w>_J). Throws std::invalid_argument naming the violated
/// admissibility constraint.
InductionReport bellman_induction(const Surface& s, Cost cost, const DyadicFunction& f,
                                  const DyadicFunction* second = nullptr, std::optional<double> L = std::nullopt,
                                  double slack = 1e-9);

enum class DpProblem { Buckley, Bmo };

struct DpConfig {
    DpProblem problem = DpProblem::Bmo;
    double delta = 2.0;  // Buckley
    double eps = 0.5;    // BMO
    /// Data on the lower boundary x2 = x1^2 (BMO problems); defaults to exp.
    std::function<double(double)> boundary;
    /// The data satisfies f(u + tau) = e^tau f(u), which extends the grid
    /// beyond its x1 window by translation.
    bool exp_translation = true;
    double h = 0.01;
    double x1_lo = -1.0, x1_hi = 1.0;  // BMO window
    int directions = 8;
    int radii = 8;
    bool inject_extremal = true;  // add tangent directions to the upper boundary
    bool zero_split_only = false;  // degenerate split set {0}
    double tol = 1e-8;
    int max_iter = 20000;
    unsigned threads = 0;
};

/// Value-iteration solution. For BMO problems the grid is (x1, t = x2 - x1^2);
/// for Buckley it is the reduced variable s = x1 e^{-x2} on [1, delta].
struct GridSolution {
    DpProblem problem;
    double eps = 0.0, delta = 0.0;
    double x1_lo = 0.0, h1 = 0.0;
    std::size_t n1 = 0;
    double h2 = 0.0;
    std::size_t n2 = 1;
    std::vector<double> values;  // row-major, index i2 * n1 + i1
    int iterations = 0;
    double final_update = 0.0;
    bool converged = false;

    double value(std::size_t i1, std::size_t i2) const { return values[i2 * n1 + i1]; }
    Point node(std::size_t i1, std::size_t i2) const;
    void write_csv(std::ostream& os) const;
};

GridSolution dp_solve(const DpConfig& cfg);

struct GridGap {
    double max_relative_gap;  // max over nodes of (candidate - dp) / |candidate|
    double max_excess;        // max over nodes of dp - candidate
    double max_value;
};
GridGap compare_to_candidate(const GridSolution& g, const Surface& s);

struct NondyadicReport {
    bool passed;
    int nodes;
    double max_concavity_defect;  // max of |I+|B+ + |I-|B- - |I|B over nodes
    double max_chord_excess;      // max over split chords of x2 - x1^2 - delta^2
    double min_alpha;
    double separation_bound;      // sqrt(1 - (eps/delta)^2)
    bool separation_holds;        // min alpha at Tangency stops >= bound - tol
    int tangency_stops;
    double top;                   // B(x^J)
    double objective;             // <e^f>_J
    std::string failure;          // empty on success; node address otherwise
};

/// Non-dyadic Bellman induction for the JN candidate: every node is split by
/// split_interval down to `levels` generations.
NondyadicReport nondyadic_induction(const Surface& s, const DyadicFunction& f, double eps, double delta,
                                    int levels = 10, double slack = 1e-9);

}  // namespace bellman
