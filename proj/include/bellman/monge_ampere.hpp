#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "bellman/candidates.hpp"
#include "bellman/geometry.hpp"

namespace bellman {

/// Straight line of a foliation on which the candidate is linear:
/// B = t0 + x1 t1 + x2 t2.
struct FoliationLine {
    double u;         // lower-boundary endpoint (u, u^2)
    double a;         // JN: tangency abscissa on the upper parabola; maximal: fan center L/2
    Vec2 direction;   // unit, positive x1-component
    double t0, t1, t2;

    double value(const Point& x) const { return t0 + x.x1 * t1 + x.x2 * t2; }
};

/// Unit null vector of the (concavity) Hessian at x, oriented with positive
/// x1-component (positive x2-component when vertical). Throws
/// std::domain_error when the Hessian vanishes or has rank 2.
Vec2 kernel_direction(const Surface& s, const Point& x, double rank_tol = 1e-6);

struct TrajectoryPoint {
    double s;  // arclength from the first endpoint
    double x1, x2;
    double t0, t1, t2;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    double drift_t0 = 0.0, drift_t1 = 0.0, drift_t2 = 0.0;  // max |t_i - t_i(x0)|
    double straightness = 0.0;  // max distance of a point from the end-to-end chord
    double length = 0.0;
    Boundary start_boundary = Boundary::Interior, end_boundary = Boundary::Interior;
    bool truncated = false;        // the kernel field became undefined before the boundary
    bool lower_to_lower = false;   // both endpoints on x2 = x1^2; never expected for an extremal line

    void write_csv(std::ostream& os) const;
};

/// Integrates the kernel field through x0 in both directions with adaptive
/// RK4 until the boundary band of width `boundary_margin` is reached.
Trajectory trace_trajectory(const Surface& s, const Point& x0, double step = 1e-2, double max_len = 10.0,
                            double boundary_margin = 1e-10);

/// Line through x tangent to x2 = x1^2 + delta^2 carrying the JN candidate.
/// Upper: a = x1 + R, u = a - delta; lower: a = x1 - R, u = a + delta.
FoliationLine jn_extremal_line(const Point& x, double delta, JnBranch branch = JnBranch::Upper);

/// Fan line of the maximal candidate through x and (L/2, 0). Needs x.L and
/// L/2 < x1 <= L.
FoliationLine maximal_fan_line(const Point& x);

/// Candidate built from lower-boundary data f along tangent lines of the
/// eps-parabola: B(x) = f(u) + k(u) (x1 - u), with k the exponentially
/// weighted average of f' toward +infinity (upper) or -infinity (lower).
class BoundaryReconstruction {
public:
    BoundaryReconstruction(std::function<double(double)> f, std::function<double(double)> f_prime, double eps,
                           JnBranch branch, double tol = 1e-10);

    double k(double u) const;
    double lower_point(const Point& x) const;  // u(x)
    double operator()(const Point& x) const;

private:
    std::function<double(double)> f_, f_prime_;
    double eps_;
    double sign_;
    double tol_;
};

}  // namespace bellman
