#pragma once

#include <optional>
#include <string>
#include <variant>

namespace bellman {

/// Point in a Bellman domain. `L` is set only for the maximal-operator problem.
struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
    std::optional<double> L;
};

struct BuckleyDomain {
    double delta;  // A-infinity constant, > 1
};

struct BmoDomain {
    double eps;  // BMO norm bound, > 0
};

struct TwoWeightDomain {
    double m;  // lower bound on sqrt(x1 x2), >= 0
    double M;  // upper bound, > m
};

struct MaximalDomain {
    double L;
};

using Domain = std::variant<BuckleyDomain, BmoDomain, TwoWeightDomain, MaximalDomain>;

enum class Boundary {
    LowerParabola,
    UpperParabola,
    RightEdge,
    LowerHyperbola,
    UpperHyperbola,
    JensenEdge,
    AinfEdge,
    Interior,
    Outside,
};

inline constexpr double kClosedFormTol = 1e-12;
inline constexpr double kDyadicTol = 1e-9;

std::string to_string(Boundary b);
std::string describe(const Domain& d);

/// Membership with additive slack `tol`. Throws std::invalid_argument for a
/// maximal-domain point without `L`.
bool contains(const Domain& d, const Point& x, double tol = kClosedFormTol);

/// Boundary tag of `x`. A maximal point without `L` is read against the
/// domain's own `L`.
Boundary classify_boundary(const Domain& d, const Point& x, double tol = kClosedFormTol);

struct SegmentCheck {
    bool inside;
    double excess;  // max over the segment of the worst constraint defect; <= 0 inside
};

/// Worst constraint defect along [a, b]. Constraints quadratic in the chord
/// parameter are maximized exactly; the rest are sampled at `samples` points.
SegmentCheck segment_in_domain(const Domain& d, const Point& a, const Point& b, int samples = 64,
                               double tol = kClosedFormTol);

}  // namespace bellman
