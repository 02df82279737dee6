#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "bellman/geometry.hpp"

namespace bellman {

using Vec2 = std::array<double, 2>;

/// Symmetric 2x2 matrix.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;

    double det() const { return a11 * a22 - a12 * a12; }
    double form(const Vec2& d) const { return a11 * d[0] * d[0] + 2.0 * a12 * d[0] * d[1] + a22 * d[1] * d[1]; }
    double norm() const;  // Frobenius
};

/// The JN upper function requires delta < 1; beyond that the supremum is infinite.
class InfiniteBellman : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class JnBranch { Upper, Lower };

double buckley_value(const Point& x, double delta);
double two_weight_value(const Point& x, double m, double M);

/// Upper: (1-R)/(1-delta) exp(x1+R-delta); lower: (1+R)/(1+delta) exp(x1-R+delta),
/// R = sqrt(delta^2 - x2 + x1^2). Defined on the BMO domain of radius delta.
double jn_value(const Point& x, double eps, double delta, JnBranch branch);

/// Closed-form Hessian quadratic form of jn_value in direction d.
double jn_hessian_form(const Point& x, double delta, JnBranch branch, const Vec2& d);

/// Uses x.L.
double maximal_value(const Point& x);
/// Extension to x1 > L by B(x; x1).
double maximal_value_extended(const Point& x, double L);

/// g(t) = log G(t) for the JN candidate written as G(x2 - x1^2) e^{x1}.
double jn_g(double t, double delta, JnBranch branch);
double jn_g_prime(double t, double delta, JnBranch branch);
double jn_g_second(double t, double delta, JnBranch branch);
/// g'' - 2 g' g'' - 2 g'^3 evaluated from the closed-form derivatives.
double jn_g_ode_residual(double t, double delta, JnBranch branch);

enum class Candidate { Buckley, TwoWeight, JnUpper, JnLower, Maximal, MaximalExtended };

/// A closed-form candidate together with its parameters.
struct Surface {
    Candidate kind;
    double eps = 0.0;    // JN domain radius
    double delta = 0.0;  // Buckley constant, or the JN evaluation radius
    double m = 0.0;
    double M = 0.0;
    double L = 0.0;  // maximal default when the point has no L

    static Surface buckley(double delta);
    static Surface two_weight(double m, double M);
    static Surface jn(double eps, double delta, JnBranch branch);
    static Surface maximal(double L);
    static Surface maximal_extended(double L);

    /// Domain on which the candidate is evaluated (for JN the delta-domain).
    Domain domain() const;
    double value(const Point& x) const;
    std::string name() const;
    /// +1 for suprema (locally concave candidates), -1 for the JN lower infimum.
    double orientation() const { return kind == Candidate::JnLower ? -1.0 : 1.0; }
};

Vec2 gradient(const Surface& s, const Point& x);
Mat2 hessian(const Surface& s, const Point& x);

/// Central differences with step 1e-5 (1 + |x|), falling back to one-sided
/// stencils when a node leaves the domain.
Vec2 fd_gradient(const Surface& s, const Point& x, double step_scale = 1e-5);
Mat2 fd_hessian(const Surface& s, const Point& x, double step_scale = 1e-5);

/// Hessian entering the concavity check; for Buckley the cost term adds
/// 8 / x1^2 to the (1,1) entry.
Mat2 concavity_matrix(const Surface& s, const Point& x);

}  // namespace bellman
