#include "bellman/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace bellman {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// sqrt that forgives rounding noise below zero.
double clamped_sqrt(double v, double scale) {
    if (v >= 0.0) return std::sqrt(v);
    if (v >= -1e-14 * std::max(1.0, scale)) return 0.0;
    throw std::domain_error("square root of a negative quantity");
}

double sign_of(JnBranch b) { return b == JnBranch::Upper ? 1.0 : -1.0; }

double require_L(const Point& x) {
    if (!x.L) throw std::invalid_argument("maximal candidate needs the L parameter");
    return *x.L;
}

void require_in(const Domain& d, const Point& x, const char* who) {
    const double tol = kDyadicTol * (1.0 + std::abs(x.x1) + std::abs(x.x2));
    if (!contains(d, x, tol)) throw std::domain_error(std::string(who) + ": point outside " + describe(d));
}

struct JnParts {
    double s, R, E, denom;  // branch sign, radius term, exponential, 1 - s delta
};

JnParts jn_parts(const Point& x, double delta, JnBranch branch) {
    const double s = sign_of(branch);
    if (branch == JnBranch::Upper && delta >= 1.0)
        throw InfiniteBellman("JN upper function is infinite for delta >= 1");
    require_in(BmoDomain{delta}, x, "jn_value");
    const double R = clamped_sqrt(delta * delta - x.x2 + x.x1 * x.x1, 1.0 + x.x1 * x.x1);
    return {s, R, std::exp(x.x1 + s * R - s * delta), 1.0 - s * delta};
}

enum class Piece { Left, Middle, Right };

Piece maximal_piece(double x1, double L) {
    if (x1 <= 0.5 * L) return Piece::Left;
    if (x1 <= L) return Piece::Middle;
    return Piece::Right;
}

Vec2 maximal_gradient(const Point& x, double L) {
    const double r2 = std::sqrt(x.x2);
    switch (maximal_piece(x.x1, L)) {
        case Piece::Left: return {-8.0 * x.x1, 4.0};
        case Piece::Middle: {
            const double rq = clamped_sqrt(x.x2 - L * (2.0 * x.x1 - L), x.x2);
            return {-2.0 * L * (1.0 + r2 / rq), (r2 + rq) * (r2 + rq) / (r2 * rq)};
        }
        case Piece::Right: {
            const double rs = clamped_sqrt(x.x2 - x.x1 * x.x1, x.x2);
            return {-2.0 * x.x1 * (1.0 + r2 / rs), (r2 + rs) * (r2 + rs) / (r2 * rs)};
        }
    }
    return {kNaN, kNaN};
}

Mat2 maximal_hessian(const Point& x, double L) {
    const double x1 = x.x1, x2 = x.x2;
    switch (maximal_piece(x1, L)) {
        case Piece::Left: return {-8.0, 0.0, 0.0};
        case Piece::Middle: {
            const double q = x2 - L * (2.0 * x1 - L);
            const double q32 = std::pow(q, 1.5);
            const double k = 2.0 * x1 - L;
            return {-2.0 * L * L * std::sqrt(x2) / q32, L * L * k / (std::sqrt(x2) * q32),
                    -L * L * k * k / (2.0 * std::pow(x2, 1.5) * q32)};
        }
        case Piece::Right: {
            const double s = x2 - x1 * x1;
            const double s32 = std::pow(s, 1.5);
            return {-2.0 * std::pow(x2 / s, 1.5) - 2.0, x1 * x1 * x1 / (std::sqrt(x2) * s32),
                    -std::pow(x1, 4) / (2.0 * std::pow(x2, 1.5) * s32)};
        }
    }
    return {kNaN, kNaN, kNaN};
}

double surface_L(const Surface& s, const Point& x) { return x.L.value_or(s.L); }

}  // namespace

double Mat2::norm() const { return std::sqrt(a11 * a11 + 2.0 * a12 * a12 + a22 * a22); }

double buckley_value(const Point& x, double delta) {
    require_in(BuckleyDomain{delta}, x, "buckley_value");
    return 8.0 * (std::log(x.x1) - x.x2);
}

double two_weight_value(const Point& x, double m, double M) {
    require_in(TwoWeightDomain{m, M}, x, "two_weight_value");
    const double p = std::max(0.0, x.x1 * x.x2);
    return 4.0 * M * std::sqrt(p) - p + m * m - 4.0 * m * M;
}

double jn_value(const Point& x, double eps, double delta, JnBranch branch) {
    if (!(eps > 0.0) || delta < eps) throw std::invalid_argument("jn_value: need 0 < eps <= delta");
    const auto p = jn_parts(x, delta, branch);
    return (1.0 - p.s * p.R) / p.denom * p.E;
}

double jn_hessian_form(const Point& x, double delta, JnBranch branch, const Vec2& d) {
    const auto p = jn_parts(x, delta, branch);
    const double a = x.x1 + p.s * p.R;
    const double lin = a * d[0] - 0.5 * d[1];
    const double numer = -p.s * lin * lin * p.E;
    if (p.R == 0.0) {
        if (numer == 0.0) return 0.0;
        return std::copysign(std::numeric_limits<double>::infinity(), numer);
    }
    return numer / (p.R * p.denom);
}

double maximal_value(const Point& x) {
    const double L = require_L(x);
    if (!(x.x1 > 0.0) || x.x1 > L * (1.0 + 1e-12) || x.x2 < x.x1 * x.x1 - kDyadicTol * (1.0 + x.x2))
        throw std::domain_error("maximal_value: point outside the maximal domain");
    return maximal_value_extended({x.x1, x.x2, L}, L);
}

double maximal_value_extended(const Point& x, double L) {
    if (!(x.x1 > 0.0) || x.x2 < x.x1 * x.x1 - kDyadicTol * (1.0 + x.x2))
        throw std::domain_error("maximal_value_extended: need x1 > 0 and x2 >= x1^2");
    const double r2 = std::sqrt(x.x2);
    switch (maximal_piece(x.x1, L)) {
        case Piece::Left: return 4.0 * (x.x2 - x.x1 * x.x1) + L * L;
        case Piece::Middle: {
            const double rq = clamped_sqrt(x.x2 - L * (2.0 * x.x1 - L), x.x2);
            return (r2 + rq) * (r2 + rq);
        }
        case Piece::Right: {
            const double rs = clamped_sqrt(x.x2 - x.x1 * x.x1, x.x2);
            return (r2 + rs) * (r2 + rs);
        }
    }
    return kNaN;
}

double jn_g(double t, double delta, JnBranch branch) {
    const double s = sign_of(branch);
    const double r = clamped_sqrt(delta * delta - t, delta * delta);
    return std::log((1.0 - s * r) / (1.0 - s * delta)) + s * r - s * delta;
}

double jn_g_prime(double t, double delta, JnBranch branch) {
    const double r = clamped_sqrt(delta * delta - t, delta * delta);
    return 0.5 / (1.0 - sign_of(branch) * r);
}

double jn_g_second(double t, double delta, JnBranch branch) {
    const double s = sign_of(branch);
    const double r = std::sqrt(delta * delta - t);
    const double w = 1.0 - s * r;
    return -s / (4.0 * r * w * w);
}

double jn_g_ode_residual(double t, double delta, JnBranch branch) {
    if (!(t > 0.0 && t < delta * delta)) throw std::domain_error("jn_g_ode_residual: need 0 < t < delta^2");
    const double g1 = jn_g_prime(t, delta, branch);
    const double g2 = jn_g_second(t, delta, branch);
    return g2 - 2.0 * g1 * g2 - 2.0 * g1 * g1 * g1;
}

Surface Surface::buckley(double delta) { return {Candidate::Buckley, 0.0, delta}; }
Surface Surface::two_weight(double m, double M) { return {Candidate::TwoWeight, 0.0, 0.0, m, M}; }
Surface Surface::jn(double eps, double delta, JnBranch branch) {
    return {branch == JnBranch::Upper ? Candidate::JnUpper : Candidate::JnLower, eps, delta};
}
Surface Surface::maximal(double L) { return {Candidate::Maximal, 0.0, 0.0, 0.0, 0.0, L}; }
Surface Surface::maximal_extended(double L) { return {Candidate::MaximalExtended, 0.0, 0.0, 0.0, 0.0, L}; }

Domain Surface::domain() const {
    switch (kind) {
        case Candidate::Buckley: return BuckleyDomain{delta};
        case Candidate::TwoWeight: return TwoWeightDomain{m, M};
        case Candidate::JnUpper:
        case Candidate::JnLower: return BmoDomain{delta};
        case Candidate::Maximal:
        case Candidate::MaximalExtended: return MaximalDomain{L};
    }
    return BmoDomain{delta};
}

double Surface::value(const Point& x) const {
    switch (kind) {
        case Candidate::Buckley: return buckley_value(x, delta);
        case Candidate::TwoWeight: return two_weight_value(x, m, M);
        case Candidate::JnUpper: return jn_value(x, eps, delta, JnBranch::Upper);
        case Candidate::JnLower: return jn_value(x, eps, delta, JnBranch::Lower);
        case Candidate::Maximal: return maximal_value({x.x1, x.x2, surface_L(*this, x)});
        case Candidate::MaximalExtended: return maximal_value_extended(x, surface_L(*this, x));
    }
    return kNaN;
}

std::string Surface::name() const {
    switch (kind) {
        case Candidate::Buckley: return "buckley";
        case Candidate::TwoWeight: return "two-weight";
        case Candidate::JnUpper: return "jn-upper";
        case Candidate::JnLower: return "jn-lower";
        case Candidate::Maximal: return "maximal";
        case Candidate::MaximalExtended: return "maximal-extended";
    }
    return "unknown";
}

Vec2 gradient(const Surface& s, const Point& x) {
    switch (s.kind) {
        case Candidate::Buckley: return {8.0 / x.x1, -8.0};
        case Candidate::TwoWeight: {
            const double p = x.x1 * x.x2;
            const double dphi = 2.0 * s.M / std::sqrt(p) - 1.0;
            return {dphi * x.x2, dphi * x.x1};
        }
        case Candidate::JnUpper:
        case Candidate::JnLower: {
            const auto branch = s.kind == Candidate::JnUpper ? JnBranch::Upper : JnBranch::Lower;
            const auto p = jn_parts(x, s.delta, branch);
            const double t2 = p.E / (2.0 * p.denom);
            return {2.0 * t2 * (1.0 - p.s * p.R - x.x1), t2};
        }
        case Candidate::Maximal:
        case Candidate::MaximalExtended: return maximal_gradient(x, surface_L(s, x));
    }
    return {kNaN, kNaN};
}

Mat2 hessian(const Surface& s, const Point& x) {
    switch (s.kind) {
        case Candidate::Buckley: return {-8.0 / (x.x1 * x.x1), 0.0, 0.0};
        case Candidate::TwoWeight: {
            const double p = x.x1 * x.x2;
            const double dphi = 2.0 * s.M / std::sqrt(p) - 1.0;
            const double d2phi = -s.M / std::pow(p, 1.5);
            return {d2phi * x.x2 * x.x2, d2phi * p + dphi, d2phi * x.x1 * x.x1};
        }
        case Candidate::JnUpper:
        case Candidate::JnLower: {
            const auto branch = s.kind == Candidate::JnUpper ? JnBranch::Upper : JnBranch::Lower;
            const auto p = jn_parts(x, s.delta, branch);
            if (p.R == 0.0) throw std::domain_error("JN Hessian is singular on the upper boundary");
            const double a = x.x1 + p.s * p.R;
            const double k = -p.s * p.E / (p.R * p.denom);
            return {k * a * a, -0.5 * k * a, 0.25 * k};
        }
        case Candidate::Maximal:
        case Candidate::MaximalExtended: return maximal_hessian(x, surface_L(s, x));
    }
    return {kNaN, kNaN, kNaN};
}

namespace {

// Three-node stencil along one axis: offsets in units of h plus weights for
// the first and second derivative.
struct Stencil {
    std::array<double, 3> offset;
    std::array<double, 3> d1;
    std::array<double, 3> d2;
};

constexpr std::array<Stencil, 3> kStencils{{
    {{-1.0, 0.0, 1.0}, {-0.5, 0.0, 0.5}, {1.0, -2.0, 1.0}},
    {{0.0, 1.0, 2.0}, {-1.5, 2.0, -0.5}, {1.0, -2.0, 1.0}},
    {{-2.0, -1.0, 0.0}, {0.5, -2.0, 1.5}, {1.0, -2.0, 1.0}},
}};

double safe_value(const Surface& s, const Point& x) {
    try {
        return s.value(x);
    } catch (const std::exception&) {
        return kNaN;
    }
}

struct FdResult {
    Vec2 grad;
    Mat2 hess;
};

FdResult finite_differences(const Surface& s, const Point& x, double step_scale) {
    const double h1 = step_scale * (1.0 + std::abs(x.x1));
    const double h2 = step_scale * (1.0 + std::abs(x.x2));
    for (const auto& st1 : kStencils) {
        for (const auto& st2 : kStencils) {
            double f[3][3];
            bool ok = true;
            for (int i = 0; i < 3 && ok; ++i)
                for (int j = 0; j < 3 && ok; ++j) {
                    f[i][j] = safe_value(s, {x.x1 + st1.offset[i] * h1, x.x2 + st2.offset[j] * h2, x.L});
                    ok = std::isfinite(f[i][j]);
                }
            if (!ok) continue;
            // Row/column of the node at offset 0 on each axis.
            const int i0 = static_cast<int>(std::find(st1.offset.begin(), st1.offset.end(), 0.0) - st1.offset.begin());
            const int j0 = static_cast<int>(std::find(st2.offset.begin(), st2.offset.end(), 0.0) - st2.offset.begin());
            FdResult r{};
            for (int k = 0; k < 3; ++k) {
                r.grad[0] += st1.d1[k] * f[k][j0] / h1;
                r.grad[1] += st2.d1[k] * f[i0][k] / h2;
                r.hess.a11 += st1.d2[k] * f[k][j0] / (h1 * h1);
                r.hess.a22 += st2.d2[k] * f[i0][k] / (h2 * h2);
                for (int l = 0; l < 3; ++l) r.hess.a12 += st1.d1[k] * st2.d1[l] * f[k][l] / (h1 * h2);
            }
            return r;
        }
    }
    throw std::domain_error("finite differences: no stencil fits inside the domain");
}

}  // namespace

Vec2 fd_gradient(const Surface& s, const Point& x, double step_scale) {
    return finite_differences(s, x, step_scale).grad;
}

Mat2 fd_hessian(const Surface& s, const Point& x, double step_scale) {
    return finite_differences(s, x, step_scale).hess;
}

Mat2 concavity_matrix(const Surface& s, const Point& x) {
    Mat2 h = hessian(s, x);
    if (s.kind == Candidate::Buckley) h.a11 += 8.0 / (x.x1 * x.x1);
    return h;
}

}  // namespace bellman
