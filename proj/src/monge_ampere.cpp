#include "bellman/monge_ampere.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bellman {

Vec2 kernel_direction(const Surface& s, const Point& x, double rank_tol) {
    const Mat2 h = concavity_matrix(s, x);
    const double n = h.norm();
    if (!std::isfinite(n)) throw std::domain_error("kernel_direction: Hessian is undefined");
    // Relative to the plain Hessian, so cancellation against the cost term counts as zero.
    if (n <= 1e-12 * std::max(1.0, hessian(s, x).norm())) throw std::domain_error("kernel_direction: Hessian vanishes");
    if (std::abs(h.det()) > rank_tol * n * n) throw std::domain_error("kernel_direction: Hessian has rank 2");
    // The null vector is orthogonal to the dominant row.
    Vec2 d = std::hypot(h.a11, h.a12) >= std::hypot(h.a12, h.a22) ? Vec2{-h.a12, h.a11} : Vec2{-h.a22, h.a12};
    const double len = std::hypot(d[0], d[1]);
    d = {d[0] / len, d[1] / len};
    if (d[0] < 0.0 || (d[0] == 0.0 && d[1] < 0.0)) d = {-d[0], -d[1]};
    return d;
}

void Trajectory::write_csv(std::ostream& os) const {
    os << "s,x1,x2,t0,t1,t2\n" << std::setprecision(17);
    for (const auto& p : points)
        os << p.s << ',' << p.x1 << ',' << p.x2 << ',' << p.t0 << ',' << p.t1 << ',' << p.t2 << '\n';
}

namespace {

Domain trace_domain(const Surface& s) { return s.domain(); }

TrajectoryPoint coefficients(const Surface& s, const Point& p) {
    const Vec2 g = gradient(s, p);
    return {0.0, p.x1, p.x2, s.value(p) - p.x1 * g[0] - p.x2 * g[1], g[0], g[1]};
}

constexpr std::size_t kMaxPoints = 1000000;

enum class StepOutcome { Accepted, LeftInterior, FieldFailed };

// One direction of the trace; appends accepted points (excluding x0).
StepOutcome trace_half(const Surface& s, const Domain& dom, const Point& x0, Vec2 heading, double step,
                       double max_len, double margin, std::vector<Point>& out) {
    Point pos = x0;
    double travelled = 0.0, h = step;
    StepOutcome last = StepOutcome::Accepted;
    bool closing = false;
    auto field = [&](const Point& p) {
        Vec2 d = kernel_direction(s, p);
        if (d[0] * heading[0] + d[1] * heading[1] < 0.0) d = {-d[0], -d[1]};
        return d;
    };
    auto rk4 = [&](const Point& p, double dt) {
        const Vec2 k1 = field(p);
        const Vec2 k2 = field({p.x1 + 0.5 * dt * k1[0], p.x2 + 0.5 * dt * k1[1], p.L});
        const Vec2 k3 = field({p.x1 + 0.5 * dt * k2[0], p.x2 + 0.5 * dt * k2[1], p.L});
        const Vec2 k4 = field({p.x1 + dt * k3[0], p.x2 + dt * k3[1], p.L});
        return Point{p.x1 + dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                     p.x2 + dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]), p.L};
    };
    while (travelled < max_len) {
        h = std::min(h, max_len - travelled);
        if (h < 1e-12 * step || out.size() >= kMaxPoints) break;
        StepOutcome outcome;
        Point next;
        try {
            const Point full = rk4(pos, h);
            const Point mid = rk4(pos, 0.5 * h);
            next = rk4(mid, 0.5 * h);
            const double err = std::hypot(next.x1 - full.x1, next.x2 - full.x2);
            if (err > 1e-10 * h + 1e-15 * (1.0 + std::hypot(next.x1, next.x2)))
                outcome = StepOutcome::FieldFailed;
            else
                outcome = classify_boundary(dom, next, margin) == Boundary::Interior ? StepOutcome::Accepted
                                                                                      : StepOutcome::LeftInterior;
        } catch (const std::exception&) {
            outcome = StepOutcome::FieldFailed;
        }
        if (outcome == StepOutcome::Accepted) {
            const Vec2 moved{next.x1 - pos.x1, next.x2 - pos.x2};
            heading = field(next);
            if (heading[0] * moved[0] + heading[1] * moved[1] < 0.0) heading = {-heading[0], -heading[1]};
            pos = next;
            travelled += h;
            out.push_back(pos);
            // Once the boundary band is in reach, only shrink: the remaining
            // distance is resolved bit by bit instead of sliding along the band.
            h = closing ? 0.5 * h : std::min(step, 2.0 * h);
        } else {
            last = outcome;
            closing = closing || outcome == StepOutcome::LeftInterior;
            h *= 0.5;
        }
    }
    return travelled >= max_len ? StepOutcome::Accepted : last;
}

}  // namespace

Trajectory trace_trajectory(const Surface& s, const Point& x0, double step, double max_len, double boundary_margin) {
    if (!(step > 0.0) || !(max_len > 0.0)) throw std::invalid_argument("trace_trajectory: step and length must be positive");
    const Domain dom = trace_domain(s);
    if (classify_boundary(dom, x0, boundary_margin) != Boundary::Interior)
        throw std::invalid_argument("trace_trajectory: start point is not interior");
    const Vec2 theta = kernel_direction(s, x0);

    std::vector<Point> back, fwd;
    const auto back_end = trace_half(s, dom, x0, {-theta[0], -theta[1]}, step, max_len, boundary_margin, back);
    const auto fwd_end = trace_half(s, dom, x0, theta, step, max_len, boundary_margin, fwd);

    Trajectory t;
    t.truncated = back_end == StepOutcome::FieldFailed || fwd_end == StepOutcome::FieldFailed;
    std::vector<Point> pts(back.rbegin(), back.rend());
    pts.push_back(x0);
    pts.insert(pts.end(), fwd.begin(), fwd.end());

    const TrajectoryPoint ref = coefficients(s, x0);
    double arclength = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) arclength += std::hypot(pts[i].x1 - pts[i - 1].x1, pts[i].x2 - pts[i - 1].x2);
        TrajectoryPoint c = coefficients(s, pts[i]);
        c.s = arclength;
        t.drift_t0 = std::max(t.drift_t0, std::abs(c.t0 - ref.t0));
        t.drift_t1 = std::max(t.drift_t1, std::abs(c.t1 - ref.t1));
        t.drift_t2 = std::max(t.drift_t2, std::abs(c.t2 - ref.t2));
        t.points.push_back(c);
    }
    t.length = arclength;

    const Point& p = pts.front();
    const Point& q = pts.back();
    const double cx = q.x1 - p.x1, cy = q.x2 - p.x2, chord = std::hypot(cx, cy);
    for (const auto& r : pts)
        if (chord > 0.0)
            t.straightness = std::max(t.straightness, std::abs(cx * (r.x2 - p.x2) - cy * (r.x1 - p.x1)) / chord);

    const double tag_tol = 2.0 * boundary_margin + 1e-12;
    t.start_boundary = classify_boundary(dom, p, tag_tol);
    t.end_boundary = classify_boundary(dom, q, tag_tol);
    t.lower_to_lower = t.start_boundary == Boundary::LowerParabola && t.end_boundary == Boundary::LowerParabola;
    return t;
}

FoliationLine jn_extremal_line(const Point& x, double delta, JnBranch branch) {
    const double r2 = delta * delta - x.x2 + x.x1 * x.x1;
    if (r2 < -kClosedFormTol * (1.0 + std::abs(x.x2)))
        throw std::domain_error("jn_extremal_line: point lies above x2 = x1^2 + delta^2");
    const double R = std::sqrt(std::max(0.0, r2));
    const bool upper = branch == JnBranch::Upper;
    if (upper && !(delta < 1.0)) throw InfiniteBellman("jn_extremal_line: upper branch needs delta < 1");
    const double a = upper ? x.x1 + R : x.x1 - R;
    const double u = upper ? a - delta : a + delta;
    // Boundary condition B(u, u^2) = e^u fixes the scale of t2.
    const double c = upper ? std::exp(-delta) / (2.0 * (1.0 - delta)) : std::exp(delta) / (2.0 * (1.0 + delta));
    const double t2 = c * std::exp(a);
    const double n = std::hypot(1.0, 2.0 * a);
    return {u, a, {1.0 / n, 2.0 * a / n}, (a * a - 2.0 * a + 2.0 - delta * delta) * t2, -2.0 * (a - 1.0) * t2, t2};
}

FoliationLine maximal_fan_line(const Point& x) {
    if (!x.L) throw std::invalid_argument("maximal_fan_line: point carries no L");
    const double L = *x.L;
    if (!(x.x1 > 0.5 * L) || x.x1 > L * (1.0 + kClosedFormTol))
        throw std::domain_error("maximal_fan_line: needs L/2 < x1 <= L; the left part is foliated by vertical lines");
    if (x.x2 < x.x1 * x.x1 * (1.0 - kClosedFormTol)) throw std::domain_error("maximal_fan_line: x2 below x1^2");
    const double sx = std::sqrt(x.x2);
    const double q = std::sqrt(std::max(0.0, x.x2 - L * (2.0 * x.x1 - L)));
    const double u = sx * L / (sx + q);
    const double d1 = u - 0.5 * L, d2 = u * u, n = std::hypot(d1, d2);
    return {u, 0.5 * L, {d1 / n, d2 / n}, L * L * L / (L - u), -2.0 * L * L / (L - u), L * L / (u * (L - u))};
}

BoundaryReconstruction::BoundaryReconstruction(std::function<double(double)> f, std::function<double(double)> f_prime,
                                               double eps, JnBranch branch, double tol)
    : f_(std::move(f)), f_prime_(std::move(f_prime)), eps_(eps), sign_(branch == JnBranch::Upper ? 1.0 : -1.0),
      tol_(tol) {
    if (!(eps > 0.0)) throw std::invalid_argument("reconstruction: need eps > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("reconstruction: need tol > 0");
}

namespace {

struct Simpson {
    const std::function<double(double)>& g;
    bool exhausted = false;

    double run(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
        const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = g(lm), frm = g(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double diff = left + right - whole;
        if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
        if (depth <= 0) {
            exhausted = true;
            return left + right + diff / 15.0;
        }
        return run(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + run(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }

    double integrate(double a, double b, double tol) {
        const double fa = g(a), fm = g(0.5 * (a + b)), fb = g(b);
        return run(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50);
    }
};

}  // namespace

double BoundaryReconstruction::k(double u) const {
    // k(u) = int_0^inf e^{-r} f'(u + sign eps r) dr, integrated one unit of r at a time.
    const std::function<double(double)> integrand = [&](double r) {
        return std::exp(-r) * f_prime_(u + sign_ * eps_ * r);
    };
    Simpson quad{integrand};
    long double sum = 0.0L;
    constexpr int kMaxChunks = 4000;
    for (int j = 0; j < kMaxChunks; ++j) {
        const double chunk = quad.integrate(j, j + 1.0, 0.5 * tol_ / ((j + 1.0) * (j + 1.0)));
        if (!std::isfinite(chunk)) throw std::runtime_error("reconstruction: integrand is not finite");
        sum += chunk;
        if (std::abs(chunk) <= 1e-16 * std::abs(static_cast<double>(sum)) || (sum == 0.0L && j >= 40)) {
            if (quad.exhausted)
                throw std::runtime_error("reconstruction: quadrature did not reach tolerance " + std::to_string(tol_));
            return static_cast<double>(sum);
        }
    }
    throw std::runtime_error("reconstruction: tail did not decay after r = " + std::to_string(kMaxChunks) +
                             "; last achieved tolerance exceeds " + std::to_string(tol_));
}

double BoundaryReconstruction::lower_point(const Point& x) const {
    const double r2 = eps_ * eps_ - x.x2 + x.x1 * x.x1;
    if (r2 < -kClosedFormTol * (1.0 + std::abs(x.x2)) || x.x2 < x.x1 * x.x1 * (1.0 - kClosedFormTol) - kClosedFormTol)
        throw std::domain_error("reconstruction: point outside the eps-domain");
    const double R = std::sqrt(std::max(0.0, r2));
    const double a = x.x1 + sign_ * R;
    return a - sign_ * eps_;
}

double BoundaryReconstruction::operator()(const Point& x) const {
    const double u = lower_point(x);
    return f_(u) + k(u) * (x.x1 - u);
}

}  // namespace bellman
