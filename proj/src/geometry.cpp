#include "bellman/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bellman {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

// A constraint value g(x) <= 0 together with the boundary it defines.
struct Defect {
    double value;
    Boundary tag;
};

double maximal_L(const MaximalDomain& d, const Point& x) { return x.L.value_or(d.L); }

// Constraint values in the order used to break ties at corners.
std::array<Defect, 2> defects(const Domain& dom, const Point& x, double L_override = -1.0) {
    return std::visit(
        Overloaded{
            [&](const BuckleyDomain& d) -> std::array<Defect, 2> {
                if (!(x.x1 > 0.0)) return {{{kInf, Boundary::JensenEdge}, {kInf, Boundary::AinfEdge}}};
                return {{{x.x2 - std::log(x.x1), Boundary::JensenEdge},
                         {std::log(x.x1 / d.delta) - x.x2, Boundary::AinfEdge}}};
            },
            [&](const BmoDomain& d) -> std::array<Defect, 2> {
                return {{{x.x1 * x.x1 - x.x2, Boundary::LowerParabola},
                         {x.x2 - x.x1 * x.x1 - d.eps * d.eps, Boundary::UpperParabola}}};
            },
            [&](const TwoWeightDomain& d) -> std::array<Defect, 2> {
                if (x.x1 < 0.0 || x.x2 < 0.0)
                    return {{{kInf, Boundary::LowerHyperbola}, {kInf, Boundary::UpperHyperbola}}};
                const double p = x.x1 * x.x2;
                return {{{d.m * d.m - p, Boundary::LowerHyperbola}, {p - d.M * d.M, Boundary::UpperHyperbola}}};
            },
            [&](const MaximalDomain& d) -> std::array<Defect, 2> {
                const double L = L_override > 0.0 ? L_override : maximal_L(d, x);
                if (!(x.x1 > 0.0)) return {{{kInf, Boundary::LowerParabola}, {kInf, Boundary::RightEdge}}};
                return {{{x.x1 * x.x1 - x.x2, Boundary::LowerParabola}, {x.x1 - L, Boundary::RightEdge}}};
            },
        },
        dom);
}

double worst(const std::array<Defect, 2>& ds) { return std::max(ds[0].value, ds[1].value); }

// max of c0 + c1 t + c2 t^2 over t in [0, 1]
double max_quadratic(double c0, double c1, double c2) {
    double best = std::max(c0, c0 + c1 + c2);
    if (c2 < 0.0) {
        const double t = -c1 / (2.0 * c2);
        if (t > 0.0 && t < 1.0) best = std::max(best, c0 + c1 * t + c2 * t * t);
    }
    return best;
}

// Exact chord maximum for the constraints that are quadratic in the chord
// parameter; -inf when the domain has none.
double analytic_chord_excess(const Domain& dom, const Point& a, const Point& b) {
    const double d1 = b.x1 - a.x1;
    const double d2 = b.x2 - a.x2;
    return std::visit(
        Overloaded{
            [](const BuckleyDomain&) { return -kInf; },
            [&](const BmoDomain& d) {
                const double upper = max_quadratic(a.x2 - a.x1 * a.x1 - d.eps * d.eps, d2 - 2.0 * a.x1 * d1, -d1 * d1);
                const double lower = max_quadratic(a.x1 * a.x1 - a.x2, 2.0 * a.x1 * d1 - d2, d1 * d1);
                return std::max(upper, lower);
            },
            [&](const TwoWeightDomain& d) {
                const double c0 = a.x1 * a.x2;
                const double c1 = a.x1 * d2 + a.x2 * d1;
                const double c2 = d1 * d2;
                const double upper = max_quadratic(c0 - d.M * d.M, c1, c2);
                const double lower = max_quadratic(d.m * d.m - c0, -c1, -c2);
                return std::max(upper, lower);
            },
            [&](const MaximalDomain& d) {
                const double L = maximal_L(d, a);
                const double parabola = max_quadratic(a.x1 * a.x1 - a.x2, 2.0 * a.x1 * d1 - d2, d1 * d1);
                const double edge = std::max(a.x1, b.x1) - L;
                return std::max(parabola, edge);
            },
        },
        dom);
}

}  // namespace

std::string to_string(Boundary b) {
    switch (b) {
        case Boundary::LowerParabola: return "LowerParabola";
        case Boundary::UpperParabola: return "UpperParabola";
        case Boundary::RightEdge: return "RightEdge";
        case Boundary::LowerHyperbola: return "LowerHyperbola";
        case Boundary::UpperHyperbola: return "UpperHyperbola";
        case Boundary::JensenEdge: return "JensenEdge";
        case Boundary::AinfEdge: return "AinfEdge";
        case Boundary::Interior: return "Interior";
        case Boundary::Outside: return "Outside";
    }
    return "Unknown";
}

std::string describe(const Domain& d) {
    return std::visit(Overloaded{
                          [](const BuckleyDomain& b) { return "Buckley(delta=" + std::to_string(b.delta) + ")"; },
                          [](const BmoDomain& b) { return "BMO(eps=" + std::to_string(b.eps) + ")"; },
                          [](const TwoWeightDomain& b) {
                              return "TwoWeight(m=" + std::to_string(b.m) + ", M=" + std::to_string(b.M) + ")";
                          },
                          [](const MaximalDomain& b) { return "Maximal(L=" + std::to_string(b.L) + ")"; },
                      },
                      d);
}

bool contains(const Domain& d, const Point& x, double tol) {
    if (tol < 0.0) throw std::invalid_argument("contains: negative tolerance");
    if (std::holds_alternative<MaximalDomain>(d) && !x.L)
        throw std::invalid_argument("contains: maximal-domain point is missing the L parameter");
    return worst(defects(d, x)) <= tol;
}

Boundary classify_boundary(const Domain& d, const Point& x, double tol) {
    const auto ds = defects(d, x);
    if (!(worst(ds) <= tol)) return Boundary::Outside;
    const Defect* hit = nullptr;
    for (const auto& g : ds) {
        if (std::abs(g.value) <= tol && (!hit || std::abs(g.value) < std::abs(hit->value))) hit = &g;
    }
    return hit ? hit->tag : Boundary::Interior;
}

SegmentCheck segment_in_domain(const Domain& d, const Point& a, const Point& b, int samples, double tol) {
    samples = std::max(samples, 2);
    double excess = analytic_chord_excess(d, a, b);
    const double L = std::holds_alternative<MaximalDomain>(d) ? maximal_L(std::get<MaximalDomain>(d), a) : -1.0;
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        const Point p{a.x1 + t * (b.x1 - a.x1), a.x2 + t * (b.x2 - a.x2), a.L};
        excess = std::max(excess, worst(defects(d, p, L)));
    }
    return {excess <= tol, excess};
}

}  // namespace bellman
