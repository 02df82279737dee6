#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "bellman/monge_ampere.hpp"
#include "bellman/optimizers.hpp"
#include "bellman/parallel.hpp"
#include "bellman/verifier.hpp"
#include "cli.hpp"

#ifndef BELLMAN_VERSION
#define BELLMAN_VERSION "unknown"
#endif

namespace cli {

using namespace bellman;
using nlohmann::json;

namespace {

json point_json(const Point& p) {
    json j = json::array({p.x1, p.x2});
    if (p.L) j.push_back(*p.L);
    return j;
}

bool maximal_problem(const std::string& p) { return p == "maximal" || p == "maximal-extended"; }

Point config_point(const RunConfig& c, const Surface& s) {
    Point x{c.x1, c.x2};
    if (maximal_problem(c.problem)) x.L = c.L.value_or(s.L);
    return x;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write '" + path + "'");
    return os;
}

json surface_params(const Surface& s) {
    switch (s.kind) {
        case Candidate::Buckley: return {{"delta", s.delta}};
        case Candidate::TwoWeight: return {{"m", s.m}, {"M", s.M}};
        case Candidate::JnUpper:
        case Candidate::JnLower: return {{"eps", s.eps}, {"delta", s.delta}};
        default: return {{"L", s.L}};
    }
}

std::uint64_t required_seed(const RunConfig& c) {
    if (!c.seed) throw std::invalid_argument("--seed is required for randomized checks");
    return *c.seed;
}

int verify_main(const RunConfig& c, json& r) {
    Surface s = make_surface(c);
    // The JN scan defaults to a radius above the critical 3 eps / (2 sqrt 2).
    if ((s.kind == Candidate::JnUpper || s.kind == Candidate::JnLower) && !c.delta) s.delta = 1.1 * c.eps;
    Sampler sampler{c.samples, required_seed(c), c.max_radius, c.threads};
    const auto found = main_inequality_scan(s, default_cost(s), sampler);
    json list = json::array();
    double worst = 0.0;
    for (const auto& v : found) {
        worst = std::max(worst, v.defect);
        if (list.size() < c.max_report)
            list.push_back({{"x", point_json(v.x)},
                            {"x_plus", point_json(v.x_plus)},
                            {"x_minus", point_json(v.x_minus)},
                            {"lhs", v.lhs},
                            {"rhs", v.rhs},
                            {"defect", v.defect}});
    }
    r["candidate"] = s.name();
    r["params"] = surface_params(s);
    r["violation_count"] = found.size();
    r["max_defect"] = worst;
    r["violations"] = list;
    return found.empty() ? 0 : 1;
}

int verify_induction(const RunConfig& c, json& r) {
    const Surface s = make_surface(c);
    const auto f = make_function(c.weight, c.depth);
    std::optional<DyadicFunction> second;
    if (s.kind == Candidate::TwoWeight) second = make_function(c.weight2, c.depth);
    const auto rep = bellman_induction(s, default_cost(s), f, second ? &*second : nullptr, c.L);
    r["candidate"] = s.name();
    r["params"] = surface_params(s);
    r["totals"] = rep.totals;
    r["monotone"] = rep.monotone;
    r["max_increase"] = rep.max_increase;
    r["top"] = rep.top;
    r["objective"] = rep.objective;
    r["bound_holds"] = rep.bound_holds;
    return rep.monotone && rep.bound_holds ? 0 : 1;
}

int verify_trajectory(const RunConfig& c, json& r) {
    const Surface s = make_surface(c);
    const Point x0 = config_point(c, s);
    const auto t = trace_trajectory(s, x0, c.step);
    if (!c.csv.empty()) {
        auto os = open_output(c.csv);
        t.write_csv(os);
    }
    double scale0 = 0.0, scale1 = 0.0, scale2 = 0.0;
    for (const auto& p : t.points) {
        scale0 = std::max(scale0, std::abs(p.t0));
        scale1 = std::max(scale1, std::abs(p.t1));
        scale2 = std::max(scale2, std::abs(p.t2));
    }
    const auto& a = t.points.front();
    const auto& b = t.points.back();
    const double chord = std::hypot(b.x1 - a.x1, b.x2 - a.x2);
    const bool drift_ok = t.drift_t0 <= 1e-5 * (1 + scale0) && t.drift_t1 <= 1e-5 * (1 + scale1) &&
                          t.drift_t2 <= 1e-5 * (1 + scale2);
    const bool straight = t.straightness <= 1e-6 * chord;
    r["candidate"] = s.name();
    r["points"] = t.points.size();
    r["start"] = {a.x1, a.x2};
    r["end"] = {b.x1, b.x2};
    r["start_boundary"] = to_string(t.start_boundary);
    r["end_boundary"] = to_string(t.end_boundary);
    r["drift"] = {t.drift_t0, t.drift_t1, t.drift_t2};
    r["straightness"] = t.straightness;
    r["length"] = t.length;
    r["truncated"] = t.truncated;
    r["lower_to_lower"] = t.lower_to_lower;
    return drift_ok && straight && !t.truncated && !t.lower_to_lower ? 0 : 1;
}

int verify_cutoff(const RunConfig& c, json& r) {
    const std::uint64_t seed = required_seed(c);
    double worst = 0.0;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < c.samples; ++i) {
        auto rng = stream_rng(seed, i);
        const int depth = std::uniform_int_distribution<int>(1, 8)(rng);
        std::normal_distribution<double> value(0.0, 1.0);
        std::vector<double> vals(std::size_t{1} << depth);
        for (auto& x : vals) x = value(rng);
        const DyadicFunction f(0.0, 1.0, depth, vals);
        const int level = std::uniform_int_distribution<int>(0, depth)(rng);
        const auto index = std::uniform_int_distribution<std::size_t>(0, (std::size_t{1} << level) - 1)(rng);
        const double d = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
        const double res = std::abs(cutoff_identity_residual(f, d, {level, index}));
        worst = std::max(worst, res);
        if (res >= 1e-10) ++failures;
    }
    r["cases"] = c.samples;
    r["max_residual"] = worst;
    r["failures"] = failures;
    return failures == 0 ? 0 : 1;
}

}  // namespace

json to_json(const RunConfig& c) {
    json j{{"command", c.command},
           {"problem", c.problem},
           {"branch", c.branch},
           {"eps", c.eps},
           {"m", c.m},
           {"M", c.M},
           {"v", c.v},
           {"x1", c.x1},
           {"x2", c.x2},
           {"h", c.h},
           {"depth", c.depth},
           {"n", c.n},
           {"samples", c.samples},
           {"max_radius", c.max_radius},
           {"splits", c.splits},
           {"radii", c.radii},
           {"tol", c.tol},
           {"max_iter", c.max_iter},
           {"fill_tol", c.fill_tol},
           {"max_depth", c.max_depth},
           {"step", c.step},
           {"weight", c.weight},
           {"weight2", c.weight2},
           {"csv", c.csv},
           {"max_report", c.max_report},
           {"threads", c.threads ? c.threads : default_threads()}};
    if (!c.check.empty()) j["check"] = c.check;
    j["delta"] = c.delta ? json(*c.delta) : json(nullptr);
    j["L"] = c.L ? json(*c.L) : json(nullptr);
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    return j;
}

json record(const RunConfig& c) { return {{"command", c.command}, {"version", BELLMAN_VERSION}, {"config", to_json(c)}}; }

Surface make_surface(const RunConfig& c) {
    const std::string& p = c.problem;
    if (p == "buckley") return Surface::buckley(c.delta.value_or(2.0));
    if (p == "two-weight") return Surface::two_weight(c.m, c.M);
    if (p == "jn" || p == "jn-upper" || p == "jn-lower") {
        JnBranch b = c.branch == "lower" ? JnBranch::Lower : JnBranch::Upper;
        if (c.branch != "upper" && c.branch != "lower") throw std::invalid_argument("--branch must be upper or lower");
        if (p == "jn-upper") b = JnBranch::Upper;
        if (p == "jn-lower") b = JnBranch::Lower;
        return Surface::jn(c.eps, c.delta.value_or(c.eps), b);
    }
    if (p == "maximal") return Surface::maximal(c.L.value_or(1.0));
    if (p == "maximal-extended") return Surface::maximal_extended(c.L.value_or(1.0));
    throw std::invalid_argument("unknown problem '" + p + "'");
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
    json r = record(c);
    const Surface s = make_surface(c);
    const Point x = config_point(c, s);
    r["problem"] = s.name();
    r["x"] = point_json(x);
    r["params"] = surface_params(s);
    r["value"] = s.value(x);
    // Derivatives may be undefined on parts of the boundary; the value still is.
    try {
        const Vec2 g = gradient(s, x);
        r["gradient"] = {g[0], g[1]};
    } catch (const std::exception&) {
        r["gradient"] = nullptr;
    }
    try {
        const Mat2 h = hessian(s, x);
        r["hessian"] = {h.a11, h.a12, h.a22};
        r["hessian_det"] = h.det();
    } catch (const std::exception&) {
        r["hessian"] = nullptr;
        r["hessian_det"] = nullptr;
    }
    out << r.dump(2) << '\n';
    return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    json r = record(c);
    int code;
    if (c.check == "main")
        code = verify_main(c, r);
    else if (c.check == "induction")
        code = verify_induction(c, r);
    else if (c.check == "trajectory")
        code = verify_trajectory(c, r);
    else if (c.check == "cutoff")
        code = verify_cutoff(c, r);
    else
        throw std::invalid_argument("unknown check '" + c.check + "'");
    r["passed"] = code == 0;
    out << r.dump(2) << '\n';
    return code;
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
    json r = record(c);
    DpConfig cfg;
    Surface s = make_surface(c);
    if (c.problem == "buckley") {
        cfg.problem = DpProblem::Buckley;
        cfg.delta = s.delta;
    } else if (c.problem == "jn" || c.problem == "jn-upper") {
        cfg.problem = DpProblem::Bmo;
        cfg.eps = c.eps;
        s = Surface::jn(c.eps, c.eps, JnBranch::Upper);
    } else {
        throw std::invalid_argument("solve supports the buckley and jn problems");
    }
    cfg.h = c.h;
    cfg.directions = c.splits;
    cfg.radii = c.radii;
    cfg.zero_split_only = c.splits == 0;
    cfg.tol = c.tol;
    cfg.max_iter = c.max_iter;
    cfg.threads = c.threads;
    const auto g = dp_solve(cfg);
    if (!c.csv.empty()) {
        auto os = open_output(c.csv);
        g.write_csv(os);
    }
    const auto gap = compare_to_candidate(g, s);
    r["candidate"] = s.name();
    r["nodes"] = g.values.size();
    r["iterations"] = g.iterations;
    r["final_update"] = g.final_update;
    r["converged"] = g.converged;
    r["max_gap_to_candidate"] = gap.max_relative_gap;
    r["max_excess_over_candidate"] = gap.max_excess;
    r["max_value"] = gap.max_value;
    out << r.dump(2) << '\n';
    return g.converged ? 0 : 2;
}

int cmd_optimize(const RunConfig& c, std::ostream& out) {
    json r = record(c);
    if (c.problem == "jn" || c.problem == "jn-upper" || c.problem == "jn-lower") {
        const Surface s = make_surface(c);
        const Point x{c.x1, c.x2};
        const bool upper = s.kind == Candidate::JnUpper;
        const auto f = upper ? jn_optimizer(x, c.eps, c.depth) : jn_lower_optimizer(x, c.eps, c.depth);
        if (!c.csv.empty()) {
            auto os = open_output(c.csv);
            f.write_csv(os);
        }
        const auto st = averages(f, {0, 0});
        const double target = jn_value(x, c.eps, c.eps, upper ? JnBranch::Upper : JnBranch::Lower);
        r["bellman_point"] = {st.mean, st.mean_sq};
        r["objective"] = st.mean_exp;
        r["target"] = target;
        r["error"] = st.mean_exp - target;
        r["bmo_norm_sq"] = bmo_norm_sq(f);
    } else if (c.problem == "maximal") {
        const double L = c.L.value_or(1.0);
        const auto o = maximal_optimizer(L, c.v, c.n, c.fill_tol, c.max_depth);
        const auto roots = maximal_alpha_roots(L, c.v, c.n);
        if (!c.csv.empty()) {
            auto os = open_output(c.csv);
            o.w.write_csv(os);
        }
        const double target = std::pow(std::sqrt(c.v) + std::sqrt(c.v - L * L), 2);
        r["alpha"] = o.alpha_n;
        r["alpha_plus_root"] = roots.plus;
        r["beta"] = o.beta_n;
        r["depth"] = o.depth;
        r["unfilled_measure"] = o.unfilled_measure;
        r["bellman_point"] = {o.mean, o.mean_sq, L};
        r["objective"] = o.objective;
        r["objective_sampled"] = o.objective_sampled;
        r["target"] = target;
        r["error"] = o.objective - target;
    } else {
        throw std::invalid_argument("optimize supports the jn and maximal problems");
    }
    out << r.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
    json r = record(c);
    const auto w = make_function(c.weight, c.depth);
    const auto st = averages(w, {0, 0});
    bool holds = true;
    if (c.problem == "buckley") {
        const double ratio = ainf_ratio(w);
        const double sum = buckley_sum(w);
        const double bound = 8.0 * std::log(ratio);
        holds = sum <= bound + 1e-9;
        r["ainf_ratio"] = ratio;
        r["buckley_sum"] = sum;
        r["buckley_haar_sum"] = buckley_haar_sum(w);
        r["bound"] = bound;
    } else if (c.problem == "jn") {
        r["bellman_point"] = {st.mean, st.mean_sq};
        r["bmo_norm_sq"] = bmo_norm_sq(w);
        r["mean_exp"] = st.mean_exp;
    } else if (c.problem == "maximal") {
        const double L = c.L.value_or(st.mean);
        const auto Mw = dyadic_maximal(w, L);
        const double energy = averages(Mw, {0, 0}).mean_sq;
        const double bound = maximal_value({st.mean, st.mean_sq, std::max(L, st.mean)});
        holds = energy <= bound * (1 + 1e-12) + 1e-12;
        r["bellman_point"] = {st.mean, st.mean_sq, L};
        r["maximal_energy"] = energy;
        r["bound"] = bound;
        r["l2_ratio"] = energy / st.mean_sq;
    } else if (c.problem == "two-weight") {
        const auto v = make_function(c.weight2, c.depth);
        double lo = INFINITY, hi = 0.0;
        for (int k = 0; k <= c.depth; ++k)
            for (std::size_t i = 0; i < (std::size_t{1} << k); ++i) {
                const double p = averages(w, {k, i}).mean * averages(v, {k, i}).mean;
                lo = std::min(lo, p);
                hi = std::max(hi, p);
            }
        const double m = std::sqrt(lo), M = std::sqrt(hi);
        const double sum = two_weight_sum(w, v);
        const double bound = two_weight_value({st.mean, averages(v, {0, 0}).mean}, m, M);
        holds = sum / 4.0 <= bound + 1e-9 * (1 + std::abs(bound));
        r["m"] = m;
        r["M"] = M;
        r["two_weight_sum"] = sum;
        r["bound"] = 4.0 * bound;
    } else {
        throw std::invalid_argument("simulate supports buckley, jn, maximal and two-weight");
    }
    r["holds"] = holds;
    out << r.dump(2) << '\n';
    return holds ? 0 : 1;
}

}  // namespace cli
