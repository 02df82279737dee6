#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "bellman/candidates.hpp"
#include "bellman/dyadic.hpp"

namespace cli {

struct RunConfig {
    std::string command;
    std::string check;  // verify: main | induction | trajectory | cutoff; simulate: problem
    std::string problem = "jn";
    std::string branch = "upper";
    double eps = 0.5;
    std::optional<double> delta;
    double m = 1.0, M = 2.0;
    std::optional<double> L;
    double v = 2.0;
    double x1 = 0.0, x2 = 0.0;
    double h = 0.01;
    int depth = 12;
    int n = 20;
    std::size_t samples = 100000;
    std::optional<std::uint64_t> seed;
    double max_radius = 0.0;
    int splits = 8;
    int radii = 8;
    double tol = 1e-8;
    int max_iter = 20000;
    double fill_tol = 1e-3;
    int max_depth = 20;
    double step = 1e-2;
    std::string weight = "pow:-0.5";
    std::string weight2 = "pow:0.5";
    std::string csv;
    std::size_t max_report = 100;
    unsigned threads = 0;
};

nlohmann::json to_json(const RunConfig& c);

/// `const:c | pow:a | log | file:path` sampled by exact cell averages on [0, 1].
bellman::DyadicFunction make_function(const std::string& spec, int depth);

bellman::Surface make_surface(const RunConfig& c);

// Each command prints one JSON record and returns the process exit code:
// 0 pass, 1 inequality violation, 2 numerical failure.
int cmd_eval(const RunConfig& c, std::ostream& out);
int cmd_verify(const RunConfig& c, std::ostream& out);
int cmd_solve(const RunConfig& c, std::ostream& out);
int cmd_optimize(const RunConfig& c, std::ostream& out);
int cmd_simulate(const RunConfig& c, std::ostream& out);

/// Envelope shared by every record: command, config, version.
nlohmann::json record(const RunConfig& c);

}  // namespace cli
