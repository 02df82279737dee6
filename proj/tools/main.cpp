#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

void add_params(CLI::App* app, cli::RunConfig& c) {
    app->set_help_flag("--help", "Print this help message and exit");  // frees -h for the grid step
    app->add_option("--problem", c.problem,
                    "buckley | two-weight | jn | jn-upper | jn-lower | maximal | maximal-extended");
    app->add_option("--branch", c.branch, "JN branch: upper | lower");
    app->add_option("--eps", c.eps, "BMO norm bound");
    app->add_option("--delta", c.delta, "Buckley constant or JN evaluation radius (defaults to eps)");
    app->add_option("--m", c.m);
    app->add_option("--M", c.M);
    app->add_option("--L", c.L, "maximal-operator parameter");
    app->add_option("--v", c.v, "maximal optimizer second moment");
    app->add_option("--x1", c.x1);
    app->add_option("--x2", c.x2);
    app->add_option("--h", c.h, "grid step");
    app->add_option("--depth", c.depth, "dyadic depth");
    app->add_option("--n", c.n, "maximal optimizer index");
    app->add_option("--samples", c.samples);
    app->add_option("--seed", c.seed);
    app->add_option("--max-radius", c.max_radius, "scan split radius (0: per-problem default)");
    app->add_option("--splits", c.splits, "DP split directions (0: no splits)");
    app->add_option("--radii", c.radii, "DP split radii");
    app->add_option("--tol", c.tol, "DP convergence tolerance");
    app->add_option("--max-iter", c.max_iter);
    app->add_option("--fill-tol", c.fill_tol);
    app->add_option("--max-depth", c.max_depth);
    app->add_option("--step", c.step, "trajectory step");
    app->add_option("--weight", c.weight, "const:c | pow:a | log | file:path");
    app->add_option("--weight2", c.weight2, "second weight of the two-weight problem");
    app->add_option("--csv", c.csv, "bulk output file");
    app->add_option("--max-report", c.max_report, "violations listed in the JSON");
    app->add_option("--threads", c.threads, "worker threads (default: BELLMAN_THREADS or hardware)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bellman-function toolkit"};
    app.require_subcommand(1);
    cli::RunConfig c;

    auto* eval = app.add_subcommand("eval", "evaluate a candidate at a point");
    auto* verify = app.add_subcommand("verify", "run a check suite");
    verify->add_option("check", c.check, "main | induction | trajectory | cutoff")->required();
    auto* solve = app.add_subcommand("solve", "value-iteration DP oracle");
    auto* optimize = app.add_subcommand("optimize", "build an extremal test function");
    auto* simulate = app.add_subcommand("simulate", "evaluate functionals of a test function");
    simulate->add_option("family", c.problem, "buckley | jn | maximal | two-weight")->required();
    for (auto* sub : {eval, verify, solve, optimize, simulate}) add_params(sub, c);

    CLI11_PARSE(app, argc, argv);

    using Command = int (*)(const cli::RunConfig&, std::ostream&);
    const std::pair<CLI::App*, Command> commands[] = {{eval, cli::cmd_eval},
                                                      {verify, cli::cmd_verify},
                                                      {solve, cli::cmd_solve},
                                                      {optimize, cli::cmd_optimize},
                                                      {simulate, cli::cmd_simulate}};
    for (const auto& [sub, run] : commands) {
        if (!sub->parsed()) continue;
        c.command = sub->get_name();
        try {
            return run(c, std::cout);
        } catch (const std::exception& e) {
            auto r = cli::record(c);
            r["error"] = e.what();
            std::cout << r.dump(2) << '\n';
            return 2;
        }
    }
    return 2;
}
