#include <doctest.h>
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
    int code;
    nlohmann::json out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(BELLMAN_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string text;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) text.append(buf.data(), n);
    const int status = pclose(pipe);
    Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, nullptr};
    r.out = nlohmann::json::parse(text, nullptr, false);
    return r;
}

}  // namespace

TEST_CASE("eval prints the value with the run record") {
    const auto r = run("eval --problem jn-upper --eps 0.5 --x1 0 --x2 0.25");
    CHECK(r.code == 0);
    CHECK(r.out["value"].get<double>() == doctest::Approx(std::exp(-0.5) / 0.5).epsilon(1e-15));
    CHECK(r.out["command"] == "eval");
    CHECK(r.out.contains("version"));
    CHECK(r.out["config"]["eps"] == 0.5);
    CHECK(r.out["hessian"].is_null());

    const auto m = run("eval --problem maximal --L 1 --x1 1 --x2 2");
    CHECK(m.code == 0);
    CHECK(m.out["value"].get<double>() == doctest::Approx(3 + 2 * std::sqrt(2.0)));

    const auto b = run("eval --problem buckley --delta 2 --x1 1 --x2 0");
    CHECK(b.out["value"].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("numerical failures exit with code 2") {
    const auto r = run("eval --problem jn --eps 0.5 --x1 0 --x2 1");
    CHECK(r.code == 2);
    CHECK(r.out["error"].is_string());
    CHECK(run("simulate buckley --weight nope").code == 2);
    CHECK(run("verify cutoff --samples 10").code == 2);
    CHECK(run("eval --problem jn-upper --eps 1 --delta 1 --x1 0 --x2 0").code == 2);
}

TEST_CASE("verify main separates the two radii") {
    const auto bad = run("verify main --problem jn --eps 0.5 --delta 0.5 --samples 20000 --seed 1 --max-report 3");
    CHECK(bad.code == 1);
    CHECK(bad.out["passed"] == false);
    CHECK(bad.out["violation_count"].get<int>() >= 1);
    CHECK(bad.out["violations"].size() <= 3);

    const auto good = run("verify main --problem jn --eps 0.5 --delta 0.55 --samples 20000 --seed 1");
    CHECK(good.code == 0);
    CHECK(good.out["violation_count"] == 0);
}

TEST_CASE("verify checks") {
    const auto t = run("verify trajectory --problem jn --eps 0.5 --x1 0 --x2 0.125");
    CHECK(t.code == 0);
    CHECK(t.out["start_boundary"] == "LowerParabola");
    CHECK(t.out["end_boundary"] == "UpperParabola");

    const auto m = run("verify trajectory --problem maximal --L 1 --x1 0.8 --x2 1.2");
    CHECK(m.code == 0);
    CHECK(m.out["end_boundary"] == "RightEdge");

    const auto c = run("verify cutoff --seed 5 --samples 200");
    CHECK(c.code == 0);
    CHECK(c.out["max_residual"].get<double>() < 1e-10);

    const auto i = run("verify induction --problem buckley --weight pow:-0.5 --depth 10");
    CHECK(i.code == 0);
    CHECK(i.out["monotone"] == true);
    CHECK(i.out["totals"].size() == 11);
}

TEST_CASE("optimize builds the extremals") {
    const auto j = run("optimize --problem jn --eps 0.5 --x1 0 --x2 0.25 --depth 20");
    CHECK(j.code == 0);
    CHECK(std::abs(j.out["objective"].get<double>() - std::exp(-0.5) / 0.5) <= 1e-3);

    const auto m = run("optimize --problem maximal --L 1 --v 2 --n 20");
    CHECK(m.code == 0);
    CHECK(std::abs(m.out["objective"].get<double>() - (3 + 2 * std::sqrt(2.0))) <= 1e-3);
    CHECK(m.out["alpha"].get<double>() == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-5));

    const auto path = std::filesystem::temp_directory_path() / "bellman_cli_phi.csv";
    CHECK(run("optimize --problem jn --eps 0.5 --x1 0 --x2 0.25 --depth 6 --csv " + path.string()).code == 0);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t_left,t_right,value");
    std::filesystem::remove(path);
}

TEST_CASE("solve and simulate") {
    const auto z = run("solve --problem jn --eps 0.5 --h 0.05 --splits 0");
    CHECK(z.code == 0);
    CHECK(z.out["iterations"] == 0);

    const auto b = run("solve --problem buckley --delta 2 --h 0.05");
    CHECK(b.code == 0);
    CHECK(b.out["max_value"].get<double>() <= 8 * std::log(2.0));

    const auto s = run("simulate buckley --weight pow:-0.5 --depth 12");
    CHECK(s.code == 0);
    CHECK(s.out["holds"] == true);
    CHECK(s.out["buckley_haar_sum"].get<double>() ==
          doctest::Approx(s.out["buckley_sum"].get<double>() / 4).epsilon(1e-12));
    CHECK(run("simulate two-weight --weight pow:-0.5 --weight2 pow:0.5 --depth 10").code == 0);
    CHECK(run("simulate maximal --weight pow:-0.5 --depth 10").code == 0);
}
