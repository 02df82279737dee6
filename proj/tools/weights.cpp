#include <cmath>
#include <fstream>
#include <stdexcept>

#include "cli.hpp"

namespace cli {

using bellman::DyadicFunction;

DyadicFunction make_function(const std::string& spec, int depth) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto number = [&] {
        std::size_t used = 0;
        const double x = std::stod(arg, &used);
        if (used != arg.size()) throw std::invalid_argument("bad number in function spec '" + spec + "'");
        return x;
    };

    if (kind == "const") return DyadicFunction::constant(0.0, 1.0, depth, number());
    if (kind == "log" && arg.empty()) return DyadicFunction::from_cell_means(0.0, 1.0, depth, bellman::log_mean);
    if (kind == "pow") {
        const double p = number();
        if (!(p > -1.0)) throw std::invalid_argument("pow exponent must exceed -1 for integrability");
        if (p == 0.0) return DyadicFunction::constant(0.0, 1.0, depth, 1.0);
        return DyadicFunction::from_antiderivative(0.0, 1.0, depth,
                                                   [p](double t) { return std::pow(t, p + 1.0) / (p + 1.0); });
    }
    if (kind == "file") {
        std::ifstream in(arg);
        if (!in) throw std::invalid_argument("cannot open function file '" + arg + "'");
        return DyadicFunction::read_csv(in);
    }
    throw std::invalid_argument("unknown function spec '" + spec + "'; expected const:c, pow:a, log or file:path");
}

}  // namespace cli
