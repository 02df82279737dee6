#include "bellman/dyadic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bellman {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-generation averages of a sequence, finest generation last.
std::vector<std::vector<double>> mean_pyramid(std::vector<double> finest, int depth) {
    std::vector<std::vector<double>> levels(depth + 1);
    levels[depth] = std::move(finest);
    for (int k = depth - 1; k >= 0; --k) {
        const auto& child = levels[k + 1];
        auto& cur = levels[k];
        cur.resize(child.size() / 2);
        for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = 0.5 * (child[2 * i] + child[2 * i + 1]);
    }
    return levels;
}

std::vector<double> logs_of(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0.0) throw std::domain_error("negative weight value");
        out[i] = std::log(v[i]);  // log(0) = -inf
    }
    return out;
}

void require_same_shape(const DyadicFunction& u, const DyadicFunction& v) {
    if (u.depth() != v.depth() || u.left() != v.left() || u.right() != v.right())
        throw std::invalid_argument("functions differ in interval or depth");
}

}  // namespace

DyadicFunction::DyadicFunction(double left, double right, int depth, std::vector<double> values)
    : left_(left), right_(right), depth_(depth), values_(std::move(values)) {
    if (!(right > left)) throw std::invalid_argument("DyadicFunction: right must exceed left");
    if (depth < 0 || depth > 40) throw std::invalid_argument("DyadicFunction: depth out of range");
    if (values_.size() != (std::size_t{1} << depth))
        throw std::invalid_argument("DyadicFunction: expected 2^depth values");
    const double h = cell_length(depth);
    prefix_.resize(values_.size() + 1);
    prefix_sq_.resize(values_.size() + 1);
    long double s = 0.0L, s2 = 0.0L;
    prefix_[0] = prefix_sq_[0] = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        s += static_cast<long double>(values_[i]) * h;
        s2 += static_cast<long double>(values_[i]) * values_[i] * h;
        prefix_[i + 1] = static_cast<double>(s);
        prefix_sq_[i + 1] = static_cast<double>(s2);
    }
}

DyadicFunction DyadicFunction::from_antiderivative(double left, double right, int depth,
                                                   const std::function<double(double)>& F) {
    const std::size_t n = std::size_t{1} << depth;
    const double h = (right - left) / static_cast<double>(n);
    std::vector<double> v(n);
    double Fa = F(left);
    for (std::size_t i = 0; i < n; ++i) {
        const double b = i + 1 == n ? right : left + (i + 1) * h;
        const double Fb = F(b);
        v[i] = (Fb - Fa) / h;
        Fa = Fb;
    }
    return {left, right, depth, std::move(v)};
}

DyadicFunction DyadicFunction::from_cell_means(double left, double right, int depth,
                                               const std::function<double(double, double)>& mean) {
    const std::size_t n = std::size_t{1} << depth;
    const double h = (right - left) / static_cast<double>(n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = mean(left + i * h, i + 1 == n ? right : left + (i + 1) * h);
    return {left, right, depth, std::move(v)};
}

DyadicFunction DyadicFunction::from_midpoints(double left, double right, int depth,
                                              const std::function<double(double)>& f) {
    const std::size_t n = std::size_t{1} << depth;
    const double h = (right - left) / static_cast<double>(n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(left + (i + 0.5) * h);
    return {left, right, depth, std::move(v)};
}

DyadicFunction DyadicFunction::constant(double left, double right, int depth, double c) {
    return {left, right, depth, std::vector<double>(std::size_t{1} << depth, c)};
}

double DyadicFunction::cell_length(int level) const { return std::ldexp(length(), -level); }

void DyadicFunction::check_cell(const Cell& c) const {
    if (c.level < 0 || c.level > depth_ || c.index >= (std::size_t{1} << c.level))
        throw std::out_of_range("invalid dyadic cell address");
}

double DyadicFunction::cell_left(const Cell& c) const {
    check_cell(c);
    return left_ + static_cast<double>(c.index) * cell_length(c.level);
}

double DyadicFunction::cell_right(const Cell& c) const {
    check_cell(c);
    return c.index + 1 == (std::size_t{1} << c.level) ? right_
                                                      : left_ + static_cast<double>(c.index + 1) * cell_length(c.level);
}

DyadicFunction DyadicFunction::refine(int extra) const {
    if (extra < 0) throw std::invalid_argument("refine: negative level count");
    const std::size_t k = std::size_t{1} << extra;
    std::vector<double> v;
    v.reserve(values_.size() * k);
    for (double x : values_) v.insert(v.end(), k, x);
    return {left_, right_, depth_ + extra, std::move(v)};
}

DyadicFunction DyadicFunction::coarsen(int levels) const {
    if (levels < 0 || levels > depth_) throw std::invalid_argument("coarsen: level count out of range");
    auto pyr = mean_pyramid(values_, depth_);
    return {left_, right_, depth_ - levels, std::move(pyr[depth_ - levels])};
}

double DyadicFunction::prefix_at(const std::vector<double>& prefix, double t, bool squared) const {
    const double h = cell_length(depth_);
    const double pos = (t - left_) / h;
    if (pos <= 0.0) return 0.0;
    const auto n = values_.size();
    if (pos >= static_cast<double>(n)) return prefix[n];
    const auto i = static_cast<std::size_t>(pos);
    const double frac = (pos - static_cast<double>(i)) * h;
    const double v = squared ? values_[i] * values_[i] : values_[i];
    return prefix[i] + v * frac;
}

double DyadicFunction::mean_on(double a, double b) const {
    if (!(b > a) || a < left_ - 1e-15 * length() || b > right_ + 1e-15 * length())
        throw std::invalid_argument("mean_on: interval outside support or empty");
    return (prefix_at(prefix_, b, false) - prefix_at(prefix_, a, false)) / (b - a);
}

double DyadicFunction::mean_sq_on(double a, double b) const {
    if (!(b > a) || a < left_ - 1e-15 * length() || b > right_ + 1e-15 * length())
        throw std::invalid_argument("mean_sq_on: interval outside support or empty");
    return (prefix_at(prefix_sq_, b, true) - prefix_at(prefix_sq_, a, true)) / (b - a);
}

DyadicFunction DyadicFunction::restrict_to(const Cell& c) const {
    check_cell(c);
    const std::size_t width = std::size_t{1} << (depth_ - c.level);
    std::vector<double> v(values_.begin() + c.index * width, values_.begin() + (c.index + 1) * width);
    return {cell_left(c), cell_right(c), depth_ - c.level, std::move(v)};
}

void DyadicFunction::write_csv(std::ostream& os) const {
    os << "t_left,t_right,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const Cell c{depth_, i};
        os << cell_left(c) << ',' << cell_right(c) << ',' << values_[i] << '\n';
    }
}

DyadicFunction DyadicFunction::read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("t_left,t_right,value", 0) != 0)
        throw std::runtime_error("read_csv: missing header t_left,t_right,value");
    std::vector<double> lefts, rights, vals;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, v;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, v))
            throw std::runtime_error("read_csv: malformed row: " + line);
        lefts.push_back(std::stod(a));
        rights.push_back(std::stod(b));
        vals.push_back(std::stod(v));
    }
    if (vals.empty() || !std::has_single_bit(vals.size()))
        throw std::runtime_error("read_csv: row count must be a power of two");
    const int depth = std::countr_zero(vals.size());
    const double left = lefts.front(), right = rights.back();
    const double h = (right - left) / static_cast<double>(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (std::abs(lefts[i] - (left + i * h)) > 1e-9 * (right - left) ||
            std::abs(rights[i] - lefts[i] - h) > 1e-9 * (right - left))
            throw std::runtime_error("read_csv: cells are not a uniform dyadic grid");
    }
    return {left, right, depth, std::move(vals)};
}

double log_mean(double a, double b) {
    if (!(a >= 0.0 && b > a)) throw std::invalid_argument("log_mean: need 0 <= a < b");
    // (b log b - a log a)/(b - a) - 1 = log b - 1 + log(b/a) a/(b - a)
    if (a == 0.0) return std::log(b) - 1.0;
    const double d = (b - a) / a;
    return std::log(b) - 1.0 + std::log1p(d) / d;
}

IntervalStats averages(const DyadicFunction& f, const Cell& cell) {
    f.cell_left(cell);  // validates the address
    const std::size_t width = std::size_t{1} << (f.depth() - cell.level);
    const std::size_t begin = cell.index * width;
    long double s = 0.0L, s2 = 0.0L, slog = 0.0L, sexp = 0.0L;
    bool positive = true, has_zero = false;
    for (std::size_t i = begin; i < begin + width; ++i) {
        const long double v = f[i];
        s += v;
        s2 += v * v;
        sexp += std::exp(v);
        if (v < 0.0L) positive = false;
        else if (v == 0.0L) has_zero = true;
        else slog += std::log(v);
    }
    const long double n = static_cast<long double>(width);
    IntervalStats st{static_cast<double>(s / n), static_cast<double>(s2 / n), std::nullopt,
                     static_cast<double>(sexp / n)};
    if (positive) st.mean_log = has_zero ? -kInf : static_cast<double>(slog / n);
    return st;
}

double haar_coefficient(const DyadicFunction& f, const Cell& cell) {
    if (cell.level >= f.depth()) throw std::invalid_argument("haar_coefficient: cell has no children");
    const double minus = averages(f, {cell.level + 1, 2 * cell.index}).mean;
    const double plus = averages(f, {cell.level + 1, 2 * cell.index + 1}).mean;
    return std::sqrt(f.cell_length(cell.level)) * (plus - minus) / 2.0;
}

double bmo_norm_sq(const DyadicFunction& f) {
    // Merge (mean, variance) of equal halves: var = (v1 + v2)/2 + ((m1 - m2)/2)^2.
    std::vector<double> mean = f.values();
    std::vector<double> var(mean.size(), 0.0);
    double best = 0.0;
    while (mean.size() > 1) {
        const std::size_t n = mean.size() / 2;
        for (std::size_t i = 0; i < n; ++i) {
            const double m1 = mean[2 * i], m2 = mean[2 * i + 1];
            const double half_gap = 0.5 * (m1 - m2);
            var[i] = 0.5 * (var[2 * i] + var[2 * i + 1]) + half_gap * half_gap;
            mean[i] = 0.5 * (m1 + m2);
            best = std::max(best, var[i]);
        }
        mean.resize(n);
        var.resize(n);
    }
    return best;
}

double ainf_ratio(const DyadicFunction& w) {
    const auto means = mean_pyramid(w.values(), w.depth());
    const auto logs = mean_pyramid(logs_of(w.values()), w.depth());
    double best = 1.0;
    for (int k = 0; k <= w.depth(); ++k) {
        for (std::size_t i = 0; i < means[k].size(); ++i) {
            if (logs[k][i] == -kInf) {
                if (means[k][i] > 0.0) return kInf;
                continue;
            }
            best = std::max(best, means[k][i] * std::exp(-logs[k][i]));
        }
    }
    return best;
}

double buckley_sum(const DyadicFunction& w) {
    const auto means = mean_pyramid(w.values(), w.depth());
    long double total = 0.0L;
    for (int k = 0; k < w.depth(); ++k) {
        const double weight = std::ldexp(1.0, -k);  // |I| / |J|
        for (std::size_t i = 0; i < means[k].size(); ++i) {
            const double r = (means[k + 1][2 * i + 1] - means[k + 1][2 * i]) / means[k][i];
            total += weight * r * r;
        }
    }
    return static_cast<double>(total);
}

double buckley_haar_sum(const DyadicFunction& w) {
    long double total = 0.0L;
    for (int k = 0; k < w.depth(); ++k) {
        for (std::size_t i = 0; i < (std::size_t{1} << k); ++i) {
            const Cell c{k, i};
            const double r = haar_coefficient(w, c) / averages(w, c).mean;
            total += r * r;
        }
    }
    return static_cast<double>(total / w.length());
}

double two_weight_sum(const DyadicFunction& u, const DyadicFunction& v) {
    require_same_shape(u, v);
    const auto mu = mean_pyramid(u.values(), u.depth());
    const auto mv = mean_pyramid(v.values(), v.depth());
    long double total = 0.0L;
    for (int k = 0; k < u.depth(); ++k) {
        const double weight = std::ldexp(1.0, -k);
        for (std::size_t i = 0; i < mu[k].size(); ++i) {
            total += weight * std::abs(mu[k + 1][2 * i + 1] - mu[k + 1][2 * i]) *
                     std::abs(mv[k + 1][2 * i + 1] - mv[k + 1][2 * i]);
        }
    }
    return static_cast<double>(total);
}

DyadicFunction dyadic_maximal(const DyadicFunction& w, double L) {
    const auto means = mean_pyramid(w.values(), w.depth());
    std::vector<double> running{std::max(L, means[0][0])};
    for (int k = 1; k <= w.depth(); ++k) {
        std::vector<double> next(means[k].size());
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::max(running[i / 2], means[k][i]);
        running = std::move(next);
    }
    return {w.left(), w.right(), w.depth(), std::move(running)};
}

DyadicFunction cutoff(const DyadicFunction& f, double c, double d) {
    if (!(c < d)) throw std::invalid_argument("cutoff: requires c < d");
    std::vector<double> v = f.values();
    for (double& x : v) x = std::clamp(x, c, d);
    return {f.left(), f.right(), f.depth(), std::move(v)};
}

double cutoff_identity_residual(const DyadicFunction& f, double d, const Cell& cell) {
    f.cell_left(cell);  // validates the address
    const std::size_t width = std::size_t{1} << (f.depth() - cell.level);
    const std::size_t begin = cell.index * width;
    long double n1 = 0, s1 = 0, n2 = 0, s2 = 0, q2 = 0, s = 0, q = 0, sc = 0, qc = 0;
    for (std::size_t i = begin; i < begin + width; ++i) {
        const long double v = f[i];
        const long double vc = std::min<long double>(v, d);
        s += v;
        q += v * v;
        sc += vc;
        qc += vc * vc;
        if (v < d) {
            n1 += 1;
            s1 += v;
        } else {
            n2 += 1;
            s2 += v;
            q2 += v * v;
        }
    }
    if (n1 == 0 || n2 == 0) return 0.0;
    const long double n = n1 + n2;
    const long double drop = (q / n - (s / n) * (s / n)) - (qc / n - (sc / n) * (sc / n));
    const long double b1 = n1 / n, b2 = n2 / n;
    const long double m1 = s1 / n1, m2 = s2 / n2;
    const long double rhs = b2 * (q2 / n2 - m2 * m2) + b1 * b2 * (m2 - d) * (m2 + d - 2 * m1);
    return static_cast<double>(drop - rhs);
}

}  // namespace bellman
