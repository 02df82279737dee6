#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace bellman {

/// Address of a dyadic subinterval: cell `index` of generation `level`.
struct Cell {
    int level = 0;
    std::size_t index = 0;
};

struct IntervalStats {
    double mean;
    double mean_sq;
    std::optional<double> mean_log;  // only for positive-valued functions; -inf if a value is zero
    double mean_exp;
};

/// Step function on [left, right] that is constant on the 2^depth cells of
/// the finest generation.
class DyadicFunction {
public:
    DyadicFunction(double left, double right, int depth, std::vector<double> values);

    /// Cell value = (F(b) - F(a)) / (b - a) for an antiderivative F.
    static DyadicFunction from_antiderivative(double left, double right, int depth,
                                              const std::function<double(double)>& F);
    /// Cell value = mean(a, b) for a caller-supplied exact cell average.
    static DyadicFunction from_cell_means(double left, double right, int depth,
                                          const std::function<double(double, double)>& mean);
    static DyadicFunction from_midpoints(double left, double right, int depth,
                                         const std::function<double(double)>& f);
    static DyadicFunction constant(double left, double right, int depth, double c);

    double left() const { return left_; }
    double right() const { return right_; }
    double length() const { return right_ - left_; }
    int depth() const { return depth_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    double cell_left(const Cell& c) const;
    double cell_right(const Cell& c) const;
    double cell_length(int level) const;

    /// Each cell split into 2^extra equal children with the same value.
    DyadicFunction refine(int extra) const;
    /// Pairwise averaging down to depth - levels.
    DyadicFunction coarsen(int levels) const;

    /// Averages of f and f^2 over an arbitrary [a, b] inside the support, via
    /// prefix sums with a fractionally weighted boundary cell.
    double mean_on(double a, double b) const;
    double mean_sq_on(double a, double b) const;

    /// Same function on the subinterval covered by `c`, at the remaining depth.
    DyadicFunction restrict_to(const Cell& c) const;

    void write_csv(std::ostream& os) const;
    static DyadicFunction read_csv(std::istream& is);

private:
    void check_cell(const Cell& c) const;
    double prefix_at(const std::vector<double>& prefix, double t, bool squared) const;

    double left_;
    double right_;
    int depth_;
    std::vector<double> values_;
    std::vector<double> prefix_;     // prefix_[i] = sum of values_[0..i) times cell length
    std::vector<double> prefix_sq_;  // same for values squared
};

/// Exact average of log t over [a, b], 0 <= a < b, without cancellation for
/// short intervals.
double log_mean(double a, double b);

IntervalStats averages(const DyadicFunction& f, const Cell& cell);

/// (f, h_I) = sqrt|I| (<f>_{I+} - <f>_{I-}) / 2.
double haar_coefficient(const DyadicFunction& f, const Cell& cell);

/// Largest <f^2>_I - <f>_I^2 over dyadic cells at every generation.
double bmo_norm_sq(const DyadicFunction& f);

/// Least delta with <w>_I <= delta exp<log w>_I on all dyadic cells. +inf if
/// some value is zero; throws on negative values.
double ainf_ratio(const DyadicFunction& w);

/// (1/|J|) sum_I |I| ((<w>_{I+} - <w>_{I-}) / <w>_I)^2.
double buckley_sum(const DyadicFunction& w);
/// (1/|J|) sum_I ((w, h_I) / <w>_I)^2; equals buckley_sum / 4.
double buckley_haar_sum(const DyadicFunction& w);

/// (1/|J|) sum_I |I| |<u>_{I+} - <u>_{I-}| |<v>_{I+} - <v>_{I-}|.
double two_weight_sum(const DyadicFunction& u, const DyadicFunction& v);

/// Cellwise max(L, averages over every dyadic ancestor including the cell).
DyadicFunction dyadic_maximal(const DyadicFunction& w, double L);

/// Clamp values to [c, d]; infinite bounds allowed.
DyadicFunction cutoff(const DyadicFunction& f, double c, double d);

/// Residual of the one-sided cut-off variance identity on `cell`: the variance
/// drop from clamping at d, minus
/// b2 [<f^2>_2 - <f>_2^2] + b1 b2 [<f>_2 - d][<f>_2 + d - 2<f>_1],
/// where part 1 is {f < d} and part 2 is {f >= d}.
double cutoff_identity_residual(const DyadicFunction& f, double d, const Cell& cell);

}  // namespace bellman
