#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lamina {

/// Kolmogorov-Smirnov statistic of a sorted sample against a reference CDF:
/// sup over samples of max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|).
double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& cdf);

/// Weighted variant: sample i carries weight w_i, the empirical CDF steps by
/// normalized cumulative weight. Reduces to the unweighted statistic when all
/// weights are equal.
double ks_statistic_weighted(std::span<const double> sorted_samples,
                             std::span<const double> weights,
                             const std::function<double(double)>& cdf);

enum class WeightMode { Count, Length };

/// Uniform-bin histogram with underflow/overflow tallies. In Length mode each
/// observation contributes its own value as weight (the length-weighted
/// distribution); in Count mode it contributes 1.
class Histogram {
public:
    Histogram(double lo, double hi, int bins, WeightMode mode = WeightMode::Count);

    void add(double x);
    void add_weighted(double x, double w);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int bins() const { return int(weights_.size()); }
    WeightMode mode() const { return mode_; }
    double bin_lo(int i) const;
    double bin_hi(int i) const;
    double weight(int i) const { return weights_[std::size_t(i)]; }
    double underflow() const { return underflow_; }
    double overflow() const { return overflow_; }
    /// Total including underflow and overflow.
    double total_weight() const;

private:
    double lo_, hi_;
    WeightMode mode_;
    std::vector<double> weights_;
    double underflow_ = 0.0;
    double overflow_ = 0.0;
};

struct MomentSummary {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0; // raw moments E[x^k]
    double m3 = 0.0;
    double m4 = 0.0;
    double mean_stderr = 0.0;
};

MomentSummary sample_moments(std::span<const double> xs);

} // namespace lamina
