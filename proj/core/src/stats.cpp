#include "lamina/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lamina {

double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& cdf) {
    if (sorted_samples.empty()) throw std::domain_error("ks_statistic: empty sample");
    const double n = double(sorted_samples.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        const double f = cdf(sorted_samples[i]);
        const double hi = std::fabs(double(i + 1) / n - f);
        const double lo = std::fabs(double(i) / n - f);
        sup = std::max(sup, std::max(hi, lo));
    }
    return sup;
}

double ks_statistic_weighted(std::span<const double> sorted_samples,
                             std::span<const double> weights,
                             const std::function<double(double)>& cdf) {
    if (sorted_samples.empty()) throw std::domain_error("ks_statistic_weighted: empty sample");
    if (sorted_samples.size() != weights.size())
        throw std::invalid_argument("ks_statistic_weighted: size mismatch");
    double total = 0.0;
    for (const double w : weights) total += w;
    if (!(total > 0.0)) throw std::domain_error("ks_statistic_weighted: total weight must be positive");
    double sup = 0.0, cum = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        const double f = cdf(sorted_samples[i]);
        const double before = cum / total;
        cum += weights[i];
        const double after = cum / total;
        sup = std::max(sup, std::max(std::fabs(after - f), std::fabs(before - f)));
    }
    return sup;
}

Histogram::Histogram(double lo, double hi, int bins, WeightMode mode)
    : lo_(lo), hi_(hi), mode_(mode) {
    if (!(lo < hi) || bins < 1) throw std::invalid_argument("Histogram: bad range or bin count");
    weights_.assign(std::size_t(bins), 0.0);
}

void Histogram::add(double x) { add_weighted(x, mode_ == WeightMode::Length ? x : 1.0); }

void Histogram::add_weighted(double x, double w) {
    if (x < lo_) {
        underflow_ += w;
        return;
    }
    if (x >= hi_) {
        overflow_ += w;
        return;
    }
    const auto i = std::size_t((x - lo_) / (hi_ - lo_) * double(weights_.size()));
    weights_[std::min(i, weights_.size() - 1)] += w;
}

double Histogram::bin_lo(int i) const {
    return lo_ + (hi_ - lo_) * double(i) / double(weights_.size());
}

double Histogram::bin_hi(int i) const {
    return lo_ + (hi_ - lo_) * double(i + 1) / double(weights_.size());
}

double Histogram::total_weight() const {
    double t = underflow_ + overflow_;
    for (const double w : weights_) t += w;
    return t;
}

MomentSummary sample_moments(std::span<const double> xs) {
    MomentSummary s;
    s.n = xs.size();
    if (xs.empty()) return s;
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    for (const double x : xs) {
        m1 += x;
        m2 += x * x;
        m3 += x * x * x;
        m4 += x * x * x * x;
    }
    const double n = double(xs.size());
    s.mean = m1 / n;
    s.m2 = m2 / n;
    s.m3 = m3 / n;
    s.m4 = m4 / n;
    const double var = std::max(0.0, s.m2 - s.mean * s.mean);
    s.mean_stderr = std::sqrt(var / n);
    return s;
}

} // namespace lamina
