#include "lamina/stats.hpp"

#include "lamina/random.hpp"

#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace lamina;

TEST_CASE("ks statistic") {
    SUBCASE("quantile construction gives 1/(2n)") {
        for (int n : {10, 100, 1000}) {
            std::vector<double> xs;
            for (int i = 1; i <= n; ++i) xs.push_back((i - 0.5) / n);
            CHECK(ks_statistic(xs, [](double x) { return x; }) ==
                  doctest::Approx(1.0 / (2 * n)).epsilon(1e-12));
        }
    }
    SUBCASE("single sample at the median") {
        std::vector<double> xs = {0.25};
        CHECK(ks_statistic(xs, [](double) { return 0.5; }) == doctest::Approx(0.5));
    }
    SUBCASE("ten equally spaced quantiles against the identity") {
        std::vector<double> xs;
        for (int i = 1; i <= 10; ++i) xs.push_back((i - 0.5) / 10.0);
        CHECK(ks_statistic(xs, [](double x) { return x; }) == doctest::Approx(0.05));
    }
    SUBCASE("empty input is a domain error") {
        std::vector<double> xs;
        CHECK_THROWS_AS(ks_statistic(xs, [](double x) { return x; }), std::domain_error);
    }
    SUBCASE("uniform weights reduce to the unweighted statistic") {
        RandomStream s(11);
        std::vector<double> xs;
        for (int i = 0; i < 500; ++i) xs.push_back(s.uniform());
        std::sort(xs.begin(), xs.end());
        std::vector<double> w(xs.size(), 3.7);
        const auto cdf = [](double x) { return x; };
        CHECK(ks_statistic_weighted(xs, w, cdf) ==
              doctest::Approx(ks_statistic(xs, cdf)).epsilon(1e-12));
    }
}

TEST_CASE("histogram bookkeeping") {
    SUBCASE("count mode conserves total observations") {
        Histogram h(0.0, 1.0, 10);
        RandomStream s(21);
        for (int i = 0; i < 10'000; ++i) h.add(s.uniform(-0.2, 1.2));
        CHECK(h.total_weight() == doctest::Approx(10'000.0));
        CHECK(h.underflow() > 0);
        CHECK(h.overflow() > 0);
    }
    SUBCASE("length mode conserves total length") {
        Histogram h(0.0, 1.0, 16, WeightMode::Length);
        RandomStream s(22);
        double total = 0.0;
        for (int i = 0; i < 10'000; ++i) {
            const double x = s.uniform(0.0, 1.5);
            h.add(x);
            total += x;
        }
        CHECK(h.total_weight() == doctest::Approx(total).epsilon(1e-12));
    }
    SUBCASE("bin edges are uniform and increasing") {
        Histogram h(1.0, 3.0, 4);
        CHECK(h.bin_lo(0) == doctest::Approx(1.0));
        CHECK(h.bin_hi(3) == doctest::Approx(3.0));
        for (int i = 0; i < 4; ++i) CHECK(h.bin_lo(i) < h.bin_hi(i));
        CHECK(h.bin_hi(1) == doctest::Approx(h.bin_lo(2)));
    }
    CHECK_THROWS_AS(Histogram(1.0, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(Histogram(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("sample moments") {
    std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    const MomentSummary m = sample_moments(xs);
    CHECK(m.mean == doctest::Approx(2.5));
    CHECK(m.m2 == doctest::Approx(7.5));
    CHECK(m.n == 4);
    CHECK(m.mean_stderr == doctest::Approx(std::sqrt(1.25 / 4.0)).epsilon(1e-12));
}
