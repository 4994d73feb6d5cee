#include "lamina/farey.hpp"

#include "lamina/random.hpp"
#include "lamina/sampling.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace lamina;

namespace {

Geodesic geo(double u, double v) {
    return Geodesic{BoundaryPoint::finite(u), BoundaryPoint::finite(v)};
}

constexpr double kGoldenPeriod = 1.9248473002384138; // 2 arccosh(3/2)

FareyVertex apply_matrix(long long a, long long b, long long c, long long d,
                         const FareyVertex& v) {
    BigInt num = a * v.num + b * v.den;
    BigInt den = c * v.num + d * v.den;
    if (den < 0 || (den == 0 && num < 0)) {
        num = -num;
        den = -den;
    }
    return FareyVertex{num, den};
}

} // namespace

TEST_CASE("farey vertex primitives") {
    const FareyVertex half{1, 2};
    const FareyVertex third{1, 3};
    CHECK(farey_neighbors(half, third));
    CHECK(!farey_neighbors(half, FareyVertex{1, 4}));
    CHECK(mediant(half, third) == FareyVertex{2, 5});
    CHECK(valid_farey_triangle(FareyTriangle::base()));

    SUBCASE("exact comparison against extended floats") {
        CHECK(compare(half, 0.5L) == 0);
        CHECK(compare(third, 0.333L) == 1);   // 1/3 > 0.333
        CHECK(compare(third, 0.334L) == -1);  // 1/3 < 0.334
        CHECK(compare(FareyVertex{-2, 3}, -0.67L) == 1);
        CHECK(compare(FareyVertex::infinity(), 1e30L) == 1);
        RandomStream s(17);
        for (int i = 0; i < 1000; ++i) {
            const long long p = (long long)(s.next_u64() % 2001) - 1000;
            const long long q = (long long)(s.next_u64() % 999) + 1;
            const long double x = (long double)s.uniform(-2.0, 2.0);
            const FareyVertex v{p, q};
            const long double diff = (long double)p / q - x;
            if (fabsl(diff) > 1e-12L) CHECK(compare(v, x) == (diff > 0 ? 1 : -1));
        }
    }
}

TEST_CASE("locate_start") {
    SUBCASE("endpoints separated by the base vertices") {
        const FareyTriangle t = locate_start(geo(-0.5, std::sqrt(2.0)));
        CHECK(t.v0 == FareyVertex::integer(0));
        CHECK(t.v1 == FareyVertex::integer(1));
        CHECK(t.vinf == FareyVertex::infinity());
    }
    SUBCASE("both endpoints inside (0,1)") {
        const FareyTriangle t = locate_start(geo(0.2, 0.3));
        for (const FareyVertex* v : {&t.v0, &t.v1, &t.vinf}) {
            REQUIRE(!v->is_infinite());
            const double x = v->to_double();
            CHECK(x >= 0.0);
            CHECK(x <= 1.0);
        }
        CHECK(valid_farey_triangle(t));
    }
    SUBCASE("golden-ratio axis starts at the base triangle") {
        const auto spec = closed_geodesic_from_matrix(2, 1, 1, 1);
        const FareyTriangle t = locate_start(spec.axis());
        CHECK(t.v0 == FareyVertex::integer(0));
        CHECK(t.v1 == FareyVertex::integer(1));
        CHECK(t.vinf == FareyVertex::infinity());
    }
    SUBCASE("tessellation edges are degenerate starts") {
        CHECK_THROWS_AS(locate_start(Geodesic{BoundaryPoint::finite(0.0),
                                              BoundaryPoint::at_infinity()}),
                        std::invalid_argument);
        CHECK_THROWS_AS(locate_start(geo(0.0, 1.0)), std::invalid_argument);
        CHECK_THROWS_AS(locate_start(geo(-1.0, 0.0)), std::invalid_argument);
    }
}

TEST_CASE("trace fundamentals") {
    RandomStream s(3131);
    const LiouvilleWindowSampler window(0.5, 2.0);

    SUBCASE("segment additivity against the geometric total") {
        for (int i = 0; i < 20; ++i) {
            const Geodesic g = window.sample(Sector{1, 2}, s).geodesic;
            TraceOptions opt;
            opt.length_budget = 100.0;
            const TraceResult res = trace(g, opt);
            REQUIRE(res.terminated_reason == TraceTermination::LengthBudget);
            REQUIRE(res.segments > 0);
            CHECK(std::fabs(res.closed_form_total - res.total_param_length) /
                      res.total_param_length <
                  1e-9);
        }
    }
    SUBCASE("lengths are positive, finite, and sum to the recorded total") {
        const Geodesic g = window.sample(Sector{1, 2}, s).geodesic;
        TraceOptions opt;
        opt.length_budget = 50.0;
        const TraceResult res = trace(g, opt);
        double sum = 0.0;
        for (const double l : res.lengths) {
            REQUIRE(l > 0.0);
            REQUIRE(std::isfinite(l));
            sum += l;
        }
        CHECK(sum == doctest::Approx(res.closed_form_total).epsilon(1e-12));
        CHECK(res.lengths.size() == res.segments);
    }
    SUBCASE("rational forward endpoint exits through a cusp") {
        TraceOptions opt;
        opt.length_budget = 1e6;
        const TraceResult res = trace(geo(-0.7, 0.5), opt);
        CHECK(res.terminated_reason == TraceTermination::CuspExit);
        CHECK(res.segments > 0);
        const TraceResult res2 = trace(geo(-0.3, 0.375), opt);
        CHECK(res2.terminated_reason == TraceTermination::CuspExit);
    }
    SUBCASE("step budget cuts deep excursions") {
        TraceOptions opt;
        opt.length_budget = 1e9;
        opt.step_budget = 1000;
        const TraceResult res = trace(geo(-0.5, std::sqrt(2.0)), opt);
        CHECK(res.terminated_reason == TraceTermination::StepBudget);
        CHECK(res.segments == 1000);
    }
}

TEST_CASE("exact triangle tracking") {
    RandomStream s(989);
    const LiouvilleWindowSampler window(0.5, 2.0);
    for (int i = 0; i < 5; ++i) {
        const Geodesic g = window.sample(Sector{1, 2}, s).geodesic;
        const TraceResult res = trace(g, 12.0, locate_start(g));
        REQUIRE(res.triangles.size() == res.lengths.size());
        for (std::size_t k = 0; k < res.triangles.size(); ++k) {
            const FareyTriangle& t = res.triangles[k];
            REQUIRE(valid_farey_triangle(t)); // |ps - qr| = 1 on every edge
            // the double-precision chord through the exact triangle agrees
            // with the renormalized walk's length
            const auto as_boundary = [](const FareyVertex& v) {
                return v.is_infinite() ? BoundaryPoint::at_infinity()
                                       : BoundaryPoint::finite(v.to_double());
            };
            const IdealTriangle ideal{as_boundary(t.v0), as_boundary(t.v1), as_boundary(t.vinf)};
            const double direct = chord_length(g, ideal);
            CHECK(std::fabs(direct - res.lengths[k]) <= 1e-9 * std::max(1.0, res.lengths[k]));
        }
    }
}

TEST_CASE("trace equivariance under the integer Mobius group") {
    RandomStream s(55);
    const LiouvilleWindowSampler window(0.5, 2.0);
    const long long mats[3][4] = {{1, 1, 0, 1}, {1, 0, 1, 1}, {2, 1, 1, 1}};
    for (int i = 0; i < 30; ++i) {
        const Geodesic g = window.sample(Sector{1, 2}, s).geodesic;
        const auto& mm = mats[i % 3];
        const MobiusMap m{double(mm[0]), double(mm[1]), double(mm[2]), double(mm[3])};
        const FareyTriangle start = locate_start(g);
        const FareyTriangle moved{apply_matrix(mm[0], mm[1], mm[2], mm[3], start.v0),
                                  apply_matrix(mm[0], mm[1], mm[2], mm[3], start.v1),
                                  apply_matrix(mm[0], mm[1], mm[2], mm[3], start.vinf)};
        const TraceResult a = trace(g, 12.0, start);
        const TraceResult b = trace(m(g), 12.0, moved);
        REQUIRE(a.lengths.size() == b.lengths.size());
        for (std::size_t k = 0; k < a.lengths.size(); ++k)
            CHECK(std::fabs(a.lengths[k] - b.lengths[k]) < 1e-9);
    }
}

TEST_CASE("closed geodesics from matrices") {
    SUBCASE("golden-ratio example") {
        const auto spec = closed_geodesic_from_matrix(2, 1, 1, 1);
        CHECK((double)spec.axis_attracting ==
              doctest::Approx(1.6180339887498949).epsilon(1e-14));
        CHECK((double)spec.axis_repelling ==
              doctest::Approx(-0.61803398874989485).epsilon(1e-14));
        CHECK(spec.length == doctest::Approx(kGoldenPeriod).epsilon(1e-14));
    }
    SUBCASE("parabolic and invalid matrices are rejected") {
        CHECK_THROWS_AS(closed_geodesic_from_matrix(1, 1, 0, 1), std::domain_error);
        CHECK_THROWS_AS(closed_geodesic_from_matrix(2, 0, 0, 2), std::invalid_argument);
    }
    SUBCASE("conjugation preserves trace and length") {
        const auto base = closed_geodesic_from_matrix(2, 1, 1, 1);
        // conjugate by R = [[1,1],[0,1]]: R M R^{-1}
        const auto conj = closed_geodesic_from_matrix(3, -1, 1, 0);
        CHECK(conj.trace == base.trace);
        CHECK(conj.length == doctest::Approx(base.length).epsilon(1e-14));
    }
    SUBCASE("word constructor matches explicit products") {
        const auto rl = closed_geodesic_from_word("RL");
        CHECK(rl.a == 2);
        CHECK(rl.b == 1);
        CHECK(rl.c == 1);
        CHECK(rl.d == 1);
        CHECK_THROWS_AS(closed_geodesic_from_word("RX"), std::invalid_argument);
        CHECK_THROWS_AS(closed_geodesic_from_word("RRRR"), std::domain_error); // parabolic power
    }
}

TEST_CASE("periodic traces of closed geodesics") {
    SUBCASE("golden ratio axis: two equal segments per period") {
        const auto spec = closed_geodesic_from_matrix(2, 1, 1, 1);
        const auto dist = periodic_trace(spec);
        REQUIRE(dist.lengths.size() == 2);
        CHECK(dist.multiplicity == 1);
        for (const double l : dist.lengths)
            CHECK(l == doctest::Approx(kGoldenPeriod / 2).epsilon(1e-12));
        double sum = 0.0;
        for (const double l : dist.lengths) sum += l;
        CHECK(std::fabs(sum - dist.period_length) / dist.period_length < 1e-12);
        CHECK(dist.total_mass() == doctest::Approx(2.0 / spec.length));
    }
    SUBCASE("additivity over one period for random words") {
        RandomStream s(321);
        for (int i = 0; i < 20; ++i) {
            std::string word;
            for (int k = 0; k < 12; ++k) word.push_back(s.coin() ? 'R' : 'L');
            ClosedGeodesicSpec spec;
            try {
                spec = closed_geodesic_from_word(word);
            } catch (const std::domain_error&) {
                continue;
            }
            const auto dist = periodic_trace(spec);
            double sum = 0.0;
            for (const double l : dist.lengths) sum += l;
            REQUIRE(dist.lengths.size() > 0);
            CHECK(std::fabs(sum - dist.period_length) / dist.period_length < 1e-9);
        }
    }
    SUBCASE("shift invariance of the period multiset") {
        const auto spec = closed_geodesic_from_word("RRL");
        const auto d0 = periodic_trace(spec, 0);
        const auto d1 = periodic_trace(spec, 1);
        REQUIRE(d0.lengths.size() == d1.lengths.size());
        // d1 is d0 cyclically shifted by one crossing
        const std::size_t n = d0.lengths.size();
        for (std::size_t k = 0; k < n; ++k)
            CHECK(d1.lengths[k] == doctest::Approx(d0.lengths[(k + 1) % n]).epsilon(1e-12));
    }
    SUBCASE("powers reduce to the primitive period") {
        // [[2,1],[1,1]]^2 = [[5,3],[3,2]]
        const auto spec = closed_geodesic_from_matrix(5, 3, 3, 2);
        const auto dist = periodic_trace(spec);
        CHECK(dist.multiplicity == 2);
        CHECK(dist.lengths.size() == 2);
        CHECK(dist.period_length == doctest::Approx(kGoldenPeriod).epsilon(1e-12));
    }
}

TEST_CASE("generic tracer sees the periodic structure of the golden axis") {
    const auto spec = closed_geodesic_from_matrix(2, 1, 1, 1);
    TraceOptions opt;
    opt.length_budget = 10.0 * kGoldenPeriod - 0.01;
    const TraceResult res = trace(spec.axis(), opt);
    REQUIRE(res.segments == 20); // two crossings per period, ten periods
    for (const double l : res.lengths)
        CHECK(l == doctest::Approx(kGoldenPeriod / 2).epsilon(1e-9));

    // and an asymmetric word repeats its per-period multiset
    const auto rrl = closed_geodesic_from_word("RRL");
    const auto period = periodic_trace(rrl);
    TraceOptions opt2;
    opt2.length_budget = 10.0 * rrl.length - 0.01;
    const TraceResult res2 = trace(rrl.axis(), opt2);
    REQUIRE(res2.segments == 10 * period.lengths.size());
    const std::size_t n = period.lengths.size();
    std::vector<double> first(res2.lengths.begin(), res2.lengths.begin() + n);
    std::sort(first.begin(), first.end());
    for (int rep = 1; rep < 10; ++rep) {
        std::vector<double> block(res2.lengths.begin() + rep * n,
                                  res2.lengths.begin() + (rep + 1) * n);
        std::sort(block.begin(), block.end());
        for (std::size_t k = 0; k < n; ++k)
            CHECK(block[k] == doctest::Approx(first[k]).epsilon(1e-9));
    }
}
