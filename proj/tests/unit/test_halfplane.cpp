#include "lamina/halfplane.hpp"
#include "lamina/random.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <cmath>

using namespace lamina;
using test_support::random_mobius;
using test_support::random_point;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("mobius action on boundary points") {
    const MobiusMap id = MobiusMap::identity();
    CHECK(id(BoundaryPoint::finite(0.7)).value == 0.7);

    // z -> -1/z sends the pole 0 to infinity and infinity to 0
    const MobiusMap inv(0.0, -1.0, 1.0, 0.0);
    CHECK(inv(BoundaryPoint::finite(0.0)).is_infinite());
    CHECK(inv(BoundaryPoint::at_infinity()).value == doctest::Approx(0.0));

    // z -> 1/(1-z) realizes (0,1,inf) -> (1,inf,0)
    const MobiusMap rot(0.0, 1.0, -1.0, 1.0);
    CHECK(rot(BoundaryPoint::finite(2.0)).value == doctest::Approx(-1.0).epsilon(1e-15));
    // cross-check through the inverse
    CHECK(rot.inverse()(BoundaryPoint::finite(-1.0)).value == doctest::Approx(2.0).epsilon(1e-15));

    CHECK_THROWS_AS(MobiusMap(1.0, 0.0, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("mobius group action property") {
    RandomStream s(101);
    for (int i = 0; i < 1000; ++i) {
        const MobiusMap m1 = random_mobius(s);
        const MobiusMap m2 = random_mobius(s);
        const BoundaryPoint p = BoundaryPoint::finite(s.uniform(-4.0, 4.0));
        const BoundaryPoint lhs = m2(m1(p));
        const BoundaryPoint rhs = compose(m2, m1)(p);
        REQUIRE(!lhs.is_infinite());
        REQUIRE(!rhs.is_infinite());
        CHECK(lhs.value == doctest::Approx(rhs.value).epsilon(1e-10));
    }
}

TEST_CASE("normalization of vertex triples") {
    SUBCASE("standard triple is fixed") {
        const auto n = mobius_to_standard_triple(BoundaryPoint::finite(0.0),
                                                 BoundaryPoint::finite(1.0),
                                                 BoundaryPoint::at_infinity());
        CHECK(n.targets == std::array<int, 3>{0, 1, 2});
        CHECK(n.map(BoundaryPoint::finite(0.0)).value == doctest::Approx(0.0));
        CHECK(n.map(BoundaryPoint::finite(1.0)).value == doctest::Approx(1.0));
        CHECK(n.map(BoundaryPoint::at_infinity()).is_infinite());
    }
    SUBCASE("cyclic triple lands on an even permutation") {
        const auto n = mobius_to_standard_triple(BoundaryPoint::at_infinity(),
                                                 BoundaryPoint::finite(0.0),
                                                 BoundaryPoint::finite(1.0));
        CHECK(n.targets == std::array<int, 3>{0, 1, 2});
        CHECK(n.map(BoundaryPoint::at_infinity()).value == doctest::Approx(0.0));
        CHECK(n.map(BoundaryPoint::finite(0.0)).value == doctest::Approx(1.0));
        CHECK(n.map(BoundaryPoint::finite(1.0)).is_infinite());
    }
    SUBCASE("(-1, 0, 1) maps onto {0,1,inf} per its reported targets") {
        const BoundaryPoint v1 = BoundaryPoint::finite(-1.0);
        const BoundaryPoint v2 = BoundaryPoint::finite(0.0);
        const BoundaryPoint v3 = BoundaryPoint::finite(1.0);
        const auto n = mobius_to_standard_triple(v1, v2, v3);
        const BoundaryPoint targets[3] = {BoundaryPoint::finite(0.0), BoundaryPoint::finite(1.0),
                                          BoundaryPoint::at_infinity()};
        const BoundaryPoint v[3] = {v1, v2, v3};
        for (int i = 0; i < 3; ++i) {
            const BoundaryPoint image = n.map(v[i]);
            const BoundaryPoint want = targets[std::size_t(n.targets[std::size_t(i)])];
            CHECK(image.is_infinite() == want.is_infinite());
            if (!want.is_infinite())
                CHECK(image.value == doctest::Approx(want.value).epsilon(1e-12));
        }
    }
    SUBCASE("negatively oriented triple swaps the 0 and 1 targets") {
        const auto n = mobius_to_standard_triple(BoundaryPoint::finite(1.0),
                                                 BoundaryPoint::finite(0.0),
                                                 BoundaryPoint::at_infinity());
        CHECK(n.targets == std::array<int, 3>{1, 0, 2});
        CHECK(n.map(BoundaryPoint::finite(1.0)).value == doctest::Approx(1.0));
        CHECK(n.map(BoundaryPoint::finite(0.0)).value == doctest::Approx(0.0));
        CHECK(n.map(BoundaryPoint::at_infinity()).is_infinite());
    }
    SUBCASE("degenerate triple is rejected") {
        CHECK_THROWS_AS(mobius_to_standard_triple(BoundaryPoint::finite(1.0),
                                                  BoundaryPoint::finite(1.0),
                                                  BoundaryPoint::at_infinity()),
                        std::invalid_argument);
    }
}

TEST_CASE("liouville box mass") {
    // direct cross-ratio evaluation
    CHECK(liouville_box_mass(-1.0, 0.0, 1.0, 2.0) ==
          doctest::Approx(0.28768207245178093).epsilon(1e-14));
    // zero-width box
    CHECK(liouville_box_mass(0.5, 0.5, 1.0, 2.0) == 0.0);
    // interleaved arcs have no disjoint reading
    CHECK_THROWS_AS(liouville_box_mass(0.0, 2.0, 1.0, 3.0), std::invalid_argument);

    SUBCASE("invariance under the Mobius group") {
        RandomStream s(202);
        for (int i = 0; i < 1000; ++i) {
            const double a = s.uniform(-3.0, -2.0);
            const double b = s.uniform(-1.9, -1.0);
            const double c = s.uniform(0.0, 1.0);
            const double d = s.uniform(1.1, 2.0);
            const double mass = liouville_box_mass(a, b, c, d);
            const MobiusMap m = random_mobius(s);
            const double mapped = liouville_box_mass(
                m(BoundaryPoint::finite(a)), m(BoundaryPoint::finite(b)),
                m(BoundaryPoint::finite(c)), m(BoundaryPoint::finite(d)));
            CHECK(mapped == doctest::Approx(mass).epsilon(1e-10));
        }
    }
    SUBCASE("interval containing infinity via explicit tag") {
        // image of [-1,0]x[1,2] under z -> 1/z has an infinite-endpoint arc
        const double mass = liouville_box_mass(-1.0, 0.0, 1.0, 2.0);
        const double mapped =
            liouville_box_mass(BoundaryPoint::finite(-1.0), BoundaryPoint::at_infinity(),
                               BoundaryPoint::finite(1.0), BoundaryPoint::finite(0.5));
        CHECK(mapped == doctest::Approx(mass).epsilon(1e-12));
    }
}

TEST_CASE("hyperbolic distance") {
    CHECK(hyp_distance({0.0, 1.0}, {0.0, 2.0}) ==
          doctest::Approx(0.69314718055994531).epsilon(1e-14));
    CHECK(hyp_distance({0.3, 0.8}, {0.3, 0.8}) == 0.0);
    CHECK(hyp_distance({0.0, 1.0}, {1.0, 1.0}) ==
          doctest::Approx(0.96242365011920689).epsilon(1e-14));

    RandomStream s(303);
    SUBCASE("mobius invariance") {
        for (int i = 0; i < 1000; ++i) {
            const PointH2 p = random_point(s);
            const PointH2 q = random_point(s);
            const MobiusMap m = random_mobius(s);
            CHECK(hyp_distance(m(p), m(q)) ==
                  doctest::Approx(hyp_distance(p, q)).epsilon(1e-10));
        }
    }
    SUBCASE("triangle inequality") {
        for (int i = 0; i < 1000; ++i) {
            const PointH2 p = random_point(s);
            const PointH2 q = random_point(s);
            const PointH2 r = random_point(s);
            CHECK(hyp_distance(p, q) <= hyp_distance(p, r) + hyp_distance(r, q) + 1e-12);
        }
    }
}

TEST_CASE("geodesic from tangent vector") {
    SUBCASE("vertical ray") {
        const Geodesic g = geodesic_from_tangent({{0.0, 1.0}, kPi / 2});
        CHECK(g.p.value == doctest::Approx(0.0));
        CHECK(g.q.is_infinite());
    }
    SUBCASE("unit semicircle") {
        const Geodesic g = geodesic_from_tangent({{0.0, 1.0}, 0.0});
        CHECK(g.p.value == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(g.q.value == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("generic base point: on-circle and angle recovery") {
        const UnitTangent v{{0.3, 0.7}, 1.0};
        const Geodesic g = geodesic_from_tangent(v);
        const double c = 0.5 * (g.p.value + g.q.value);
        const double r = 0.5 * std::fabs(g.q.value - g.p.value);
        const double on = (v.base.x - c) * (v.base.x - c) + v.base.y * v.base.y;
        CHECK(on == doctest::Approx(r * r).epsilon(1e-12));
        CHECK(tangent_angle_at(g, v.base) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("angle recovery round trip") {
        RandomStream s(404);
        for (int i = 0; i < 1000; ++i) {
            const UnitTangent v{random_point(s), s.uniform(-kPi, kPi)};
            const Geodesic g = geodesic_from_tangent(v);
            double back = tangent_angle_at(g, v.base);
            double diff = std::remainder(back - v.theta, 2 * kPi);
            CHECK(std::fabs(diff) < 1e-10);
        }
    }
}
