#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace lamina {

/// A point of the circle at infinity of the upper half plane, R ∪ {∞}.
/// The point at infinity is an explicit tag, never a large float.
struct BoundaryPoint {
    double value = 0.0;
    bool infinite = false;

    static constexpr BoundaryPoint at_infinity() { return BoundaryPoint{0.0, true}; }
    static constexpr BoundaryPoint finite(double x) { return BoundaryPoint{x, false}; }

    bool is_infinite() const { return infinite; }

    friend bool operator==(const BoundaryPoint& a, const BoundaryPoint& b) {
        if (a.infinite || b.infinite) return a.infinite == b.infinite;
        return a.value == b.value;
    }
};

/// Equality up to an absolute tolerance on finite values (default 1e-12);
/// the finite/infinite tag is always compared exactly.
bool almost_equal(const BoundaryPoint& a, const BoundaryPoint& b, double tol = 1e-12);

/// Interior point of the upper half plane, y > 0.
struct PointH2 {
    double x = 0.0;
    double y = 1.0;
};

/// Unit tangent vector: base point plus the Euclidean direction angle of the
/// tangent, taken modulo 2π.
struct UnitTangent {
    PointH2 base;
    double theta = 0.0;
};

/// Oriented geodesic, identified with its ordered pair of distinct endpoints
/// at infinity. Orientation runs from p (backward) to q (forward).
struct Geodesic {
    BoundaryPoint p;
    BoundaryPoint q;
};

/// Orientation-preserving isometry of H², z ↦ (az+b)/(cz+d) with ad−bc > 0.
/// Coefficients are renormalized to determinant one on construction and after
/// every composition so that long products stay well scaled.
class MobiusMap {
public:
    MobiusMap() : a_(1), b_(0), c_(0), d_(1) {}
    MobiusMap(double a, double b, double c, double d);

    static MobiusMap identity() { return MobiusMap(); }

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double d() const { return d_; }

    MobiusMap inverse() const { return MobiusMap(d_, -b_, -c_, a_); }

    BoundaryPoint operator()(const BoundaryPoint& p) const;
    PointH2 operator()(const PointH2& p) const;
    Geodesic operator()(const Geodesic& g) const;

    friend MobiusMap compose(const MobiusMap& outer, const MobiusMap& inner);
    friend MobiusMap operator*(const MobiusMap& outer, const MobiusMap& inner) {
        return compose(outer, inner);
    }

private:
    double a_, b_, c_, d_;
};

/// The action of m on a boundary point: poles map to the point at infinity,
/// and m(∞) = a/c (or ∞ when c = 0).
BoundaryPoint apply_mobius(const MobiusMap& m, const BoundaryPoint& p);

/// Result of normalizing an ordered vertex triple to {0, 1, ∞}.
/// targets[i] records where vertex i went: 0 ↦ 0, 1 ↦ 1, 2 ↦ ∞.
/// A positively oriented triple maps directly (targets = {0,1,2}); a
/// negatively oriented one cannot reach (0,1,∞) with positive determinant,
/// so the 0 and 1 targets are swapped (targets = {1,0,2}) and the triangle
/// {0,1,∞} is still preserved setwise.
struct TripleNormalization {
    MobiusMap map;
    std::array<int, 3> targets;
};

TripleNormalization mobius_to_standard_triple(const BoundaryPoint& v1,
                                              const BoundaryPoint& v2,
                                              const BoundaryPoint& v3);

/// Liouville mass of the geodesic box [a,b]×[c,d]:
///   μ = |log|(a−c)(b−d) / ((a−d)(b−c))||
/// for disjoint boundary arcs. Degenerate (zero width) boxes have mass zero;
/// interleaved arcs are rejected.
double liouville_box_mass(const BoundaryPoint& a, const BoundaryPoint& b,
                          const BoundaryPoint& c, const BoundaryPoint& d);
double liouville_box_mass(double a, double b, double c, double d);

/// Hyperbolic distance in the upper half plane.
double hyp_distance(const PointH2& p, const PointH2& q);

/// The oriented geodesic through v.base with initial direction v.theta.
/// The backward endpoint comes first.
Geodesic geodesic_from_tangent(const UnitTangent& v);

/// Direction angle of g at an interior point assumed to lie on g; inverse of
/// geodesic_from_tangent up to 2π.
double tangent_angle_at(const Geodesic& g, const PointH2& base);

} // namespace lamina
