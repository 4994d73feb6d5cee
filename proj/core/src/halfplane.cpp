#include "lamina/halfplane.hpp"

#include <complex>
#include <limits>

namespace lamina {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Angle coordinate on the boundary circle: monotone in the positive (increasing)
// direction along R, with ∞ pinned at π. Used only for circular-order tests.
double circle_angle(const BoundaryPoint& p) {
    if (p.is_infinite()) return M_PI;
    return 2.0 * std::atan(p.value);
}

// True when x lies strictly inside the arc running from s to t in the positive
// direction (wrapping through ∞ when needed).
bool in_open_arc(const BoundaryPoint& x, const BoundaryPoint& s, const BoundaryPoint& t) {
    const double ax = circle_angle(x), as = circle_angle(s), at = circle_angle(t);
    if (as < at) return ax > as && ax < at;
    return ax > as || ax < at;
}

} // namespace

bool almost_equal(const BoundaryPoint& a, const BoundaryPoint& b, double tol) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return std::fabs(a.value - b.value) <= tol;
}

MobiusMap::MobiusMap(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {
    const double det = a * d - b * c;
    if (!(det > 0.0)) throw std::invalid_argument("MobiusMap: determinant must be positive");
    const double s = std::sqrt(det);
    a_ /= s;
    b_ /= s;
    c_ /= s;
    d_ /= s;
}

MobiusMap compose(const MobiusMap& outer, const MobiusMap& inner) {
    return MobiusMap(outer.a_ * inner.a_ + outer.b_ * inner.c_,
                     outer.a_ * inner.b_ + outer.b_ * inner.d_,
                     outer.c_ * inner.a_ + outer.d_ * inner.c_,
                     outer.c_ * inner.b_ + outer.d_ * inner.d_);
}

BoundaryPoint MobiusMap::operator()(const BoundaryPoint& p) const {
    if (p.is_infinite()) {
        if (c_ == 0.0) return BoundaryPoint::at_infinity();
        return BoundaryPoint::finite(a_ / c_);
    }
    const double den = c_ * p.value + d_;
    if (den == 0.0) return BoundaryPoint::at_infinity();
    return BoundaryPoint::finite((a_ * p.value + b_) / den);
}

PointH2 MobiusMap::operator()(const PointH2& p) const {
    const std::complex<double> z(p.x, p.y);
    const std::complex<double> w = (a_ * z + b_) / (c_ * z + d_);
    return PointH2{w.real(), w.imag()};
}

Geodesic MobiusMap::operator()(const Geodesic& g) const {
    return Geodesic{(*this)(g.p), (*this)(g.q)};
}

BoundaryPoint apply_mobius(const MobiusMap& m, const BoundaryPoint& p) { return m(p); }

TripleNormalization mobius_to_standard_triple(const BoundaryPoint& v1,
                                              const BoundaryPoint& v2,
                                              const BoundaryPoint& v3) {
    if (v1 == v2 || v2 == v3 || v1 == v3)
        throw std::invalid_argument("mobius_to_standard_triple: vertices must be pairwise distinct");

    // Raw cross-ratio map z ↦ (z−v1)(v2−v3) / ((z−v3)(v2−v1)) sending
    // v1 ↦ 0, v2 ↦ 1, v3 ↦ ∞, with limit forms when a vertex is ∞.
    double a, b, c, d;
    if (v1.is_infinite()) {
        a = 0.0;
        b = v2.value - v3.value;
        c = 1.0;
        d = -v3.value;
    } else if (v2.is_infinite()) {
        a = 1.0;
        b = -v1.value;
        c = 1.0;
        d = -v3.value;
    } else if (v3.is_infinite()) {
        a = 1.0;
        b = -v1.value;
        c = 0.0;
        d = v2.value - v1.value;
    } else {
        const double s = v2.value - v3.value;
        const double t = v2.value - v1.value;
        a = s;
        b = -v1.value * s;
        c = t;
        d = -v3.value * t;
    }

    const double det = a * d - b * c;
    if (det > 0.0) return TripleNormalization{MobiusMap(a, b, c, d), {0, 1, 2}};

    // Negatively oriented triple: swap the 0 and 1 targets by composing with
    // z ↦ 1−z, which flips the determinant sign and fixes {0,1,∞} setwise.
    return TripleNormalization{MobiusMap(-a + c, -b + d, c, d), {1, 0, 2}};
}

double liouville_box_mass(const BoundaryPoint& a, const BoundaryPoint& b,
                          const BoundaryPoint& c, const BoundaryPoint& d) {
    if (a == b || c == d) return 0.0; // zero-width box

    const bool shares_endpoint = (a == c) || (a == d) || (b == c) || (b == d);
    if (shares_endpoint)
        throw std::invalid_argument("liouville_box_mass: intervals must be disjoint");

    // The arcs [a,b] and [c,d] interleave exactly when one of c,d separates
    // a from b on the circle; such boxes have no disjoint-arc reading.
    if (in_open_arc(c, a, b) != in_open_arc(d, a, b))
        throw std::invalid_argument("liouville_box_mass: overlapping intervals");

    // Cross ratio (a−c)(b−d)/((a−d)(b−c)) with the usual cancellation when one
    // endpoint is at infinity. Disjointness means at most one is infinite.
    double x;
    if (a.is_infinite())
        x = (b.value - d.value) / (b.value - c.value);
    else if (b.is_infinite())
        x = (a.value - c.value) / (a.value - d.value);
    else if (c.is_infinite())
        x = (b.value - d.value) / (a.value - d.value);
    else if (d.is_infinite())
        x = (a.value - c.value) / (b.value - c.value);
    else
        x = ((a.value - c.value) * (b.value - d.value)) /
            ((a.value - d.value) * (b.value - c.value));

    return std::fabs(std::log(std::fabs(x)));
}

double liouville_box_mass(double a, double b, double c, double d) {
    return liouville_box_mass(BoundaryPoint::finite(a), BoundaryPoint::finite(b),
                              BoundaryPoint::finite(c), BoundaryPoint::finite(d));
}

double hyp_distance(const PointH2& p, const PointH2& q) {
    if (!(p.y > 0.0) || !(q.y > 0.0))
        throw std::invalid_argument("hyp_distance: points must lie in the upper half plane");
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    // 2 asinh(|p−q| / (2 √(y_p y_q))) stays accurate for nearby points, unlike
    // the arccosh form.
    const double chord = std::sqrt(dx * dx + dy * dy);
    return 2.0 * std::asinh(chord / (2.0 * std::sqrt(p.y * q.y)));
}

Geodesic geodesic_from_tangent(const UnitTangent& v) {
    if (!(v.base.y > 0.0))
        throw std::invalid_argument("geodesic_from_tangent: base must lie in the upper half plane");
    const double ct = std::cos(v.theta);
    const double st = std::sin(v.theta);
    // a double hitting pi/2 leaves cos at ~6e-17; treat that as vertical
    if (std::fabs(ct) < 1e-15) {
        // Vertical geodesic through the base point.
        const BoundaryPoint foot = BoundaryPoint::finite(v.base.x);
        if (st > 0.0) return Geodesic{foot, BoundaryPoint::at_infinity()};
        return Geodesic{BoundaryPoint::at_infinity(), foot};
    }
    // Semicircle centered at c on the real axis; the radius vector at the base
    // is perpendicular to the direction.
    const double c = v.base.x + v.base.y * st / ct;
    const double r = std::hypot(v.base.x - c, v.base.y);
    if (ct > 0.0) return Geodesic{BoundaryPoint::finite(c - r), BoundaryPoint::finite(c + r)};
    return Geodesic{BoundaryPoint::finite(c + r), BoundaryPoint::finite(c - r)};
}

double tangent_angle_at(const Geodesic& g, const PointH2& base) {
    if (g.p.is_infinite() || g.q.is_infinite()) {
        return g.q.is_infinite() ? M_PI / 2.0 : -M_PI / 2.0;
    }
    const double c = 0.5 * (g.p.value + g.q.value);
    // Velocity along the semicircle at (x, y) is ±(y, c−x); the sign follows
    // the orientation toward the forward endpoint.
    const double dir = (g.q.value > g.p.value) ? 1.0 : -1.0;
    return std::atan2(dir * (c - base.x), dir * base.y);
}

} // namespace lamina
