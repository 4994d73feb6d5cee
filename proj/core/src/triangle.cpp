#include "lamina/triangle.hpp"

#include "lamina/detail/chords.hpp"

#include <cmath>
#include <limits>

namespace lamina {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Endpoint code: 1..3 for the open intervals, -1/-2/-3 for the vertices 0/1/inf.
int endpoint_code(const BoundaryPoint& p, double tol) {
    if (p.is_infinite()) return -3;
    const double x = p.value;
    if (std::fabs(x) <= tol) return -1;
    if (std::fabs(x - 1.0) <= tol) return -2;
    if (x < 0.0) return 1;
    if (x < 1.0) return 2;
    return 3;
}

// Interval opposite a vertex: geodesics from the vertex enter the open
// triangle exactly when the far endpoint lies there.
int opposite_interval(int vertex_code) {
    switch (vertex_code) {
        case -1: return 3; // vertex 0
        case -2: return 1; // vertex 1
        default: return 2; // vertex inf
    }
}

// Geodesic in circle/line form for intersection work.
struct Arc {
    bool vertical;
    double x0;   // line position when vertical
    double c, r; // circle center/radius otherwise
};

Arc arc_of(const BoundaryPoint& p, const BoundaryPoint& q) {
    if (p.is_infinite()) return Arc{true, q.value, 0, 0};
    if (q.is_infinite()) return Arc{true, p.value, 0, 0};
    const double c = 0.5 * (p.value + q.value);
    return Arc{false, 0, c, std::fabs(q.value - p.value) * 0.5};
}

struct Hit {
    bool found = false;
    bool tangent = false;
    PointH2 at;
};

Hit intersect(const Arc& g, const Arc& e) {
    Hit h;
    const double tang_tol = 1e-13;
    if (g.vertical && e.vertical) return h;
    if (g.vertical || e.vertical) {
        const Arc& line = g.vertical ? g : e;
        const Arc& circ = g.vertical ? e : g;
        const double y2 = (circ.r - (line.x0 - circ.c)) * (circ.r + (line.x0 - circ.c));
        if (y2 > tang_tol * circ.r * circ.r) {
            h.found = true;
            h.at = PointH2{line.x0, std::sqrt(y2)};
        } else if (y2 > -tang_tol * circ.r * circ.r) {
            h.tangent = true;
        }
        return h;
    }
    if (g.c == e.c) return h; // concentric: disjoint or identical
    const double x = (g.r * g.r - e.r * e.r - g.c * g.c + e.c * e.c) / (2.0 * (e.c - g.c));
    const double y2 = (g.r - (x - g.c)) * (g.r + (x - g.c));
    const double scale = g.r * e.r;
    if (y2 > tang_tol * scale) {
        h.found = true;
        h.at = PointH2{x, std::sqrt(y2)};
    } else if (y2 > -tang_tol * scale) {
        h.tangent = true;
    }
    return h;
}

} // namespace

const std::array<Sector, 6>& all_sectors() {
    static const std::array<Sector, 6> s = {Sector{1, 2}, Sector{2, 1}, Sector{1, 3},
                                            Sector{3, 1}, Sector{2, 3}, Sector{3, 2}};
    return s;
}

ChordClassification classify(const Geodesic& g, const ClassifyOptions& opt) {
    const int cp = endpoint_code(g.p, opt.vertex_tol);
    const int cq = endpoint_code(g.q, opt.vertex_tol);
    ChordClassification out;
    if (cp < 0 || cq < 0) {
        out.kind = ChordKind::VertexHit;
        if (cp < 0 && cq < 0) {
            out.enters_interior = false; // an edge of the triangle
        } else {
            const int vertex = cp < 0 ? cp : cq;
            const int other = cp < 0 ? cq : cp;
            out.enters_interior = (other == opposite_interval(vertex));
        }
        return out;
    }
    if (cp == cq) {
        out.kind = ChordKind::Misses;
        return out;
    }
    out.kind = ChordKind::Crosses;
    out.sector = Sector{cp, cq};
    return out;
}

double chord_length_standard(const Geodesic& g, const ClassifyOptions& opt) {
    const ChordClassification cls = classify(g, opt);
    switch (cls.kind) {
        case ChordKind::Misses:
            return 0.0;
        case ChordKind::VertexHit:
            return cls.enters_interior ? kInf : 0.0;
        case ChordKind::Crosses:
            break;
    }
    return detail::sector_chord(cls.sector.i, cls.sector.j, g.p.value, g.q.value);
}

double chord_length(const Geodesic& g, const IdealTriangle& t, const ClassifyOptions& opt) {
    const TripleNormalization n = mobius_to_standard_triple(t.v1, t.v2, t.v3);
    return chord_length_standard(n.map(g), opt);
}

double ChordOracle::length() const {
    if (!points) return 0.0;
    return hyp_distance(points->entry, points->exit);
}

ChordOracle chord_endpoints_oracle(const Geodesic& g, const IdealTriangle& t) {
    ChordOracle out;
    const Arc ga = arc_of(g.p, g.q);
    const Arc edges[3] = {arc_of(t.v1, t.v2), arc_of(t.v2, t.v3), arc_of(t.v1, t.v3)};

    PointH2 pts[3];
    int n = 0;
    for (const Arc& e : edges) {
        const Hit h = intersect(ga, e);
        if (h.tangent) out.tangency = true;
        if (h.found && n < 3) pts[n++] = h.at;
    }
    if (out.tangency || n != 2) return out; // missing or degenerate crossing

    // Order the two crossings along the orientation of g.
    bool swap;
    if (ga.vertical) {
        const bool upward = g.q.is_infinite();
        swap = upward ? (pts[0].y > pts[1].y) : (pts[0].y < pts[1].y);
    } else {
        const bool rightward = g.q.value > g.p.value;
        swap = rightward ? (pts[0].x > pts[1].x) : (pts[0].x < pts[1].x);
    }
    if (swap) std::swap(pts[0], pts[1]);
    out.points = ChordEndpoints{pts[0], pts[1]};
    return out;
}

BoundaryPoint BoundarySelfMap::operator()(const BoundaryPoint& p) const {
    if (p.is_infinite()) {
        if (c == 0.0) return BoundaryPoint::at_infinity();
        return BoundaryPoint::finite(a / c);
    }
    const double den = c * p.value + d;
    if (den == 0.0) return BoundaryPoint::at_infinity();
    return BoundaryPoint::finite((a * p.value + b) / den);
}

Geodesic BoundarySelfMap::operator()(const Geodesic& g) const {
    return Geodesic{(*this)(g.p), (*this)(g.q)};
}

double BoundarySelfMap::derivative_mag(double x) const {
    const double den = c * x + d;
    return 1.0 / (den * den); // |det| = 1 for every self-map
}

const std::array<BoundarySelfMap, 6>& standard_self_maps() {
    // z, 1/(1-z), (z-1)/z are the rotations; 1-z, 1/z, z/(z-1) are the
    // boundary actions of the reflections.
    static const std::array<BoundarySelfMap, 6> maps = {
        BoundarySelfMap{1, 0, 0, 1, {1, 2, 3}},
        BoundarySelfMap{0, 1, -1, 1, {2, 3, 1}},
        BoundarySelfMap{1, -1, 1, 0, {3, 1, 2}},
        BoundarySelfMap{-1, 1, 0, 1, {3, 2, 1}},
        BoundarySelfMap{0, 1, 1, 0, {1, 3, 2}},
        BoundarySelfMap{1, 0, 1, -1, {2, 1, 3}},
    };
    return maps;
}

const BoundarySelfMap& self_map_for_sector(const Sector& target) {
    for (const BoundarySelfMap& m : standard_self_maps()) {
        if (m.interval_image[0] == target.i && m.interval_image[1] == target.j) return m;
    }
    throw std::invalid_argument("self_map_for_sector: invalid sector");
}

} // namespace lamina
