#pragma once

#include "lamina/halfplane.hpp"

#include <array>
#include <optional>

namespace lamina {

/// Ideal triangle given by three pairwise distinct boundary vertices.
struct IdealTriangle {
    BoundaryPoint v1, v2, v3;
    static IdealTriangle standard() {
        return IdealTriangle{BoundaryPoint::finite(0.0), BoundaryPoint::finite(1.0),
                             BoundaryPoint::at_infinity()};
    }
};

/// One of the six ordered endpoint sectors I_i x I_j of the standard triangle,
/// with I1 = (-inf,0), I2 = (0,1), I3 = (1,inf).
struct Sector {
    int i = 1;
    int j = 2;
    friend bool operator==(const Sector& a, const Sector& b) { return a.i == b.i && a.j == b.j; }
};

/// All six ordered sectors, in a fixed enumeration order.
const std::array<Sector, 6>& all_sectors();

enum class ChordKind { Misses, Crosses, VertexHit };

struct ChordClassification {
    ChordKind kind = ChordKind::Misses;
    Sector sector;               // meaningful only for Crosses
    bool enters_interior = false; // meaningful only for VertexHit
};

/// Tolerance for deciding that an endpoint sits on a vertex of the standard
/// triangle. Farey traces produce exact values, so the default is tight.
struct ClassifyOptions {
    double vertex_tol = 1e-12;
};

ChordClassification classify(const Geodesic& g, const ClassifyOptions& opt = {});

/// Length of g meeting the standard ideal triangle: 0 when disjoint, the
/// closed-form chord length per sector when crossing, and 0 or +inf for
/// geodesics ending in a vertex (infinite exactly when the geodesic enters the
/// open triangle, i.e. its other endpoint lies in the interval opposite the
/// vertex).
double chord_length_standard(const Geodesic& g, const ClassifyOptions& opt = {});

/// Length of g meeting an arbitrary ideal triangle, by normalizing T to the
/// standard one. Invariant under which vertex permutation the normalizer picks.
double chord_length(const Geodesic& g, const IdealTriangle& t, const ClassifyOptions& opt = {});

struct ChordEndpoints {
    PointH2 entry;
    PointH2 exit;
};

/// Independent geometric verification path: the two points where g meets the
/// boundary of T, found by direct circle/line intersection. Absent when g
/// misses T (or meets it non-transversally); near-tangency sets the flag.
struct ChordOracle {
    std::optional<ChordEndpoints> points;
    bool tangency = false;
    double length() const;
};

ChordOracle chord_endpoints_oracle(const Geodesic& g, const IdealTriangle& t);

/// Linear-fractional self-map of the vertex set {0,1,inf} acting on boundary
/// coordinates. Three are Mobius rotations of the triangle; the other three
/// are the boundary actions of its reflections (determinant -1).
struct BoundarySelfMap {
    double a, b, c, d;
    std::array<int, 3> interval_image; // image of I1, I2, I3 (1-based values)
    BoundaryPoint operator()(const BoundaryPoint& p) const;
    Geodesic operator()(const Geodesic& g) const;
    /// |d sigma / dz| at a finite boundary point.
    double derivative_mag(double x) const;
};

const std::array<BoundarySelfMap, 6>& standard_self_maps();

/// The unique self-map carrying sector (1,2) onto the given sector.
const BoundarySelfMap& self_map_for_sector(const Sector& target);

} // namespace lamina
