#pragma once

#include "lamina/halfplane.hpp"
#include "lamina/triangle.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace lamina {

using BigInt = boost::multiprecision::cpp_int;

/// Vertex of the Farey tessellation: an exact rational p/q in lowest terms
/// with q >= 0, where 1/0 is the cusp at infinity.
struct FareyVertex {
    BigInt num = 0;
    BigInt den = 1;

    static FareyVertex infinity() { return FareyVertex{1, 0}; }
    static FareyVertex integer(long long n) { return FareyVertex{n, 1}; }

    bool is_infinite() const { return den == 0; }
    double to_double() const;

    friend bool operator==(const FareyVertex& a, const FareyVertex& b) {
        return a.num == b.num && a.den == b.den;
    }
};

FareyVertex mediant(const FareyVertex& a, const FareyVertex& b);

/// |ps - qr| == 1, i.e. the two rationals span an edge of the tessellation.
bool farey_neighbors(const FareyVertex& a, const FareyVertex& b);

/// Exact sign of p/q - x for a finite extended-precision x.
int compare(const FareyVertex& a, long double x);

/// Tessellation triangle, stored in frame order: the vertices that normalize
/// to 0, 1 and infinity respectively.
struct FareyTriangle {
    FareyVertex v0, v1, vinf;
    static FareyTriangle base() {
        return FareyTriangle{FareyVertex::integer(0), FareyVertex::integer(1),
                             FareyVertex::infinity()};
    }
};

/// Every pair of vertices must be a Farey edge.
bool valid_farey_triangle(const FareyTriangle& t);

enum class TraceTermination { LengthBudget, StepBudget, CuspExit };

struct TraceOptions {
    double length_budget = 1000.0;
    std::uint64_t step_budget = 10'000'000;
    bool record_lengths = true;
    /// Maintain exact big-integer vertices along the walk and attach the
    /// triangle to each recorded segment. Exact tracking costs big-integer
    /// work per step, so it is off for long statistical traces.
    bool record_triangles = false;
    /// Renormalized forward endpoint closer than this to a frame vertex is
    /// treated as running into the cusp.
    double cusp_tol = 1e-15;
};

struct TraceResult {
    std::vector<double> lengths;
    std::vector<FareyTriangle> triangles; // parallel to lengths when recorded
    /// Independent per-segment geometric total (circle intersections plus
    /// distance), against which the closed-form sum is checked.
    double total_param_length = 0.0;
    double closed_form_total = 0.0;
    std::uint64_t segments = 0;
    TraceTermination terminated_reason = TraceTermination::LengthBudget;
};

/// First tessellation triangle the forward ray of g crosses, found by walking
/// down from the base triangle (0, 1, inf). Throws on geodesics running
/// between two tessellation vertices (edges and cusp-to-cusp lines).
FareyTriangle locate_start(const Geodesic& g);

TraceResult trace(const Geodesic& g, const TraceOptions& opt);
/// Spec form: trace from an explicit start triangle with triangles recorded.
TraceResult trace(const Geodesic& g, double length_budget, const FareyTriangle& start);

/// Streaming form: sink receives each segment length and may return false to
/// stop. Lengths/triangles are only stored per the options.
TraceResult trace_visit(const Geodesic& g, const TraceOptions& opt,
                        const std::function<bool(double)>& sink);

/// Hyperbolic element of the integer Mobius group together with its axis.
struct ClosedGeodesicSpec {
    BigInt a, b, c, d; // determinant 1, |a + d| > 2
    BigInt trace;
    long double axis_repelling = 0;  // backward endpoint of the axis
    long double axis_attracting = 0; // forward endpoint
    double length = 0.0;             // 2 arccosh(|trace| / 2)

    Geodesic axis() const;
};

ClosedGeodesicSpec closed_geodesic_from_matrix(const BigInt& a, const BigInt& b, const BigInt& c,
                                               const BigInt& d);

/// Product of the parabolic generators L = [[1,0],[1,1]], R = [[1,1],[0,1]]
/// spelled by the word (letters 'L' and 'R').
ClosedGeodesicSpec closed_geodesic_from_word(std::string_view word);

/// Segment multiset of one primitive period of the axis cutting sequence,
/// realizing the distribution of intersection lengths of the discrete current
/// with the tessellation: mass 1/l per segment, l the primitive length.
struct DiscreteCurrentDistribution {
    std::vector<double> lengths;
    double period_length = 0.0; // primitive translation length
    int multiplicity = 1;       // input trace length = multiplicity * primitive
    double dirac_weight() const { return 1.0 / period_length; }
    double total_mass() const { return double(lengths.size()) / period_length; }
};

/// Trace the axis for exactly one primitive period. The period is detected
/// combinatorially: the walk conjugates the matrix into each frame and stops
/// at the first return, so the segment count is exact. start_offset skips
/// that many crossings first (any crossing yields the same multiset up to
/// cyclic shift).
DiscreteCurrentDistribution periodic_trace(const ClosedGeodesicSpec& spec, int start_offset = 0);

} // namespace lamina
