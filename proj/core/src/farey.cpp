#include "lamina/farey.hpp"

#include "lamina/detail/chords.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace lamina {

namespace {

constexpr long double kInfL = std::numeric_limits<long double>::infinity();

// Endpoint codes in the renormalized frame: 1..3 intervals, negative codes for
// the frame vertices 0, 1, inf.
enum VertexCode { kVertex0 = -1, kVertex1 = -2, kVertexInf = -3 };

int code_of(long double x, double tol) {
    if (std::isinf(x) || std::fabs(x) >= 1.0 / tol) return kVertexInf;
    if (std::fabs(x) <= tol) return kVertex0;
    if (std::fabs(x - 1.0L) <= tol) return kVertex1;
    if (x < 0.0L) return 1;
    if (x < 1.0L) return 2;
    return 3;
}

int opposite_interval(int vertex_code) {
    switch (vertex_code) {
        case kVertex0: return 3;
        case kVertex1: return 1;
        default: return 2;
    }
}

// Frame step maps (standard triangle to the re-standardized neighbor across
// the edge facing interval k): k=1 is z+1, k=2 is z/(1-z), k=3 is z-1.
long double apply_step(int k, long double x) {
    if (std::isinf(x)) return k == 2 ? -1.0L : x;
    switch (k) {
        case 1: return x + 1.0L;
        case 2: return x / (1.0L - x);
        default: return x - 1.0L;
    }
}

FareyVertex comediant(const FareyVertex& a, const FareyVertex& b) {
    BigInt num = a.num - b.num;
    BigInt den = a.den - b.den;
    if (den < 0 || (den == 0 && num < 0)) {
        num = -num;
        den = -den;
    }
    return FareyVertex{std::move(num), std::move(den)};
}

// Third vertex of the triangle on the other side of edge {a, b}: the mediant
// or the comediant, whichever is not the current third vertex.
FareyVertex other_side(const FareyVertex& a, const FareyVertex& b, const FareyVertex& current) {
    FareyVertex m = mediant(a, b);
    if (m == current) return comediant(a, b);
    return m;
}

// Renormalized walk state: the geodesic expressed in the frame where the
// current tessellation triangle is (0, 1, inf). Stepping applies a small
// integer map to the endpoints; the exact vertex triple is carried alongside
// only when requested.
struct Walker {
    long double u, v;
    FareyTriangle tri = FareyTriangle::base();
    bool track = false;

    void step(int k) {
        u = apply_step(k, u);
        v = apply_step(k, v);
        if (!track) return;
        switch (k) {
            case 1: {
                FareyVertex w = other_side(tri.v0, tri.vinf, tri.v1);
                tri = FareyTriangle{std::move(w), tri.v0, tri.vinf};
                break;
            }
            case 2: {
                FareyVertex w = other_side(tri.v0, tri.v1, tri.vinf);
                tri = FareyTriangle{tri.v0, std::move(w), tri.v1};
                break;
            }
            default: {
                FareyVertex w = other_side(tri.v1, tri.vinf, tri.v0);
                tri = FareyTriangle{tri.v1, std::move(w), tri.vinf};
                break;
            }
        }
    }
};

long double endpoint_value(const BoundaryPoint& p) {
    return p.is_infinite() ? kInfL : (long double)p.value;
}

// Walk the frame down from the base triangle until the geodesic crosses it.
// Returns false when the geodesic terminates in a cusp before crossing
// anything (both endpoints at tessellation vertices is an error).
bool descend_to_crossing(Walker& w, double tol, const char* who) {
    for (std::uint64_t guard = 0; guard < 10'000'000; ++guard) {
        const int cu = code_of(w.u, tol);
        const int cv = code_of(w.v, tol);
        if (cu < 0 && cv < 0)
            throw std::invalid_argument(std::string(who) +
                                        ": degenerate start, geodesic runs between tessellation vertices");
        if (cu > 0 && cv > 0) {
            if (cu != cv) return true; // crossing
            w.step(cu);
            continue;
        }
        // One endpoint sits on a frame vertex.
        const int vertex = cu < 0 ? cu : cv;
        const int other = cu < 0 ? cv : cu;
        if (other == opposite_interval(vertex)) return true; // enters the interior
        w.step(other); // both endpoints on one side: move across that edge
    }
    throw std::runtime_error(std::string(who) + ": descent failed to terminate");
}

struct SegmentData {
    int sector_i, sector_j;
    long double length;
    long double oracle_length;
};

// Chord of the current frame's standard triangle, via the closed form and the
// independent geometric route.
SegmentData current_segment(const Walker& w, double tol) {
    SegmentData s;
    s.sector_i = code_of(w.u, tol);
    s.sector_j = code_of(w.v, tol);
    s.length = detail::sector_chord(s.sector_i, s.sector_j, w.u, w.v);
    const auto oracle = detail::standard_chord_oracle(s.sector_i, s.sector_j, w.u, w.v);
    s.oracle_length = oracle.ok ? oracle.length : s.length;
    return s;
}

ClosedGeodesicSpec spec_from_matrix(BigInt a, BigInt b, BigInt c, BigInt d);

struct IntMatrix {
    BigInt a, b, c, d;
};

// Conjugation by the frame step maps: psi M psi^{-1}.
IntMatrix conjugate_step(int k, const IntMatrix& m) {
    // psi_1 = [[1,1],[0,1]], psi_2 = [[1,0],[-1,1]], psi_3 = [[1,-1],[0,1]]
    BigInt pa, pb, pc, pd;
    switch (k) {
        case 1: pa = 1; pb = 1; pc = 0; pd = 1; break;
        case 2: pa = 1; pb = 0; pc = -1; pd = 1; break;
        default: pa = 1; pb = -1; pc = 0; pd = 1; break;
    }
    // psi * M
    const BigInt qa = pa * m.a + pb * m.c;
    const BigInt qb = pa * m.b + pb * m.d;
    const BigInt qc = pc * m.a + pd * m.c;
    const BigInt qd = pc * m.b + pd * m.d;
    // ... * psi^{-1}, where inverse of [[pa,pb],[pc,pd]] (det 1) is [[pd,-pb],[-pc,pa]]
    return IntMatrix{qa * pd - qb * pc, -qa * pb + qb * pa, qc * pd - qd * pc, -qc * pb + qd * pa};
}

// Fixed points of a hyperbolic integer matrix, repelling first. Computed
// fresh from the entries, so the walk never accumulates float drift.
void axis_endpoints(const IntMatrix& m, long double& repelling, long double& attracting) {
    // c x^2 + (d-a) x - b = 0; c != 0 for every hyperbolic integer matrix.
    const long double A = (long double)(m.a - m.d);
    const long double C = (long double)m.c;
    const long double B = (long double)m.b;
    const BigInt tr = m.a + m.d;
    const BigInt disc = tr * tr - 4;
    const long double S = sqrtl((long double)disc);
    // Root with no cancellation first; the other from the product -b/c.
    long double r1 = (A >= 0) ? (A + S) / (2 * C) : (A - S) / (2 * C);
    long double r2 = (B == 0 || r1 == 0) ? 0.0L : (-B / C) / r1;
    // Attracting fixed point has |c x + d| > 1.
    const long double m1 = fabsl(C * r1 + (long double)m.d);
    if (m1 > 1.0L) {
        attracting = r1;
        repelling = r2;
    } else {
        attracting = r2;
        repelling = r1;
    }
}

} // namespace

double FareyVertex::to_double() const {
    if (is_infinite()) return std::numeric_limits<double>::infinity();
    return (double)((long double)num.convert_to<long double>() / den.convert_to<long double>());
}

FareyVertex mediant(const FareyVertex& a, const FareyVertex& b) {
    return FareyVertex{a.num + b.num, a.den + b.den};
}

bool farey_neighbors(const FareyVertex& a, const FareyVertex& b) {
    const BigInt cross = a.num * b.den - a.den * b.num;
    return cross == 1 || cross == -1;
}

int compare(const FareyVertex& a, long double x) {
    if (a.is_infinite()) return (std::isinf(x) && x > 0) ? 0 : 1;
    if (std::isinf(x)) return x > 0 ? -1 : 1;
    // Exact comparison: peel the mantissa of x into a big integer 32 bits at a
    // time, then compare p * 2^k against q * mant in integers.
    const bool neg = x < 0;
    int e = 0;
    long double frac = frexpl(fabsl(x), &e); // |x| = frac * 2^e, frac in [0.5, 1)
    BigInt mant = 0;
    int shift = 0;
    while (frac != 0.0L && shift < 256) {
        frac = ldexpl(frac, 32);
        const long double ip = floorl(frac);
        mant <<= 32;
        mant += (long long)ip;
        frac -= ip;
        shift += 32;
    }
    if (neg) mant = -mant;
    const int e2 = e - shift; // x = mant * 2^{e2}
    BigInt lhs = a.num;
    BigInt rhs = a.den * mant;
    if (e2 >= 0)
        rhs <<= e2;
    else
        lhs <<= -e2;
    if (lhs == rhs) return 0;
    return lhs > rhs ? 1 : -1;
}

bool valid_farey_triangle(const FareyTriangle& t) {
    return farey_neighbors(t.v0, t.v1) && farey_neighbors(t.v1, t.vinf) &&
           farey_neighbors(t.v0, t.vinf);
}

FareyTriangle locate_start(const Geodesic& g) {
    Walker w{endpoint_value(g.p), endpoint_value(g.q)};
    w.track = true;
    descend_to_crossing(w, 1e-15, "locate_start");
    return w.tri;
}

namespace {

TraceResult run_trace(Walker w, const TraceOptions& opt, const std::function<bool(double)>* sink) {
    TraceResult out;
    if (!(opt.length_budget > 0.0)) throw std::invalid_argument("trace: length budget must be positive");

    for (;;) {
        const int cu = code_of(w.u, opt.cusp_tol);
        const int cv = code_of(w.v, opt.cusp_tol);
        if (cu < 0 || cv < 0) {
            // Forward (or degenerate backward) endpoint reached a cusp of the
            // current triangle; the remaining piece is not a finite segment.
            out.terminated_reason = TraceTermination::CuspExit;
            return out;
        }
        if (cu == cv) {
            // The walk left the crossing regime; only reachable through float
            // exhaustion in extreme fans. Treat like a cusp arrival.
            out.terminated_reason = TraceTermination::CuspExit;
            return out;
        }

        const SegmentData seg = current_segment(w, opt.cusp_tol);
        const double len = (double)seg.length;
        if (!(len > 0.0) || !std::isfinite(len)) {
            out.terminated_reason = TraceTermination::CuspExit;
            return out;
        }
        out.closed_form_total += len;
        out.total_param_length += (double)seg.oracle_length;
        ++out.segments;
        if (opt.record_lengths) out.lengths.push_back(len);
        if (opt.record_triangles) out.triangles.push_back(w.tri);
        if (sink && !(*sink)(len)) {
            out.terminated_reason = TraceTermination::LengthBudget;
            return out;
        }
        if (out.closed_form_total >= opt.length_budget) {
            out.terminated_reason = TraceTermination::LengthBudget;
            return out;
        }
        if (out.segments >= opt.step_budget) {
            out.terminated_reason = TraceTermination::StepBudget;
            return out;
        }
        w.step(cv);
    }
}

Walker walker_for(const Geodesic& g, const TraceOptions& opt) {
    Walker w{endpoint_value(g.p), endpoint_value(g.q)};
    w.track = opt.record_triangles;
    descend_to_crossing(w, opt.cusp_tol, "trace");
    return w;
}

} // namespace

TraceResult trace(const Geodesic& g, const TraceOptions& opt) {
    return run_trace(walker_for(g, opt), opt, nullptr);
}

TraceResult trace_visit(const Geodesic& g, const TraceOptions& opt,
                        const std::function<bool(double)>& sink) {
    return run_trace(walker_for(g, opt), opt, &sink);
}

TraceResult trace(const Geodesic& g, double length_budget, const FareyTriangle& start) {
    if (!valid_farey_triangle(start)) throw std::invalid_argument("trace: invalid start triangle");

    // Standardize the start triangle exactly: z -> (z-V0)(V1-Vinf) / ((z-Vinf)(V1-V0))
    // has rational coefficients; clear denominators to an integer matrix and
    // apply it to the endpoints in extended precision.
    const FareyVertex& p0 = start.v0;
    const FareyVertex& p1 = start.v1;
    const FareyVertex& pi = start.vinf;
    // a z + b over c z + d with BigInt entries.
    const BigInt A = p1.num * pi.den - p1.den * pi.num;
    const BigInt T = p1.num * p0.den - p1.den * p0.num;
    BigInt ma = A * p0.den;
    BigInt mb = -A * p0.num;
    BigInt mc = T * pi.den;
    BigInt md = -T * pi.num;
    // Determinant sign: flip via z -> 1-z when the stored order is negatively
    // oriented, so the frame keeps a positive orientation.
    const BigInt det = ma * md - mb * mc;
    if (det == 0) throw std::invalid_argument("trace: degenerate start triangle");
    FareyTriangle frame = start;
    if (det < 0) {
        ma = mc - ma;
        mb = md - mb;
        std::swap(frame.v0, frame.v1); // 0 and 1 preimages trade places
    }

    auto apply = [&](const BoundaryPoint& p) -> long double {
        if (p.is_infinite()) {
            if (mc == 0) return kInfL;
            return ma.convert_to<long double>() / mc.convert_to<long double>();
        }
        const long double x = p.value;
        const long double num = ma.convert_to<long double>() * x + mb.convert_to<long double>();
        const long double den = mc.convert_to<long double>() * x + md.convert_to<long double>();
        if (den == 0.0L) return kInfL;
        return num / den;
    };

    TraceOptions opt;
    opt.length_budget = length_budget;
    opt.record_lengths = true;
    opt.record_triangles = true;

    Walker w{apply(g.p), apply(g.q)};
    w.track = true;
    w.tri = frame;
    const int cu = code_of(w.u, opt.cusp_tol);
    const int cv = code_of(w.v, opt.cusp_tol);
    if (cu > 0 && cu == cv)
        throw std::invalid_argument("trace: geodesic does not cross the start triangle");
    return run_trace(std::move(w), opt, nullptr);
}

Geodesic ClosedGeodesicSpec::axis() const {
    return Geodesic{BoundaryPoint::finite((double)axis_repelling),
                    BoundaryPoint::finite((double)axis_attracting)};
}

namespace {

ClosedGeodesicSpec spec_from_matrix(BigInt a, BigInt b, BigInt c, BigInt d) {
    ClosedGeodesicSpec spec;
    const BigInt det = a * d - b * c;
    if (det != 1) throw std::invalid_argument("closed_geodesic_from_matrix: determinant must be 1");
    BigInt tr = a + d;
    if (tr < 0) tr = -tr;
    if (tr <= 2)
        throw std::domain_error("closed_geodesic_from_matrix: matrix is not hyperbolic (|trace| <= 2)");

    spec.a = a;
    spec.b = b;
    spec.c = c;
    spec.d = d;
    spec.trace = a + d;

    IntMatrix m{a, b, c, d};
    axis_endpoints(m, spec.axis_repelling, spec.axis_attracting);

    // length = 2 arccosh(|tr|/2) = 2 log((|tr| + sqrt(tr^2 - 4)) / 2)
    const long double t = tr.convert_to<long double>();
    const long double s = sqrtl((t - 2) * (t + 2));
    spec.length = (double)(2.0L * logl((t + s) / 2.0L));
    return spec;
}

} // namespace

ClosedGeodesicSpec closed_geodesic_from_matrix(const BigInt& a, const BigInt& b, const BigInt& c,
                                               const BigInt& d) {
    return spec_from_matrix(a, b, c, d);
}

ClosedGeodesicSpec closed_geodesic_from_word(std::string_view word) {
    BigInt a = 1, b = 0, c = 0, d = 1;
    for (const char ch : word) {
        if (ch == 'L' || ch == 'l') {
            // right-multiply by [[1,0],[1,1]]
            a += b;
            c += d;
        } else if (ch == 'R' || ch == 'r') {
            // right-multiply by [[1,1],[0,1]]
            b += a;
            d += c;
        } else {
            throw std::invalid_argument("closed_geodesic_from_word: letters must be L or R");
        }
    }
    return spec_from_matrix(a, b, c, d);
}

DiscreteCurrentDistribution periodic_trace(const ClosedGeodesicSpec& spec, int start_offset) {
    if (start_offset < 0) throw std::invalid_argument("periodic_trace: negative offset");

    IntMatrix m{spec.a, spec.b, spec.c, spec.d};
    if (spec.trace < 0) {
        m.a = -m.a;
        m.b = -m.b;
        m.c = -m.c;
        m.d = -m.d;
    }

    const double tol = 1e-15;
    long double u, v;
    auto refresh = [&] {
        axis_endpoints(m, u, v);
        if (code_of(u, tol) < 0 || code_of(v, tol) < 0)
            throw std::runtime_error("periodic_trace: axis endpoint collapsed onto a vertex");
    };

    // Descend from the base triangle to the first crossing, conjugating the
    // matrix into each frame; endpoints are recomputed from the integer
    // entries at every step.
    const std::uint64_t guard_max = 1'000'000;
    std::uint64_t guard = 0;
    refresh();
    for (;; ++guard) {
        if (guard > guard_max) throw std::runtime_error("periodic_trace: descent failed");
        const int cu = code_of(u, tol);
        const int cv = code_of(v, tol);
        if (cu != cv) break;
        m = conjugate_step(cv, m);
        refresh();
    }

    for (int skip = 0; skip < start_offset; ++skip) {
        m = conjugate_step(code_of(v, tol), m);
        refresh();
    }

    const IntMatrix m0 = m;
    DiscreteCurrentDistribution out;
    out.period_length = spec.length;

    for (guard = 0;; ++guard) {
        if (guard > guard_max) throw std::runtime_error("periodic_trace: period not found");
        const int cu = code_of(u, tol);
        const int cv = code_of(v, tol);
        out.lengths.push_back((double)detail::sector_chord(cu, cv, u, v));
        m = conjugate_step(cv, m);
        refresh();
        const bool back = (m.a == m0.a && m.b == m0.b && m.c == m0.c && m.d == m0.d) ||
                          (m.a == -m0.a && m.b == -m0.b && m.c == -m0.c && m.d == -m0.d);
        if (back) break;
    }

    // A power of a primitive element closes up after one primitive period.
    double sum = 0.0;
    for (const double l : out.lengths) sum += l;
    const int k = std::max(1, (int)std::lround(spec.length / sum));
    out.multiplicity = k;
    out.period_length = spec.length / k;
    return out;
}

} // namespace lamina
