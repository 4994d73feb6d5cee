#include "lamina/sampling.hpp"

#include "lamina/detail/chords.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace lamina {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

bool inside_standard_triangle(const PointH2& p) {
    if (!(p.y > 0.0)) return false;
    if (!(p.x > 0.0 && p.x < 1.0)) return false;
    const double dx = p.x - 0.5;
    return dx * dx + p.y * p.y > 0.25;
}

// Arcsine-distributed x on (0,1) as cos^2 of a uniform angle, drawn with the
// unit-circle rejection trick (no libm in the transform).
double arcsine_variate(RandomStream& s) {
    for (;;) {
        const double a = 2.0 * s.uniform() - 1.0;
        const double b = 2.0 * s.uniform() - 1.0;
        const double n = a * a + b * b;
        if (n > 1.0 || n == 0.0) continue;
        const double x = (a * a) / n;
        if (x > 0.0 && x < 1.0) return x;
    }
}

} // namespace

UnitTangent sample_tangent_in_triangle(RandomStream& s) {
    const double x = arcsine_variate(s);
    const double c = std::sqrt(x - x * x); // height of the bottom edge at x
    double u;
    do {
        u = s.uniform();
    } while (u == 0.0); // keep y strictly above the edge and finite
    const double y = c / u;
    const double theta = kTwoPi * s.uniform();
    return UnitTangent{PointH2{x, y}, theta};
}

double chord_of_tangent(const UnitTangent& v) {
    if (!inside_standard_triangle(v.base))
        throw std::invalid_argument("chord_of_tangent: base point outside the standard triangle");
    return chord_length_standard(geodesic_from_tangent(v));
}

double sample_chord_of_random_tangent(RandomStream& s, ChordSampleDiagnostics* diag) {
    for (;;) {
        const double chord = chord_of_tangent(sample_tangent_in_triangle(s));
        if (std::isfinite(chord) && chord > 0.0) return chord;
        if (diag) ++diag->vertex_rejections;
    }
}

double window_corner_epsilon(double a) {
    if (!(a > 0.0)) throw std::domain_error("window_corner_epsilon: a must be positive");
    return std::tanh(a); // (e^{2a}-1)/(e^{2a}+1)
}

LiouvilleWindowSampler::LiouvilleWindowSampler(double a, double b) : a_(a), b_(b) {
    if (!(a > 0.0) || !(a < b) || std::isinf(b))
        throw std::domain_error("LiouvilleWindowSampler: need 0 < a < b < inf");

    const double eps = window_corner_epsilon(a);
    const double u_lo = 1.0 - std::exp(2.0 * b);
    const double v_hi = 1.0 - std::exp(-2.0 * b);
    // Anything accepted satisfies v - u >= e^{-2b} (e^{2a} - 1).
    const double global_sep = std::exp(-2.0 * b) * std::expm1(2.0 * a);

    // The acceptance region avoids the corner square (-eps,0] x [0,eps), so
    // the box splits into three cells that each stay off the diagonal.
    std::deque<Cell> work;
    work.push_back(Cell{u_lo, -eps, eps, v_hi, 0.0});
    work.push_back(Cell{-eps, 0.0, eps, v_hi, 0.0});
    work.push_back(Cell{u_lo, -eps, 0.0, eps, 0.0});

    // Refine until each cell's extent is comparable to its distance from the
    // diagonal; then the constant bound overshoots the weight by at most ~4x,
    // keeping the overall acceptance rate high.
    const std::size_t max_cells = 4096;
    while (!work.empty()) {
        Cell cell = work.front();
        work.pop_front();
        const double du = cell.u1 - cell.u0;
        const double dv = cell.v1 - cell.v0;
        if (du <= 0.0 || dv <= 0.0) continue;
        const double sep = std::max(cell.v0 - cell.u1, global_sep);
        cell.bound = 1.0 / (sep * sep);
        const bool oversized = std::max(du, dv) > 0.5 * sep;
        const bool worth_splitting = du * dv * cell.bound > 1e-4;
        if (oversized && worth_splitting && cells_.size() + work.size() < max_cells) {
            if (du >= dv) {
                const double mid = 0.5 * (cell.u0 + cell.u1);
                work.push_back(Cell{cell.u0, mid, cell.v0, cell.v1, 0.0});
                work.push_back(Cell{mid, cell.u1, cell.v0, cell.v1, 0.0});
            } else {
                const double mid = 0.5 * (cell.v0 + cell.v1);
                work.push_back(Cell{cell.u0, cell.u1, cell.v0, mid, 0.0});
                work.push_back(Cell{cell.u0, cell.u1, mid, cell.v1, 0.0});
            }
            continue;
        }
        cells_.push_back(cell);
    }

    cum_.reserve(cells_.size());
    for (const Cell& cell : cells_) {
        total_ += (cell.u1 - cell.u0) * (cell.v1 - cell.v0) * cell.bound;
        cum_.push_back(total_);
    }
}

bool LiouvilleWindowSampler::propose(RandomStream& s, double& u, double& v,
                                     double& weight_bound) const {
    const double pick = s.uniform() * total_;
    const std::size_t idx =
        std::lower_bound(cum_.begin(), cum_.end(), pick) - cum_.begin();
    const Cell& cell = cells_[std::min(idx, cells_.size() - 1)];
    u = s.uniform(cell.u0, cell.u1);
    v = s.uniform(cell.v0, cell.v1);
    weight_bound = cell.bound;
    if (!(u < 0.0) || !(v > 0.0) || v >= 1.0) return false;
    const double chord = detail::len12(u, v);
    if (chord < a_ || chord > b_) return false;
    const double d = v - u;
    return s.uniform() * weight_bound * (d * d) < 1.0;
}

LiouvilleWindowSample LiouvilleWindowSampler::sample(Sector sector, RandomStream& s) const {
    double u, v, bound;
    while (!propose(s, u, v, bound)) {
    }
    const double chord = detail::len12(u, v);
    Geodesic g{BoundaryPoint::finite(u), BoundaryPoint::finite(v)};
    if (!(sector == Sector{1, 2})) g = self_map_for_sector(sector)(g);
    return LiouvilleWindowSample{g, sector, chord};
}

LiouvilleWindowSampler::MassEstimate LiouvilleWindowSampler::estimate_sector_mass(
    Sector sector, std::uint64_t proposals, RandomStream& s) const {
    const BoundarySelfMap& map = self_map_for_sector(sector);
    MassEstimate est;
    est.proposals = proposals;
    for (std::uint64_t k = 0; k < proposals; ++k) {
        const double pick = s.uniform() * total_;
        const std::size_t idx =
            std::lower_bound(cum_.begin(), cum_.end(), pick) - cum_.begin();
        const Cell& cell = cells_[std::min(idx, cells_.size() - 1)];
        const double u = s.uniform(cell.u0, cell.u1);
        const double v = s.uniform(cell.v0, cell.v1);
        if (!(u < 0.0) || !(v > 0.0) || v >= 1.0) continue;
        // Evaluate everything in sector coordinates: per-sector chord formula
        // plus the change-of-variables factor of the transporting self-map.
        const Geodesic g = map(Geodesic{BoundaryPoint::finite(u), BoundaryPoint::finite(v)});
        const double chord = chord_length_standard(g);
        if (chord < a_ || chord > b_) continue;
        const double uu = g.p.value, vv = g.q.value;
        const double weight =
            map.derivative_mag(u) * map.derivative_mag(v) / ((vv - uu) * (vv - uu));
        if (s.uniform() * cell.bound < weight) ++est.accepted;
    }
    est.mass = total_ * double(est.accepted) / double(proposals);
    return est;
}

LiouvilleWindowSample sample_liouville_window(double a, double b, Sector sector, RandomStream& s) {
    thread_local double cached_a = -1.0, cached_b = -1.0;
    thread_local LiouvilleWindowSampler* cached = nullptr;
    if (!cached || cached_a != a || cached_b != b) {
        delete cached;
        cached = new LiouvilleWindowSampler(a, b);
        cached_a = a;
        cached_b = b;
    }
    return cached->sample(sector, s);
}

} // namespace lamina
