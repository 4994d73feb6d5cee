#pragma once

#include "lamina/halfplane.hpp"
#include "lamina/random.hpp"
#include "lamina/triangle.hpp"

#include <cstdint>
#include <vector>

namespace lamina {

/// Unit tangent vector with base point distributed by hyperbolic area on the
/// standard ideal triangle and direction uniform on [0, 2pi). The base is
/// drawn exactly: x follows the arcsine law on (0,1) (the area marginal),
/// then y = sqrt(x - x^2) / u with u uniform on (0,1].
UnitTangent sample_tangent_in_triangle(RandomStream& s);

/// Chord length of the geodesic through v in the standard triangle. The base
/// must lie inside the triangle. A vertical direction exits through the vertex
/// at infinity and yields +inf (a measure-zero case callers may reject).
double chord_of_tangent(const UnitTangent& v);

struct ChordSampleDiagnostics {
    std::uint64_t vertex_rejections = 0;
};

/// Tangent chord draw with the measure-zero vertex hits rejected and counted.
double sample_chord_of_random_tangent(RandomStream& s, ChordSampleDiagnostics* diag = nullptr);

struct LiouvilleWindowSample {
    Geodesic geodesic;
    Sector sector;
    double chord = 0.0; // chord length in [a, b] of the requesting window
};

/// The corner margin (e^{2a}-1)/(e^{2a}+1) = tanh a: when both endpoints are
/// within it of the shared vertex 0, the sector-(1,2) chord is shorter than a.
/// It certifies the corner exclusion that bounds the rejection weight.
double window_corner_epsilon(double a);

/// Rejection sampler for the Liouville measure restricted to
/// {g in I_i x I_j : L(g) in [a,b]}. Proposals are uniform on an envelope
/// partition of the compact sector-(1,2) box [1-e^{2b}, 0] x [0, 1-e^{-2b}]
/// minus its epsilon corner square, accepted with weight 1/(u-v)^2 and the
/// window indicator; other sectors receive the samples through the triangle's
/// boundary self-maps, which preserve the measure.
class LiouvilleWindowSampler {
public:
    LiouvilleWindowSampler(double a, double b);

    LiouvilleWindowSample sample(Sector sector, RandomStream& s) const;

    double window_lo() const { return a_; }
    double window_hi() const { return b_; }
    /// Total envelope mass (sum of cell area * weight bound); the acceptance
    /// rate times this is an unbiased estimate of the window's Liouville mass.
    double envelope_total() const { return total_; }

    struct MassEstimate {
        double mass = 0.0;
        std::uint64_t accepted = 0;
        std::uint64_t proposals = 0;
    };

    /// Acceptance-rate-corrected mass of the window in the given sector, with
    /// the chord and the density weight evaluated in sector coordinates (an
    /// independent route through the per-sector formulas and the self-map
    /// derivatives; all six sectors must agree).
    MassEstimate estimate_sector_mass(Sector sector, std::uint64_t proposals,
                                      RandomStream& s) const;

private:
    struct Cell {
        double u0, u1, v0, v1;
        double bound; // sup of 1/(v-u)^2 over the cell
    };

    bool propose(RandomStream& s, double& u, double& v, double& weight_bound) const;

    double a_, b_;
    std::vector<Cell> cells_;
    std::vector<double> cum_; // cumulative area*bound for cell selection
    double total_ = 0.0;
};

/// One-shot convenience wrapper around LiouvilleWindowSampler.
LiouvilleWindowSample sample_liouville_window(double a, double b, Sector sector, RandomStream& s);

} // namespace lamina
