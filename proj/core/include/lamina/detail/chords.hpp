#pragma once

#include <cmath>

namespace lamina::detail {

// Chord-length formulas for the standard ideal triangle (vertices 0, 1, inf),
// templated on the floating type so the Farey walker can evaluate them in
// extended precision. Sector (i,j): backward endpoint in I_i, forward in I_j,
// with I1 = (-inf,0), I2 = (0,1), I3 = (1,inf).

template <class Real>
Real len12(Real u, Real v) {
    return Real(0.5) * std::log((Real(1) - u) / (Real(1) - v));
}

template <class Real>
Real len13(Real u, Real v) {
    return Real(0.5) * std::log(v * (u - Real(1)) / (u * (v - Real(1))));
}

// The remaining four sectors reduce to the two base formulas by composing with
// boundary self-maps of the triangle (z -> 1-z swaps I1 and I3 and fixes I2);
// endpoint swaps are free because chord length ignores orientation.
template <class Real>
Real sector_chord(int i, int j, Real u, Real v) {
    if (i == 1 && j == 2) return len12(u, v);
    if (i == 2 && j == 1) return len12(v, u);
    if (i == 1 && j == 3) return len13(u, v);
    if (i == 3 && j == 1) return len13(v, u);
    if (i == 2 && j == 3) return len12(Real(1) - v, Real(1) - u);
    return len12(Real(1) - u, Real(1) - v); // (3,2)
}

template <class Real>
struct OracleChord {
    bool ok = false;
    Real x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    Real length = 0;
};

template <class Real>
Real hyp_dist(Real x1, Real y1, Real x2, Real y2) {
    const Real dx = x1 - x2, dy = y1 - y2;
    return Real(2) * std::asinh(std::sqrt(dx * dx + dy * dy) / (Real(2) * std::sqrt(y1 * y2)));
}

// Geometric route independent of the closed form: a chord in sector (i,j)
// crosses exactly the edges facing I_i and I_j (edge 1: x=0, edge 2: the unit
// semicircle on [0,1], edge 3: x=1). Intersect the chord's semicircle with
// those two edges and measure the distance.
template <class Real>
OracleChord<Real> standard_chord_oracle(int i, int j, Real u, Real v) {
    OracleChord<Real> out;
    const Real c = (u + v) / 2;
    const Real r = std::fabs(v - u) / 2;
    Real xs[2], ys[2];
    const int edges[2] = {i, j};
    for (int t = 0; t < 2; ++t) {
        Real x, y2;
        switch (edges[t]) {
            case 1:
                x = 0;
                y2 = (r - c) * (r + c);
                break;
            case 3:
                x = 1;
                y2 = (r - (1 - c)) * (r + (1 - c));
                break;
            default: // bottom edge; 1-2c is nonzero whenever the sector touches I2
                x = (r * r - c * c) / (1 - 2 * c);
                y2 = Real(0.25) - (x - Real(0.5)) * (x - Real(0.5));
                break;
        }
        if (!(y2 > 0)) return out;
        xs[t] = x;
        ys[t] = std::sqrt(y2);
    }
    out.ok = true;
    out.x1 = xs[0];
    out.y1 = ys[0];
    out.x2 = xs[1];
    out.y2 = ys[1];
    out.length = hyp_dist(xs[0], ys[0], xs[1], ys[1]);
    return out;
}

} // namespace lamina::detail
