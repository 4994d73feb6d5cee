#include "lamina/closed_form.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace lamina {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kPi2 = kPi * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Alternating-series acceleration (Chebyshev weights); error ~ (3+sqrt 8)^-N.
double eta_accelerated(int n, int terms) {
    double d = std::pow(3.0 + std::sqrt(8.0), terms);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0, c = -d, s = 0.0;
    for (int k = 0; k < terms; ++k) {
        c = b - c;
        s += c * std::pow(double(k + 1), double(-n));
        b = (k + terms) * (k - terms) * b / ((k + 0.5) * (k + 1.0));
    }
    return s / d;
}

double zeta_direct(int n) {
    double s = 1.0;
    for (int k = 2;; ++k) {
        const double t = std::pow(double(k), double(-n));
        s += t;
        if (t < 1e-18 * s) break;
    }
    return s;
}

// li_1 and li_0 of e^{-2x}, in forms that keep full relative precision both
// for small x (1 - y cancellation) and large x (1 - y rounding at 1).
double li1_exp(double x) {
    const double y = std::exp(-2.0 * x);
    if (y > 0.5) return -std::log(-std::expm1(-2.0 * x));
    // -ln(1-y) by its series; relative accuracy survives y -> 0
    double sum = 0.0, yk = y;
    for (int k = 1;; ++k) {
        const double term = yk / k;
        sum += term;
        if (term <= 1e-17 * sum) break;
        yk *= y;
    }
    return sum;
}
double li0_exp(double x) { return 1.0 / std::expm1(2.0 * x); }

// F_n(x) for n >= 1 (n = 1 is used internally by the M survival).
double f_value(int n, double x) {
    const double y = std::exp(-2.0 * x);
    if (y == 0.0) return 0.0;
    // c_0 = n!/2^(n-1), c_{k+1} = 2 c_k / (k+1)
    double coeff = 2.0;
    for (int m = 2; m <= n; ++m) coeff *= m;
    coeff = std::ldexp(coeff, -n); // n! / 2^(n-1)
    double xk = 1.0;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        const int order = n - k;
        double li;
        if (order >= 2)
            li = polylog(order, y);
        else if (order == 1)
            li = li1_exp(x);
        else
            li = li0_exp(x);
        sum += coeff * xk * li;
        coeff *= 2.0 / (k + 1);
        xk *= x;
    }
    return -sum;
}

// x^2 / sinh^2 x as a series for small x, avoiding the 1/x^2 blowup path.
double x2_csch2_series(double x) {
    const double x2 = x * x;
    return 1.0 + x2 * (-1.0 / 3.0 + x2 * (1.0 / 15.0 + x2 * (-2.0 / 189.0 + x2 / 675.0)));
}

// integral of t^2 / sinh^2 t over (0, x), small x only.
double p_mass_below_series(double x) {
    const double x2 = x * x;
    return x * (1.0 + x2 * (-1.0 / 9.0 + x2 * (1.0 / 75.0 + x2 * (-2.0 / 1323.0 + x2 / 6075.0))));
}

double density_p(double x) {
    if (x < 1e-4) return 6.0 / kPi2 * x2_csch2_series(x);
    if (x > 350.0) {
        const double e = std::exp(-x);
        const double s = 2.0 / ((1.0 / e) * (1.0 - e * e)); // 1/sinh x without overflow
        return 6.0 / kPi2 * x * x * s * s;
    }
    const double s = std::sinh(x);
    return 6.0 / kPi2 * x * x / (s * s);
}

// 15-point Kronrod rule with embedded 7-point Gauss (QUADPACK dqk15 nodes).
const double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double integral;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double f1 = f(c - h * kXgk[j]);
        const double f2 = f(c + h * kXgk[j]);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
    }
    return Panel{a, b, resk * h, std::fabs((resk - resg) * h)};
}

QuadResult quad_finite(const std::function<double(double)>& f, double a, double b, double tol) {
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<Panel> panels;
    // Seed with a few panels so structure away from the worst spot is seen.
    double total = 0.0, err = 0.0;
    const int seed_panels = 8;
    for (int i = 0; i < seed_panels; ++i) {
        const double lo = a + (b - a) * i / seed_panels;
        const double hi = a + (b - a) * (i + 1) / seed_panels;
        Panel p = gk15(f, lo, hi);
        total += p.integral;
        err += p.error;
        panels.push(p);
    }
    const int max_panels = 4000;
    int n = seed_panels;
    while (err > tol * std::max(1.0, std::fabs(total)) && n < max_panels) {
        Panel worst = panels.top();
        panels.pop();
        total -= worst.integral;
        err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        for (const Panel& half : {gk15(f, worst.a, mid), gk15(f, mid, worst.b)}) {
            total += half.integral;
            err += half.error;
            panels.push(half);
        }
        ++n;
    }
    out.value = total;
    out.error = err;
    out.converged = err <= tol * std::max(1.0, std::fabs(total));
    return out;
}

} // namespace

double polylog(int n, double x) {
    if (n < 0) throw std::domain_error("polylog: order must be nonnegative");
    if (x < 0.0 || x > 1.0) throw std::domain_error("polylog: argument must lie in [0,1]");
    if (x == 1.0) {
        if (n <= 1) throw std::domain_error("polylog: series diverges at x = 1 for n <= 1");
        return zeta_int(n);
    }
    if (n == 0) return x / (1.0 - x);
    if (n == 1) return -std::log1p(-x);
    if (x == 0.0) return 0.0;
    double sum = 0.0;
    double xk = x;
    for (std::uint64_t k = 1;; ++k) {
        const double term = xk / std::pow(double(k), double(n));
        sum += term;
        // geometric tail bound: remainder <= term * x / (1-x)
        if (term * x <= 1e-17 * sum * (1.0 - x)) break;
        xk *= x;
    }
    return sum;
}

double zeta_int(int n) {
    if (n < 2) throw std::domain_error("zeta_int: n must be >= 2");
    if (n >= 30) return zeta_direct(n);
    static const std::array<double, 30> table = [] {
        std::array<double, 30> t{};
        for (int m = 2; m < 30; ++m) t[m] = eta_accelerated(m, 44) / (1.0 - std::ldexp(1.0, 1 - m));
        return t;
    }();
    return table[n];
}

double antiderivative_F(int n, double x) {
    if (n < 2 || n > 170) throw std::domain_error("antiderivative_F: n must be in [2, 170]");
    if (!(x > 0.0)) throw std::domain_error("antiderivative_F: x must be positive");
    return f_value(n, x);
}

double integral_xn_over_sinh2(int n) {
    if (n < 2 || n > 170) throw std::domain_error("integral_xn_over_sinh2: n must be in [2, 170]");
    double coeff = 2.0;
    for (int m = 2; m <= n; ++m) coeff *= m;
    return std::ldexp(coeff, -n) * zeta_int(n);
}

double density(DistKind kind, double x) {
    if (!(x > 0.0)) throw std::domain_error("density: x must be positive");
    const double p = density_p(x);
    switch (kind) {
        case DistKind::P: return p;
        case DistKind::M: return p / x;
        case DistKind::MT: return kPi2 * p / x;
    }
    return 0.0;
}

double survival(DistKind kind, double x) {
    if (!(x > 0.0)) throw std::domain_error("survival: x must be positive");
    if (kind == DistKind::P) {
        if (x < 0.05) return 1.0 - 6.0 / kPi2 * p_mass_below_series(x);
        return -6.0 / kPi2 * f_value(2, x);
    }
    const double tail1 = li1_exp(x) + 2.0 * x * li0_exp(x); // integral of t/sinh^2 t over [x, inf)
    return kind == DistKind::M ? 6.0 / kPi2 * tail1 : 6.0 * tail1;
}

double cdf_P(double x) { return 1.0 - survival(DistKind::P, x); }

double moment_P(int n) {
    if (n < 0 || n > 168) throw std::domain_error("moment_P: n must be in [0, 168]");
    double fact = 1.0; // (n+2)!
    for (int m = 2; m <= n + 2; ++m) fact *= m;
    return 3.0 * fact * zeta_int(n + 2) / (std::ldexp(1.0, n) * kPi2);
}

QuadResult quad_oracle(const std::function<double(double)>& f, double a, double b, double tol) {
    if (std::isinf(b)) {
        // t = e^{-x} folds [a, inf) onto (0, e^{-a}]; Kronrod nodes are
        // interior, so the t = 0 endpoint is never evaluated.
        auto g = [&f](double t) { return f(-std::log(t)) / t; };
        return quad_finite(g, 0.0, std::exp(-a), tol);
    }
    return quad_finite(f, a, b, tol);
}

} // namespace lamina
