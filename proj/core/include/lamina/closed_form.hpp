#pragma once

#include <functional>

namespace lamina {

/// li_n(x) = sum_{k>=1} x^k / k^n on [0,1], so li_0(x) = x/(1-x) and
/// li_1(x) = -ln(1-x). Orders n >= 2 converge at x = 1 to zeta(n).
double polylog(int n, double x);

/// Riemann zeta at integer n >= 2, via the accelerated alternating
/// (eta-function) series.
double zeta_int(int n);

/// Antiderivative of x^n / sinh^2 x (n >= 2), normalized so F(x) -> 0 as
/// x -> inf:
///   F(x) = - sum_{k=0}^{n} n!/(k! 2^(n-k-1)) x^k li_{n-k}(e^{-2x})
/// hence F(inf) - F(0+) = n!/2^(n-1) zeta(n).
double antiderivative_F(int n, double x);

/// n!/2^(n-1) zeta(n), the value of the integral of x^n / sinh^2 x over
/// (0, inf), for n >= 2.
double integral_xn_over_sinh2(int n);

/// The three closed-form length distributions:
///   M  : density 6x / (pi^2 sinh^2 x)   (infinite total mass)
///   MT : density 6x / sinh^2 x          (single-triangle Liouville pushforward)
///   P  : density 6x^2 / (pi^2 sinh^2 x) (probability measure)
enum class DistKind { M, MT, P };

double density(DistKind kind, double x);

/// For P: the upper-tail probability, with S(0+) = 1. For M and MT: the mass
/// of [x, inf), which is finite even though the total mass is not.
double survival(DistKind kind, double x);

/// CDF of P, 1 - survival(P, x); 0 at x <= 0 is not a valid input.
double cdf_P(double x);

/// E_P(x^n) = 3 (n+2)! / (2^n pi^2) zeta(n+2), n >= 0.
double moment_P(int n);

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // residual error estimate
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (7-15) quadrature. Pass b = +inf for a semi-infinite
/// range; it is folded to a finite one by the substitution t = e^{-x}.
/// The target is error <= tol * max(1, |integral|). Non-convergence is
/// reported through the flag and the residual estimate, not an exception.
QuadResult quad_oracle(const std::function<double(double)>& f, double a, double b,
                       double tol = 1e-12);

} // namespace lamina
