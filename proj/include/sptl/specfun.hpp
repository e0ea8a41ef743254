#pragma once

#include <complex>
#include <numbers>

namespace sptl {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;

// sin(pi z), cos(pi z) with the real part reduced first
cplx sinpi(cplx z);
cplx cospi(cplx z);
cplx expm1(cplx z);

// A logarithm of Gamma; principal branch for Re s >= 1/2.
cplx lgamma(cplx s);
cplx gamma(cplx s);
// 1/Gamma, entire (zero at the poles of Gamma)
cplx rgamma(cplx s);
cplx gamma_R(cplx s);
cplx gamma_C(cplx s);
cplx digamma(cplx s);

// 2F1(a,b;c;x) for real x < 1. Negative x goes through a Pfaff transform.
cplx hyp2f1(cplx a, cplx b, cplx c, double x);
// 2F1 / Gamma(c), finite for c a nonpositive integer
cplx hyp2f1_regularized(cplx a, cplx b, cplx c, double x);

// Associated Legendre function of the first kind on (1, inf)
cplx legendre_P(cplx nu, cplx mu, double x);

double bessel_J(int order, double x);
// Hankel amplitudes: J_n(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi),
// chi = x - (n/2 + 1/4) pi. Accurate for x >= max(40, 2n+10).
void hankel_PQ(int n, double x, double &P, double &Q);

// Euler-Maclaurin with n explicit terms and m Bernoulli corrections
cplx hurwitz_zeta(cplx s, double a, int n = 30, int m = 12);
cplx riemann_zeta(cplx s);
// L(s, chi_D) for a fundamental discriminant D (D = 1 gives zeta)
cplx dirichlet_L(cplx s, long D);

} // namespace sptl
