#include "sptl/specfun.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "sptl/arith.hpp"
#include "sptl/errors.hpp"
#include "sptl/kahan.hpp"

namespace sptl {

namespace {

using lcplx = std::complex<long double>;

// B_2, B_4, ..., B_26
constexpr std::array<double, 13> bern = {
    1.0 / 6,          -1.0 / 30,         1.0 / 42,          -1.0 / 30,        5.0 / 66,
    -691.0 / 2730,    7.0 / 6,           -3617.0 / 510,     43867.0 / 798,    -174611.0 / 330,
    854513.0 / 138,   -236364091.0 / 2730, 8553103.0 / 6};

bool near_nonpos_int(cplx s, double eps)
{
    double r = std::round(s.real());
    return r <= 0 && std::abs(s - r) < eps;
}

cplx lgamma_stirling(cplx z)
{
    // z with Re z >= 1/2
    cplx shift = 0;
    while (std::abs(z) < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    cplx z2 = 1.0 / (z * z), zp = 1.0 / z;
    cplx ser = 0;
    for (int j = 1; j <= 10; ++j) {
        ser += bern[j - 1] / (2.0 * j * (2.0 * j - 1)) * zp;
        zp *= z2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * pi) + ser - shift;
}

} // namespace

cplx sinpi(cplx z)
{
    double n = std::round(z.real());
    cplx w = z - n;
    cplx v = std::sin(pi * w);
    return std::fmod(n, 2.0) == 0 ? v : -v;
}

cplx cospi(cplx z)
{
    double n = std::round(z.real());
    cplx w = z - n;
    cplx v = std::cos(pi * w);
    return std::fmod(n, 2.0) == 0 ? v : -v;
}

cplx expm1(cplx z)
{
    if (std::abs(z) > 0.1) return std::exp(z) - 1.0;
    cplx term = z, sum = z;
    for (int j = 2; j < 20; ++j) {
        term *= z / double(j);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

cplx lgamma(cplx s)
{
    if (near_nonpos_int(s, 1e-12)) throw PoleError("Gamma at nonpositive integer");
    if (s.real() >= 0.5) return lgamma_stirling(s);
    return std::log(pi) - std::log(sinpi(s)) - lgamma_stirling(1.0 - s);
}

cplx gamma(cplx s)
{
    if (near_nonpos_int(s, 1e-12)) throw PoleError("Gamma at nonpositive integer");
    if (s.real() >= 0.5) return std::exp(lgamma_stirling(s));
    return pi / (sinpi(s) * std::exp(lgamma_stirling(1.0 - s)));
}

cplx rgamma(cplx s)
{
    if (s.real() >= 0.5) return std::exp(-lgamma_stirling(s));
    return sinpi(s) * std::exp(lgamma_stirling(1.0 - s)) / pi;
}

cplx gamma_R(cplx s) { return std::pow(pi, -s / 2.0) * gamma(s / 2.0); }

cplx gamma_C(cplx s) { return 2.0 * std::pow(2 * pi, -s) * gamma(s); }

cplx digamma(cplx s)
{
    if (near_nonpos_int(s, 1e-12)) throw PoleError("digamma at nonpositive integer");
    if (s.real() < 0.5) return digamma(1.0 - s) - pi * cospi(s) / sinpi(s);
    cplx z = s, acc = 0;
    while (std::abs(z) < 15.0) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    cplx z2 = 1.0 / (z * z), zp = z2;
    cplx ser = 0;
    for (int j = 1; j <= 10; ++j) {
        ser += bern[j - 1] / (2.0 * j) * zp;
        zp *= z2;
    }
    return acc + std::log(z) - 0.5 / z - ser;
}

namespace {

struct series_result {
    lcplx sum;
    long double max_term;
};

series_result f21_series(lcplx a, lcplx b, lcplx c, long double x)
{
    lcplx term = 1, sum = 1;
    long double mx = 1;
    int small = 0;
    for (int n = 0; n < 200000; ++n) {
        lcplx ln = (long double)n;
        term *= (a + ln) * (b + ln) / ((c + ln) * (ln + 1.0L)) * x;
        sum += term;
        long double at = std::abs(term);
        mx = std::max(mx, at);
        if (at == 0) return {sum, mx};
        if (at < 1e-19L * std::abs(sum)) {
            if (++small >= 3) return {sum, mx};
        } else {
            small = 0;
        }
    }
    throw ConvergenceError("hypergeometric series did not converge");
}

} // namespace

cplx hyp2f1(cplx a, cplx b, cplx c, double x)
{
    if (near_nonpos_int(c, 1e-12)) throw PoleError("2F1 with c a nonpositive integer");
    if (x >= 1.0) throw DomainError("2F1 argument must be < 1");
    if (x == 0.0) return 1.0;
    lcplx la(a.real(), a.imag()), lb(b.real(), b.imag()), lc(c.real(), c.imag());
    if (x > 0) {
        auto r = f21_series(la, lb, lc, x);
        return {double(r.sum.real()), double(r.sum.imag())};
    }
    long double w = (long double)x / ((long double)x - 1.0L);
    long double omx = 1.0L - x;
    // both Pfaff forms; keep the one with less cancellation
    auto r1 = f21_series(la, lc - lb, lc, w);
    auto r2 = f21_series(lc - la, lb, lc, w);
    double q1 = double(r1.max_term / std::abs(r1.sum));
    double q2 = double(r2.max_term / std::abs(r2.sum));
    lcplx v = q1 <= q2 ? std::pow(lcplx(omx), -la) * r1.sum : std::pow(lcplx(omx), -lb) * r2.sum;
    return {double(v.real()), double(v.imag())};
}

cplx hyp2f1_regularized(cplx a, cplx b, cplx c, double x)
{
    if (!near_nonpos_int(c, 1e-12)) return rgamma(c) * hyp2f1(a, b, c, x);
    int n = -int(std::round(c.real()));
    // (a)_{n+1} (b)_{n+1} / (n+1)! x^{n+1} 2F1(a+n+1, b+n+1; n+2; x)
    cplx pre = 1;
    for (int j = 0; j <= n; ++j) pre *= (a + double(j)) * (b + double(j)) / double(j + 1) * x;
    return pre * hyp2f1(a + double(n + 1), b + double(n + 1), double(n + 2), x);
}

cplx legendre_P(cplx nu, cplx mu, double x)
{
    if (!(x > 1.0)) throw DomainError("legendre_P needs x > 1");
    // nu and -nu-1 give the same function; fix one representative
    if (nu.real() < -0.5 || (nu.real() == -0.5 && nu.imag() < 0)) nu = -nu - 1.0;
    cplx pre = std::exp(mu / 2.0 * std::log((x + 1) / (x - 1)));
    return pre * hyp2f1_regularized(-nu, nu + 1.0, 1.0 - mu, (1 - x) / 2);
}

void hankel_PQ(int n, double x, double &P, double &Q)
{
    double mu = 4.0 * n * n;
    double term = 1, last = 1e300;
    P = 0;
    Q = 0;
    for (int j = 0; j < 400; ++j) {
        if (j > 0) term *= (mu - (2.0 * j - 1) * (2.0 * j - 1)) / (8.0 * j * x);
        double at = std::fabs(term);
        if (j > n && at > last) break;
        last = at;
        int r = j % 4;
        if (r == 0) P += term;
        else if (r == 1) Q += term;
        else if (r == 2) P -= term;
        else Q -= term;
        if (at < 1e-18) break;
    }
}

namespace {

double bessel_series(int n, double x)
{
    long double h = x / 2.0L, h2 = h * h;
    long double term = std::exp(n * std::log(h) - std::lgamma((long double)n + 1));
    long double sum = term;
    for (int j = 1; j < 500; ++j) {
        term *= -h2 / ((long double)j * (n + j));
        sum += term;
        if (std::fabs(term) < 1e-21L * std::fabs(sum)) break;
    }
    return double(sum);
}

double bessel_hankel(int n, double x)
{
    double P, Q;
    hankel_PQ(n, x, P, Q);
    double chi = x - (n / 2.0 + 0.25) * pi;
    return std::sqrt(2 / (pi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
}

double bessel_trapezoid(int n, double x)
{
    int M = int(std::ceil(x + n)) + 64;
    kahan<double> acc;
    for (int j = 0; j < M; ++j) {
        double tau = 2 * pi * j / M;
        acc += std::cos(n * tau - x * std::sin(tau));
    }
    return acc.value() / M;
}

} // namespace

double bessel_J(int order, double x)
{
    if (order < 0 || order > 64) throw DomainError("bessel_J order outside [0,64]");
    if (!(x >= 0) || x > 1e4) throw DomainError("bessel_J argument outside [0,1e4]");
    if (x == 0) return order == 0 ? 1.0 : 0.0;
    if (x <= 12 || x <= order) return bessel_series(order, x);
    if (x >= std::max(40.0, 2.0 * order + 10)) return bessel_hankel(order, x);
    return bessel_trapezoid(order, x);
}

namespace {

// (e^x - 1) / x
cplx expm1_over(cplx x)
{
    if (std::abs(x) < 1e-4) return 1.0 + x / 2.0 * (1.0 + x / 3.0 * (1.0 + x / 4.0));
    return (std::exp(x) - 1.0) / x;
}

// zeta(s, a) - 1/(s - 1), entire in s
cplx hurwitz_regular(cplx s, double a, int n, int m)
{
    if (!(a > 0 && a <= 1)) throw DomainError("hurwitz_zeta needs a in (0,1]");
    if (m > int(bern.size())) throw DomainError("too many Bernoulli terms");
    kahan<cplx> acc;
    for (int j = 0; j < n; ++j) acc += std::exp(-s * std::log(j + a));
    double N = n + a;
    double lN = std::log(N);
    // (N^{1-s} - 1)/(s - 1)
    acc += -lN * expm1_over((1.0 - s) * lN);
    acc += 0.5 * std::exp(-s * lN);
    // B_{2j}/(2j)! (s)_{2j-1} N^{-s-2j+1}
    cplx poch = s;
    cplx pw = std::exp(-(s + 1.0) * lN);
    double fact = 2;
    for (int j = 1; j <= m; ++j) {
        acc += bern[j - 1] / fact * poch * pw;
        poch *= (s + double(2 * j - 1)) * (s + double(2 * j));
        pw /= N * N;
        fact *= (2.0 * j + 1) * (2.0 * j + 2);
    }
    return acc.value();
}

} // namespace

cplx hurwitz_zeta(cplx s, double a, int n, int m)
{
    if (std::abs(s - 1.0) < 1e-14) throw PoleError("zeta at s=1");
    return hurwitz_regular(s, a, n, m) + 1.0 / (s - 1.0);
}

cplx riemann_zeta(cplx s)
{
    if (std::abs(s - 1.0) < 1e-14) throw PoleError("zeta at s=1");
    if (s.real() >= 0) return hurwitz_zeta(s, 1.0);
    // functional equation
    return std::pow(2.0, s) * std::pow(pi, s - 1.0) * sinpi(s / 2.0) * gamma(1.0 - s) *
           hurwitz_zeta(1.0 - s, 1.0);
}

cplx dirichlet_L(cplx s, long D)
{
    if (D == 1) return riemann_zeta(s);
    if (!is_fundamental(D)) throw DomainError("dirichlet_L needs a fundamental discriminant");
    long q = std::labs(D);
    if (s.real() < 0) {
        double delta = D < 0 ? 1 : 0;
        return std::pow(q / pi, 0.5 - s) * gamma((1.0 - s + delta) / 2.0) * rgamma((s + delta) / 2.0) *
               dirichlet_L(1.0 - s, D);
    }
    kahan<cplx> acc;
    for (long a = 1; a <= q; ++a) {
        int c = kronecker(D, a);
        if (c == 0) continue;
        acc += double(c) * hurwitz_regular(s, double(a) / q, 30, 12);
    }
    return std::exp(-s * std::log(double(q))) * acc.value();
}

} // namespace sptl
