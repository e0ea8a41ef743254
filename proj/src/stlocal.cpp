#include "sptl/stlocal.hpp"

#include <cmath>

#include "sptl/arith.hpp"
#include "sptl/errors.hpp"
#include "sptl/kahan.hpp"
#include "sptl/zagier.hpp"

namespace sptl {

double chebyshev_X(int n, double x)
{
    if (n < 0) throw DomainError("Chebyshev degree must be >= 0");
    double a = 1, b = x;
    if (n == 0) return a;
    for (int j = 1; j < n; ++j) {
        double c = x * b - a;
        a = b;
        b = c;
    }
    return b;
}

cplx chebyshev_X(int n, cplx x)
{
    if (n < 0) throw DomainError("Chebyshev degree must be >= 0");
    cplx a = 1, b = x;
    if (n == 0) return a;
    for (int j = 1; j < n; ++j) {
        cplx c = x * b - a;
        a = b;
        b = c;
    }
    return b;
}

namespace {

void check_spec(const ChebyshevSpec &c)
{
    if (c.p < 2) throw DomainError("p must be a prime");
    if (c.n < 0 || c.n > 64) throw DomainError("degree outside [0, 64]");
    if (std::fabs(c.z) > 1) throw DomainError("|z| must be <= 1");
}

} // namespace

cplx upsilon_closed(long p, int n, cplx z)
{
    if (n % 2) return 0.0;
    return -std::exp(-double(n) * (z + 1.0) / 4.0 * std::log(double(p)));
}

double upsilon_closed(const ChebyshevSpec &c)
{
    check_spec(c);
    return upsilon_closed(c.p, c.n, c.z).real();
}

double upsilon_integral(const ChebyshevSpec &c, double tol)
{
    check_spec(c);
    // x = 2 cos(theta); the integrand is smooth and even in theta, so the
    // midpoint rule on [0, pi] converges geometrically
    double q = std::pow(double(c.p), (c.z + 1) / 4);
    double g = (q - 1 / q) * (q - 1 / q);
    auto F = [&](double th) {
        double s2 = 4 * std::sin(th) * std::sin(th);
        return (1 + q * q) * s2 / (g + s2) * chebyshev_X(c.n, 2 * std::cos(th));
    };
    double prev = 0;
    for (int M = 16; M <= (1 << 20); M *= 2) {
        kahan<double> acc;
        for (int j = 0; j < M; ++j) acc += F(pi * (j + 0.5) / M);
        double cur = -acc.value() * (pi / M) / (2 * pi);
        if (M > 16 && std::fabs(cur - prev) <= tol * std::max(1.0, std::fabs(cur))) return cur;
        prev = cur;
    }
    throw ConvergenceError("upsilon quadrature did not settle");
}

double plancherel_density(long p, double z, double x)
{
    if (!(std::fabs(x) < 2)) throw DomainError("density lives on (-2, 2)");
    double q = std::pow(double(p), (z + 1) / 4);
    double r = q + 1 / q;
    return (1 + q * q) * std::sqrt(4 - x * x) / (r * r - x * x) / (2 * pi);
}

namespace {

double eps_of(LocalType t) { return double(int(t)); }

// expm1(A x) / (-expm1(-2 x)), continuous at x = 0
double em_ratio(double A, double x)
{
    if (x == 0) return A / 2;
    return std::expm1(A * x) / (-std::expm1(-2 * x));
}

cplx zeta_p(long p, cplx s) { return 1.0 / (1.0 - std::exp(-s * std::log(double(p)))); }

cplx L_p(long p, cplx s, LocalType t) { return 1.0 / (1.0 - eps_of(t) * std::exp(-s * std::log(double(p)))); }

} // namespace

cplx shat_closed(const ShatSpec &c)
{
    if (c.p < 2 || c.n < 0) throw DomainError("bad local data");
    int j = c.n - c.ord_a;
    bool keep = c.ord_a >= 0 ? (j >= 0 && j % 2 == 0) : (c.n % 2 == 0);
    if (!keep) return 0.0;
    // zeta_p(-z) p^{j(1-z)/4} / L_p((1-z)/2) + zeta_p(z) p^{j(1+z)/4} / L_p((1+z)/2),
    // rearranged with x = z log p / 2 so that z = 0 is a removable point
    double lp = std::log(double(c.p));
    double x = c.z * lp / 2;
    double e = eps_of(c.type);
    double G = std::exp(-c.n * lp / 2 + j * lp / 4);
    double t1 = std::exp(-(j / 2.0 + 2) * x) * em_ratio(j + 2.0, x);
    double t2 = std::exp(-(j / 2.0 + 1) * x) * em_ratio(double(j), x);
    return G * (t1 - e / std::sqrt(double(c.p)) * t2);
}

cplx shat_integral(const ShatSpec &c, double contour, double tol)
{
    if (c.p < 2 || c.n < 0) throw DomainError("bad local data");
    const long p = c.p;
    const double lp = std::log(double(p));
    const cplx z = c.z;
    const double absa = std::exp(-c.ord_a * lp); // |a|_p
    if (c.ord_a < 0 && c.z == 0) throw DomainError("zeta_p(+-z) singular at z = 0");

    auto S = [&](cplx s) -> cplx {
        cplx pre = -std::exp(-(s + 1.0) / 2.0 * lp);
        if (c.ord_a >= 0)
            return pre * zeta_p(p, s + (z + 1.0) / 2.0) * zeta_p(p, s + (1.0 - z) / 2.0) / L_p(p, s + 1.0, c.type) *
                   std::exp((s + 1.0) / 2.0 * std::log(absa));
        return pre * (zeta_p(p, -z) * zeta_p(p, s + (z + 1.0) / 2.0) / L_p(p, (1.0 - z) / 2.0, c.type) *
                          std::pow(absa, (1.0 - c.z) / 4) +
                      zeta_p(p, z) * zeta_p(p, s + (1.0 - z) / 2.0) / L_p(p, (1.0 + z) / 2.0, c.type) *
                          std::pow(absa, (1.0 + c.z) / 4));
    };
    auto integrand = [&](double th) -> cplx {
        cplx s(contour, th);
        cplx u = std::exp(-s / 2.0 * lp);
        cplx mu = lp / 2 * (std::exp((1.0 + s) / 2.0 * lp) - std::exp((1.0 - s) / 2.0 * lp));
        return -S(s) * chebyshev_X(c.n, u + 1.0 / u) * mu;
    };
    // one period of length 4 pi / log p, ds = i d theta, 1/(2 pi i) ds = d theta/(2 pi)
    const double P = 4 * pi / lp;
    cplx prev = 0;
    for (int M = 32; M <= (1 << 18); M *= 2) {
        kahan<cplx> acc;
        for (int j = 0; j < M; ++j) acc += integrand(-P / 2 + P * j / M);
        cplx cur = acc.value() * (P / M) / (2 * pi);
        if (M > 32 && std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw ConvergenceError("contour quadrature did not settle");
}

cplx junip_st(int k, cplx z, cplx upsilon)
{
    cplx zq = gamma_R(-z) * riemann_zeta(-z);
    return zq * upsilon * std::exp((1.0 - z) * std::log(2.0)) * std::exp((3.0 - z) / 4.0 * std::log(pi)) *
           gamma(double(k) + (z - 1.0) / 2.0) * rgamma((z + 1.0) / 4.0) * rgamma(double(k));
}

double junip_identity_residual(int k, long m, cplx s)
{
    if (m < 1) throw DomainError("m must be positive");
    cplx z = 2.0 * s - 1.0;
    cplx up = 1.0, um = 1.0;
    auto fac = factorize(m);
    for (auto [p, e] : fac) {
        up *= upsilon_closed(p, e, z);
        um *= upsilon_closed(p, e, -z);
    }
    double sgnS = fac.size() % 2 ? -1.0 : 1.0;
    double sk = (k / 2) % 2 ? -1.0 : 1.0;
    cplx pre = sk * sgnS * std::pow(double(m), (k - 1) / 2.0) /
               (std::exp((s + double(k - 2)) * std::log(2.0)) * std::exp((-s / 2.0 - 0.5) * std::log(pi)) *
                gamma((s + 1.0) / 2.0));
    cplx lhs = pre * (junip_st(k, z, up) + junip_st(k, -z, um));
    cplx rhs = unipotent_sum(k, m, s);
    double den = std::abs(lhs) + std::abs(rhs);
    return den == 0 ? 0.0 : std::abs(lhs - rhs) / den;
}

} // namespace sptl
