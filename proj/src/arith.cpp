#include "sptl/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "sptl/errors.hpp"
#include "sptl/kahan.hpp"

namespace sptl {

const std::vector<int> &small_primes()
{
    static const std::vector<int> table = [] {
        const int N = 1000000;
        std::vector<char> comp(N + 1, 0);
        std::vector<int> out;
        for (int i = 2; i <= N; ++i) {
            if (comp[i]) continue;
            out.push_back(i);
            for (long j = long(i) * i; j <= N; j += i) comp[j] = 1;
        }
        return out;
    }();
    return table;
}

std::vector<std::pair<long, int>> factorize(long n)
{
    if (n == 0) throw DomainError("factorize(0)");
    n = std::labs(n);
    std::vector<std::pair<long, int>> out;
    for (int p : small_primes()) {
        if (long(p) * p > n) break;
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1) {
        if (n > 1000000000000L) throw DomainError("factorize: beyond trial-division budget");
        out.push_back({n, 1});
    }
    return out;
}

std::vector<long> divisors(long n)
{
    std::vector<long> ds = {1};
    for (auto [p, e] : factorize(n)) {
        size_t k = ds.size();
        long pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < k; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

bool is_squarefree(long n)
{
    for (auto [p, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

bool is_square(long n, long *root)
{
    if (n < 0) return false;
    long r = std::lround(std::sqrt(double(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    if (root) *root = r;
    return r * r == n;
}

static long mod4(long x) { return ((x % 4) + 4) % 4; }

bool is_fundamental(long D)
{
    if (D == 1) return true;
    if (D == 0) return false;
    if (mod4(D) == 1) return is_squarefree(D);
    if (mod4(D) == 0) {
        long m = D / 4;
        return (mod4(m) == 2 || mod4(m) == 3) && is_squarefree(m);
    }
    return false;
}

static int jacobi(long a, long n)
{
    // n odd positive
    a %= n;
    if (a < 0) a += n;
    int t = 1;
    while (a) {
        while (a % 2 == 0) {
            a /= 2;
            long r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

int kronecker(long D, long n)
{
    if (n <= 0) throw DomainError("kronecker needs n >= 1");
    if (D == 1) return 1;
    if (!is_fundamental(D)) throw DomainError("kronecker: D is not a fundamental discriminant");
    int res = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (D % 2 == 0) return 0;
        long r = ((D % 8) + 8) % 8;
        if (r == 3 || r == 5) res = -res;
    }
    if (n == 1) return res;
    return res * jacobi(D, n);
}

DiscriminantDecomp decompose_discriminant(long delta)
{
    if (delta == 0 || mod4(delta) == 2 || mod4(delta) == 3)
        throw NotADiscriminant(std::to_string(delta));
    long F = 1;
    for (auto [p, e] : factorize(delta))
        for (int i = 0; i < e / 2; ++i) F *= p;
    auto ds = divisors(F);
    for (auto it = ds.rbegin(); it != ds.rend(); ++it) {
        long f = *it;
        long D = delta / (f * f);
        if (is_fundamental(D)) return {delta, D, f};
    }
    throw NotADiscriminant(std::to_string(delta)); // unreachable for valid input
}

int moebius(long n)
{
    if (n <= 0) throw DomainError("moebius needs n >= 1");
    int m = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        m = -m;
    }
    return m;
}

cplx sigma_power(cplx nu, long n)
{
    if (n <= 0) throw DomainError("sigma_power needs n >= 1");
    cplx prod = 1;
    for (auto [p, e] : factorize(n)) {
        cplx q = std::exp(nu * std::log(double(p))), term = 1, sum = 1;
        for (int i = 0; i < e; ++i) {
            term *= q;
            sum += term;
        }
        prod *= sum;
    }
    return prod;
}

cplx b_delta_sum(const DiscriminantDecomp &d, cplx s)
{
    kahan<cplx> acc;
    long f = d.conductor;
    for (long dd : divisors(f)) {
        int mu = moebius(dd);
        if (mu == 0) continue;
        int chi = kronecker(d.fund, dd);
        if (chi == 0) continue;
        acc += double(mu * chi) * std::exp(-s * std::log(double(dd))) * sigma_power(1.0 - 2.0 * s, f / dd);
    }
    return acc.value();
}

namespace {

// expm1(A x) / (-expm1(-2 x)), continuous at x = 0
cplx em_ratio(double A, cplx x)
{
    if (x == 0.0) return A / 2;
    cplx den = -expm1(-2.0 * x);
    if (std::abs(den) < 1e-14 * std::max(1.0, std::abs(x)))
        throw LocalFactorPole("zeta_p(z) is singular at this s");
    return expm1(A * x) / den;
}

} // namespace

cplx b_delta_product(const DiscriminantDecomp &d, cplx s)
{
    // With x = (s - 1/2) log p the two-term local sum
    //   zeta_p(z) h(z) + zeta_p(-z) h(-z),  h(z) = p^{e(z+1)/2} / L_p((z+1)/2)
    // equals p^{e/2} [e^{-(e+2)x} E(2e+2) - chi p^{-1/2} e^{-(e+1)x} E(2e)],
    // E(A) = expm1(A x)/(-expm1(-2x)); no cancellation near z = 0.
    long f = d.conductor;
    cplx prod = std::exp(-s * std::log(double(f)));
    for (auto [p, e] : factorize(f)) {
        double lp = std::log(double(p));
        cplx x = (s - 0.5) * lp;
        int chi = kronecker(d.fund, p);
        cplx t1 = std::exp(-(e + 2.0) * x) * em_ratio(2.0 * e + 2, x);
        cplx t2 = std::exp(-(e + 1.0) * x) * em_ratio(2.0 * e, x);
        prod *= std::pow(double(p), e / 2.0) * (t1 - double(chi) / std::sqrt(double(p)) * t2);
    }
    return prod;
}

cplx zagier_L(cplx s, long delta)
{
    if (mod4(delta) == 2 || mod4(delta) == 3) throw NotADiscriminant(std::to_string(delta));
    if (delta == 0) return riemann_zeta(2.0 * s - 1.0);
    auto d = decompose_discriminant(delta);
    if (d.fund == 1) return riemann_zeta(s) * b_delta_sum(d, s);
    return dirichlet_L(s, d.fund) * b_delta_sum(d, s);
}

} // namespace sptl
