#include "sptl/qexp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <mutex>

#include <json.hpp>

#include "sptl/arith.hpp"
#include "sptl/errors.hpp"
#include "sptl/kahan.hpp"

namespace sptl {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// primes just below 2^31, largest first
const std::vector<u64> &crt_primes()
{
    static const std::vector<u64> ps = [] {
        std::vector<u64> out;
        for (u64 n = (1ULL << 31) - 1; out.size() < 40; n -= 2) {
            bool prime = true;
            for (u64 d = 3; d * d <= n; d += 2)
                if (n % d == 0) {
                    prime = false;
                    break;
                }
            if (prime) out.push_back(n);
        }
        return out;
    }();
    return ps;
}

u64 powmod(u64 b, u64 e, u64 m)
{
    u64 r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

u64 residue(const bigint &x, u64 p)
{
    bigint r = x % p;
    long long v = r.convert_to<long long>();
    return v < 0 ? u64(v + (long long)p) : u64(v);
}

size_t max_bits(const std::vector<bigint> &v)
{
    size_t b = 0;
    for (const auto &x : v)
        if (x != 0) b = std::max(b, size_t(boost::multiprecision::msb(abs(x))) + 1);
    return b;
}

std::vector<u64> convolve_mod(const std::vector<u64> &a, const std::vector<u64> &b, size_t N, u64 p)
{
    std::vector<u64> c(N + 1);
    for (size_t n = 0; n <= N; ++n) {
        u128 acc = 0;
        for (size_t i = 0; i <= n; ++i) acc += u128(a[i]) * b[n - i];
        c[n] = u64(acc % p);
    }
    return c;
}

i128 sigma_i128(int power, const std::vector<std::pair<long, int>> &fac)
{
    i128 prod = 1;
    for (auto [p, e] : fac) {
        i128 pk = 1, q = 1, sum = 1;
        for (int i = 0; i < power; ++i) q *= p;
        for (int i = 0; i < e; ++i) {
            pk *= q;
            sum += pk;
        }
        prod *= sum;
    }
    return prod;
}

bigint from_i128(i128 v)
{
    bool neg = v < 0;
    u128 u = neg ? u128(-v) : u128(v);
    bigint r = bigint(u64(u >> 64));
    r <<= 64;
    r += bigint(u64(u));
    return neg ? bigint(-r) : r;
}

} // namespace

PowerSeries::PowerSeries(std::vector<bigint> c) : c_(std::move(c))
{
    if (c_.empty()) c_.resize(1);
}

PowerSeries PowerSeries::operator*(const PowerSeries &o) const
{
    size_t N = std::min(truncation(), o.truncation());
    std::vector<bigint> a(c_.begin(), c_.begin() + N + 1), b(o.c_.begin(), o.c_.begin() + N + 1);
    // |c_n| < 2^(ba + bb) (N+1); moduli must exceed twice that
    size_t need = max_bits(a) + max_bits(b) + size_t(std::log2(double(N + 1))) + 3;
    const auto &all = crt_primes();
    size_t L = need / 30 + 1;
    if (L > all.size()) throw DomainError("power series product beyond CRT budget");
    std::vector<u64> ps(all.begin(), all.begin() + L);

    std::vector<std::future<std::vector<u64>>> jobs;
    for (u64 p : ps) {
        jobs.push_back(std::async(std::launch::async, [&, p] {
            std::vector<u64> ra(N + 1), rb(N + 1);
            for (size_t i = 0; i <= N; ++i) {
                ra[i] = residue(a[i], p);
                rb[i] = residue(b[i], p);
            }
            return convolve_mod(ra, rb, N, p);
        }));
    }
    std::vector<std::vector<u64>> res;
    for (auto &j : jobs) res.push_back(j.get());

    // Garner: mixed-radix digits, then Horner in big integers
    std::vector<std::vector<u64>> inv(L, std::vector<u64>(L));
    for (size_t i = 0; i < L; ++i)
        for (size_t j = 0; j < i; ++j) inv[j][i] = powmod(ps[j] % ps[i], ps[i] - 2, ps[i]);
    bigint M = 1;
    for (u64 p : ps) M *= p;
    bigint half = M / 2;

    std::vector<bigint> out(N + 1);
    std::vector<u64> v(L);
    for (size_t n = 0; n <= N; ++n) {
        for (size_t i = 0; i < L; ++i) {
            u64 x = res[i][n];
            for (size_t j = 0; j < i; ++j) {
                x = (x + ps[i] - v[j] % ps[i]) % ps[i];
                x = x * inv[j][i] % ps[i];
            }
            v[i] = x;
        }
        bigint x = v[L - 1];
        for (size_t i = L - 1; i-- > 0;) x = x * ps[i] + v[i];
        if (x > half) x -= M;
        out[n] = std::move(x);
    }
    return PowerSeries(std::move(out));
}

PowerSeries delta_series(size_t N)
{
    if (N > 100000) throw DomainError("delta_series: N above 10^5");
    if (N == 0) return PowerSeries(0);
    // prod (1-q^n)^3 = sum_j (-1)^j (2j+1) q^{j(j+1)/2}, raised to the 8th power
    std::vector<std::pair<size_t, i128>> jac;
    for (size_t j = 0; j * (j + 1) / 2 <= N; ++j) jac.push_back({j * (j + 1) / 2, (j % 2 ? -1 : 1) * i128(2 * j + 1)});
    std::vector<i128> cur(N, 0);
    cur[0] = 1;
    for (int rep = 0; rep < 8; ++rep) {
        std::vector<i128> nxt(N, 0);
        for (size_t i = 0; i < N; ++i) {
            if (cur[i] == 0) continue;
            for (auto [e, c] : jac) {
                if (i + e >= N) break;
                nxt[i + e] += cur[i] * c;
            }
        }
        cur.swap(nxt);
    }
    PowerSeries out(N);
    for (size_t n = 1; n <= N; ++n) out[n] = from_i128(cur[n - 1]);
    return out;
}

PowerSeries eisenstein(int k, size_t N)
{
    if (k != 4 && k != 6) throw UnsupportedWeight("eisenstein: only k = 4, 6");
    PowerSeries out(N);
    out[0] = 1;
    int c = k == 4 ? 240 : -504;
    for (size_t n = 1; n <= N; ++n) out[n] = from_i128(c * sigma_i128(k - 1, factorize(long(n))));
    return out;
}

bool is_dim1_weight(int k) { return k == 12 || k == 16 || k == 18 || k == 20 || k == 22 || k == 26; }

namespace {

void check_hecke(const HeckeForm &f)
{
    size_t N = f.N();
    if (N >= 1 && f.a[1] != 1) throw ConvergenceError("newform not normalized");
    bigint pk1;
    for (int p : small_primes()) {
        if (size_t(p) > N) break;
        pk1 = boost::multiprecision::pow(bigint(p), f.weight - 1);
        bigint prev = 1, cur = f.a[p];
        size_t q = size_t(p);
        while (q <= N / size_t(p)) {
            q *= p;
            bigint nxt = f.a[p] * cur - pk1 * prev;
            if (nxt != f.a[q]) throw ConvergenceError("Hecke recursion fails at p = " + std::to_string(p));
            prev = cur;
            cur = nxt;
        }
    }
}

void fill_lambda(HeckeForm &f)
{
    f.lambda.assign(f.N() + 1, 0.0);
    for (size_t n = 1; n <= f.N(); ++n)
        f.lambda[n] = double(f.a[n].convert_to<long double>() / std::pow((long double)n, (f.weight - 1) / 2.0L));
}

HeckeForm compute_form(int k, size_t N)
{
    PowerSeries g = delta_series(N);
    if (k == 16 || k == 20 || k == 22 || k == 26) g = g * eisenstein(4, N);
    if (k == 20 || k == 26) g = g * eisenstein(4, N);
    if (k == 18 || k == 22 || k == 26) g = g * eisenstein(6, N);
    HeckeForm f;
    f.weight = k;
    f.a = g.coefficients();
    f.a[0] = 0;
    return f;
}

std::mutex cache_mu;

bool read_cache(const std::filesystem::path &file, int k, size_t N, HeckeForm &f)
{
    std::ifstream in(file);
    if (!in) return false;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &) {
        return false;
    }
    auto key = std::to_string(k);
    if (!j.contains(key) || j[key].size() < N) return false;
    f.weight = k;
    f.a.assign(N + 1, 0);
    for (size_t n = 1; n <= N; ++n) f.a[n] = bigint(j[key][n - 1].get<std::string>());
    return true;
}

void write_cache(const std::filesystem::path &file, const HeckeForm &f)
{
    nlohmann::json j = nlohmann::json::object();
    {
        std::ifstream in(file);
        if (in) try {
                in >> j;
            } catch (const nlohmann::json::exception &) {
                j = nlohmann::json::object();
            }
    }
    auto key = std::to_string(f.weight);
    if (j.contains(key) && j[key].size() >= f.N()) return;
    auto arr = nlohmann::json::array();
    for (size_t n = 1; n <= f.N(); ++n) arr.push_back(f.a[n].str());
    j[key] = std::move(arr);
    std::filesystem::create_directories(file.parent_path());
    auto tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << j.dump();
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

} // namespace

HeckeForm newform_level1(int k, size_t N, const std::string &cache_dir)
{
    if (!is_dim1_weight(k)) throw UnsupportedWeight(std::to_string(k));
    if (N < 1) throw DomainError("newform_level1 needs N >= 1");
    HeckeForm f;
    bool hit = false;
    std::filesystem::path file;
    if (!cache_dir.empty()) {
        file = std::filesystem::path(cache_dir) / "qexp.json";
        std::lock_guard lk(cache_mu);
        hit = read_cache(file, k, N, f);
    }
    if (!hit) f = compute_form(k, N);
    check_hecke(f);
    fill_lambda(f);
    if (!hit && !cache_dir.empty()) {
        std::lock_guard lk(cache_mu);
        write_cache(file, f);
    }
    return f;
}

std::vector<double> symsq_coefficients(const HeckeForm &f, size_t N)
{
    if (N > f.N()) throw DomainError("symsq_coefficients: N beyond the form's coefficients");
    // smallest prime factor table
    std::vector<unsigned> spf(N + 1, 0);
    for (size_t i = 2; i <= N; ++i)
        if (!spf[i])
            for (size_t j = i; j <= N; j += i)
                if (!spf[j]) spf[j] = unsigned(i);
    std::vector<double> b(N + 1, 0.0);
    if (N >= 1) b[1] = 1;
    for (size_t n = 2; n <= N; ++n) {
        size_t p = spf[n], m = n;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (m > 1) {
            b[n] = b[m] * b[n / m];
            continue;
        }
        double L = f.lambda[p] * f.lambda[p] - 1;
        // b(p^j) = L (b_{j-1} - b_{j-2}) + b_{j-3}
        double b1 = 1, b2 = 0, b3 = 0;
        for (int j = 1; j <= e; ++j) {
            double v = L * (b1 - b2) + b3;
            b3 = b2;
            b2 = b1;
            b1 = v;
        }
        b[n] = b1;
    }
    return b;
}

SeriesValue symsq_L_fin(const HeckeForm &f, cplx s, double tol, size_t nmax)
{
    double sig = s.real();
    if (sig <= 1.05) throw ConvergenceError("symmetric-square series needs Re s > 1.05");
    size_t N = nmax ? nmax : f.N();
    if (N > f.N()) throw DomainError("symsq_L_fin: nmax beyond the form's coefficients");

    // lambda(n^2) from lambda(p) by the normalized Hecke recursion
    std::vector<unsigned> spf(N + 1, 0);
    for (size_t i = 2; i <= N; ++i)
        if (!spf[i])
            for (size_t j = i; j <= N; j += i)
                if (!spf[j]) spf[j] = unsigned(i);
    std::vector<double> l2(N + 1, 0.0);
    if (N >= 1) l2[1] = 1;
    for (size_t n = 2; n <= N; ++n) {
        size_t p = spf[n], m = n;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (m > 1) {
            l2[n] = l2[m] * l2[n / m];
            continue;
        }
        double lp = f.lambda[p], prev = 1, cur = lp;
        for (int j = 1; j < 2 * e; ++j) {
            double nxt = lp * cur - prev;
            prev = cur;
            cur = nxt;
        }
        l2[n] = cur;
    }
    kahan<cplx> acc;
    for (size_t n = 1; n <= N; ++n) acc += l2[n] * std::exp(-s * std::log(double(n)));
    cplx z2 = riemann_zeta(2.0 * s);

    double a = sig - 1, L = std::log(double(N));
    double I2 = std::pow(double(N), -a) * (L * L / a + 2 * L / (a * a) + 2 / (a * a * a));
    double I1 = std::pow(double(N), -a) * (L / a + 1 / (a * a));
    double tail = std::abs(z2) * 3 / (pi * pi) * (I2 + 2 * I1);
    if (tail > tol) throw ConvergenceError("symmetric-square series tail above tolerance");
    return {z2 * acc.value(), tail, N};
}

namespace {

cplx log_gamma_factor(cplx s, int k)
{
    // log Gamma_R(s+1) + log Gamma_C(s+k-1)
    return -(s + 1.0) / 2.0 * std::log(pi) + lgamma((s + 1.0) / 2.0) + std::log(2.0) -
           (s + double(k - 1)) * std::log(2 * pi) + lgamma(s + double(k - 1));
}

struct afe_cache {
    std::mutex mu;
    std::map<std::pair<int, size_t>, std::vector<double>> coeffs;
};

afe_cache &afe_store()
{
    static afe_cache c;
    return c;
}

const std::vector<double> &cached_symsq(const HeckeForm &f)
{
    auto &st = afe_store();
    std::lock_guard lk(st.mu);
    auto key = std::make_pair(f.weight, f.N());
    auto it = st.coeffs.find(key);
    if (it == st.coeffs.end()) it = st.coeffs.emplace(key, symsq_coefficients(f, f.N())).first;
    return it->second;
}

cplx afe_half(const std::vector<double> &b, int k, cplx s)
{
    const double h = 0.05, U = 40.0 + 2.0 * k;
    double c = std::max(1.0, 2.0 - s.real());
    int M = int(std::round(U / h));
    std::vector<cplx> base(2 * M + 1), w(2 * M + 1);
    for (int j = -M; j <= M; ++j) {
        cplx ww(c, j * h);
        w[j + M] = ww;
        base[j + M] = std::exp(log_gamma_factor(s + ww, k)) / ww * (h / (2 * pi));
    }
    kahan<cplx> tot;
    for (size_t n = 1; n < b.size(); ++n) {
        if (b[n] == 0) continue;
        double ln = std::log(double(n));
        kahan<cplx> in;
        for (int j = 0; j <= 2 * M; ++j) in += base[j] * std::exp(-w[j] * ln);
        cplx term = b[n] * std::exp(-s * ln) * in.value();
        tot += term;
        if (n > 20 && std::abs(term) < 1e-18 * std::abs(tot.value())) return tot.value();
    }
    throw ConvergenceError("approximate functional equation needs more coefficients");
}

} // namespace

cplx symsq_L_afe(const HeckeForm &f, cplx s)
{
    const auto &b = cached_symsq(f);
    cplx g = log_gamma_factor(s, f.weight);
    return (afe_half(b, f.weight, s) + afe_half(b, f.weight, 1.0 - s)) / std::exp(g);
}

double petersson_norm_sq(const HeckeForm &f)
{
    double L1 = symsq_L_afe(f, 1.0).real();
    int k = f.weight;
    double v = gamma_R(2.0).real() * gamma_C(double(k)).real() * L1 / std::pow(2.0, k);
    if (!(v > 0)) throw ConvergenceError("Petersson norm not positive");
    return v;
}

} // namespace sptl
