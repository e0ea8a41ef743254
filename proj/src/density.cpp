#include "sptl/density.hpp"

#include <cmath>
#include <limits>

#include "sptl/errors.hpp"
#include "sptl/kahan.hpp"
#include "sptl/primes.hpp"
#include "sptl/quad.hpp"
#include "sptl/stlocal.hpp"

namespace sptl {

namespace {

double sinc(double x) { return std::fabs(x) < 1e-8 ? 1 - x * x / 6 : std::sin(x) / x; }

void check_beta(double beta)
{
    if (!(beta > 0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
}

} // namespace

TestFunctionPair fejer_pair(double beta)
{
    check_beta(beta);
    TestFunctionPair f;
    f.name = "fejer";
    f.beta = beta;
    f.phi = [beta](double x) {
        double s = sinc(pi * beta * x);
        return beta * s * s;
    };
    f.phi_hat = [beta](double xi) { return std::max(0.0, 1 - std::fabs(xi) / beta); };
    f.phi0 = beta;
    f.phihat0 = 1;
    return f;
}

TestFunctionPair fejer_squared_pair(double beta)
{
    check_beta(beta);
    TestFunctionPair f;
    f.name = "fejer2";
    f.beta = beta;
    double a = beta / 2;
    f.phi = [a](double x) {
        double s = sinc(pi * a * x);
        return 1.5 * a * s * s * s * s;
    };
    f.phi_hat = [a](double xi) {
        double u = std::fabs(xi) / a;
        if (u <= 1) return 1 - 1.5 * u * u + 0.75 * u * u * u;
        if (u < 2) return (2 - u) * (2 - u) * (2 - u) / 4;
        return 0.0;
    };
    f.phi0 = 1.5 * a;
    f.phihat0 = 1;
    f.knots = {a};
    return f;
}

const char *to_string(SymmetryType t)
{
    switch (t) {
    case SymmetryType::Sp: return "Sp";
    case SymmetryType::O: return "O";
    case SymmetryType::SOeven: return "SOeven";
    case SymmetryType::SOodd: return "SOodd";
    case SymmetryType::U: return "U";
    case SymmetryType::AnomalousSp2: return "AnomalousSp2";
    }
    return "?";
}

std::vector<SymmetryType> all_symmetry_types()
{
    return {SymmetryType::Sp,    SymmetryType::O, SymmetryType::SOeven,
            SymmetryType::SOodd, SymmetryType::U, SymmetryType::AnomalousSp2};
}

SymmetryType symmetry_type(int r, double z)
{
    if (r < 1) throw DomainError("r must be positive");
    if (r % 2) return SymmetryType::O;
    if (r == 2 && z == 0) return SymmetryType::AnomalousSp2;
    return SymmetryType::Sp;
}

double abs_moment(const TestFunctionPair &f)
{
    std::vector<double> cut{0};
    for (double k : f.knots)
        if (k > 0 && k < f.beta) cut.push_back(k);
    cut.push_back(f.beta);
    std::sort(cut.begin(), cut.end());
    double acc = 0;
    for (size_t i = 0; i + 1 < cut.size(); ++i)
        acc += gl_panel([&](double x) { return f.phi_hat(x) * x; }, cut[i], cut[i + 1], 20);
    return 2 * acc;
}

double pairing_analytic(SymmetryType t, const TestFunctionPair &f)
{
    if (f.beta > 1) throw SupportTooWide("pairing formulas need supp phi_hat inside [-1, 1]");
    switch (t) {
    case SymmetryType::U: return f.phihat0;
    case SymmetryType::Sp: return f.phihat0 - f.phi0 / 2;
    case SymmetryType::O:
    case SymmetryType::SOeven:
    case SymmetryType::SOodd: return f.phihat0 + f.phi0 / 2;
    case SymmetryType::AnomalousSp2: return f.phihat0 - 1.5 * f.phi0 + 2 * abs_moment(f);
    }
    return 0;
}

namespace {

// int_{-inf}^{inf} g, g even, decaying like c/x^2: panels on [0, X] with X doubling,
// Richardson removes the c/X tail
template <class G>
double even_integral(G &&g, double tol)
{
    const double h = 0.25;
    kahan<double> acc;
    double X = 0, prevF = 0, prevR = std::numeric_limits<double>::quiet_NaN();
    for (double target = 256; target <= 65536; target *= 2) {
        for (; X < target; X += h) acc += gl_panel(g, X, X + h, 20);
        double F = 2 * acc.value();
        if (target > 256) {
            double R = 2 * F - prevF;
            if (std::fabs(R - prevR) <= tol * std::max(1.0, std::fabs(R))) return R;
            prevR = R;
        }
        prevF = F;
    }
    throw ConvergenceError("pairing quadrature did not settle");
}

} // namespace

double integral_phi(const TestFunctionPair &f, double tol)
{
    return even_integral([&](double x) { return f.phi(x); }, tol);
}

double pairing_quadrature(SymmetryType t, const TestFunctionPair &f, double tol)
{
    if (f.beta > 1) throw SupportTooWide("pairing formulas need supp phi_hat inside [-1, 1]");
    double phi0 = f.phi(0);
    double I1 = integral_phi(f, tol);
    auto Is = [&] { return even_integral([&](double x) { return f.phi(x) * sinc(2 * pi * x); }, tol); };
    switch (t) {
    case SymmetryType::U: return I1;
    case SymmetryType::Sp: return I1 - Is();
    case SymmetryType::O: return I1 + phi0 / 2;
    case SymmetryType::SOeven: return I1 + Is();
    case SymmetryType::SOodd: return I1 - Is() + phi0;
    case SymmetryType::AnomalousSp2: {
        // 2 int phi_hat |xi| = -(1/pi^2) int (phi(x) - phi(0)) / x^2 dx; the constant
        // part of the tail is -phi(0)/X exactly, the rest decays like X^-3
        const double h = 0.25, X = 4096;
        kahan<double> acc;
        for (double x = 0; x < X; x += h)
            acc += gl_panel([&](double u) { return (f.phi(u) - phi0) / (u * u); }, x, x + h, 20);
        double A = 2 * (acc.value() - phi0 / X);
        return I1 - 1.5 * phi0 - A / (pi * pi);
    }
    }
    return 0;
}

double sym_power_sum(double x, int r, int m)
{
    if (!(std::fabs(x) <= 2)) throw DomainError("Satake point outside [-2, 2]");
    if (r < 0 || m < 0) throw DomainError("r, m must be >= 0");
    double th = std::acos(x / 2);
    return chebyshev_X(r, 2 * std::cos(m * th));
}

namespace {

double moment_at(double p, int n, const MomentSpec &s)
{
    if (n % 2) return 0;
    double lp = std::log(p);
    if (s.z > 0) return std::exp(-n * (s.z + 1) / 4 * lp);
    double c = n * lp / (2 * std::log(s.Nq));
    if (c > 1) throw ModelRangeError("z = 0 correction exceeds the main term");
    return std::exp(-n / 4.0 * lp) * (1 - c);
}

void check_spec(const MomentSpec &s)
{
    if (!(s.z >= 0 && s.z <= 1)) throw DomainError("z must lie in [0, 1]");
    if (!(s.Nq >= 100)) throw DomainError("Nq must be >= 100");
    if (s.r < 1 || s.r > 8) throw DomainError("r must lie in [1, 8]");
}

} // namespace

double moment_main(long p, int n, const MomentSpec &spec)
{
    check_spec(spec);
    if (p < 2 || n < 0) throw DomainError("bad prime or degree");
    return moment_at(double(p), n, spec);
}

double beta0(int r, double z, int k)
{
    if (r < 1 || k < 4) throw DomainError("need r >= 1, k >= 4");
    const double delta1 = 0.5;
    return delta1 / (r * (r * (k / 2.0 - (z + 1) / 2) + 0.5));
}

double support_limit(const MomentSpec &spec, SupportPolicy policy, int k)
{
    check_spec(spec);
    if (policy == SupportPolicy::theorem) return beta0(spec.r, spec.z, k);
    if (spec.z == 0) return std::min(1.0, 2.0 / (spec.r * spec.r));
    return 1;
}

ModelTerms explicit_formula_terms(const MomentSpec &spec, const TestFunctionPair &f, const ModelOptions &opt)
{
    check_spec(spec);
    if (!(f.beta < support_limit(spec, opt.policy, opt.k))) throw SupportTooWide("beta outside the admissible support");
    const int r = spec.r;
    const double lQ = r * std::log(spec.Nq);
    const double xmax = opt.extrapolate ? std::numeric_limits<double>::infinity() : 1e9;

    std::vector<double> br1, br2;
    for (double k : f.knots) {
        br1.push_back(k * lQ);
        br2.push_back(k * lQ / 2);
    }

    double M1 = 0;
    if (r % 2 == 0) {
        auto g = [&](double p) {
            double lp = std::log(p);
            return moment_at(p, r, spec) * lp / std::sqrt(p) * f.phi_hat(lp / lQ);
        };
        M1 = 2 / lQ * prime_sum(g, std::exp(f.beta * lQ), xmax, opt.cache_dir, br1);
    }
    auto g2 = [&](double p) {
        double lp = std::log(p), e = 0;
        for (int m = 0; m < r; ++m) e += (m % 2 ? -1 : 1) * moment_at(p, 2 * (r - m), spec);
        return e * lp / p * f.phi_hat(2 * lp / lQ);
    };
    double M2 = 2 / lQ * prime_sum(g2, std::exp(f.beta * lQ / 2), xmax, opt.cache_dir, br2);

    double v = f.phihat0 + (r % 2 ? 0.5 : -0.5) * f.phi0 - M1 - M2;
    return {v, M1, M2, std::exp(lQ)};
}

double explicit_formula_model(const MomentSpec &spec, const TestFunctionPair &f, const ModelOptions &opt)
{
    return explicit_formula_terms(spec, f, opt).value;
}

namespace {

double S_sum(const TestFunctionPair &f, double Q, int power, const std::string &cache_dir)
{
    if (Q > 1e9) throw SieveRangeError("Q above 10^9");
    if (!(Q > 2)) throw DomainError("Q must exceed 2");
    double lQ = std::log(Q);
    std::vector<double> br;
    for (double k : f.knots) br.push_back(k * lQ);
    auto g = [&](double p) {
        double lp = std::log(p);
        return f.phi_hat(lp / lQ) * std::pow(lp / lQ, power) / p;
    };
    return prime_sum(g, std::min(Q, std::exp(f.beta * lQ)), 1e9, cache_dir, br);
}

cplx gR_checked(cplx w)
{
    double n = std::round(-w.real() / 2);
    if (n >= 0 && std::abs(w + 2 * n) < 1e-12) throw PoleError("Gamma_R pole");
    return gamma_R(w);
}

} // namespace

double prime_sum_S1(const TestFunctionPair &f, double Q, const std::string &cache_dir)
{
    return S_sum(f, Q, 1, cache_dir);
}

double prime_sum_S2(const TestFunctionPair &f, double Q, const std::string &cache_dir)
{
    return S_sum(f, Q, 2, cache_dir);
}

cplx sym_Lfactor_arch(int r, int k, cplx s)
{
    if (r < 1 || k < 2) throw DomainError("need r >= 1, k >= 2");
    cplx acc = 1;
    if (r % 2) {
        for (int j = 0; j <= (r - 1) / 2; ++j) {
            double a = (2 * j + 1) * (k - 1) / 2.0;
            acc *= gR_checked(s + a) * gR_checked(s + 1.0 + a);
        }
    } else {
        double mu = (r / 2) % 2 ? 1 : 0;
        acc = gR_checked(s + mu);
        for (int j = 1; j <= r / 2; ++j) {
            double a = double(j) * (k - 1);
            acc *= gR_checked(s + a) * gR_checked(s + 1.0 + a);
        }
    }
    return acc;
}

cplx sym_Lfactor_unram(int r, double x, long p, cplx s)
{
    if (!(std::fabs(x) <= 2)) throw DomainError("Satake point outside [-2, 2]");
    if (r < 0 || p < 2) throw DomainError("bad r or p");
    double th = std::acos(x / 2);
    cplx ps = std::exp(-s * std::log(double(p)));
    cplx acc = 1;
    for (int j = 0; j <= r; ++j) {
        cplx d = 1.0 - std::polar(1.0, (2 * j - r) * th) * ps;
        if (std::abs(d) < 1e-14) throw PoleError("unramified factor pole");
        acc /= d;
    }
    return acc;
}

cplx sym_Lfactor_steinberg(int r, int chi, long p, cplx s)
{
    if (chi != 1 && chi != -1) throw DomainError("chi must be +-1");
    if (r < 0 || p < 2) throw DomainError("bad r or p");
    double c = (r % 2 && chi == -1) ? -1 : 1;
    cplx d = 1.0 - c * std::exp(-(s + r / 2.0) * std::log(double(p)));
    if (std::abs(d) < 1e-14) throw PoleError("Steinberg factor pole");
    return 1.0 / d;
}

int epsilon_sign(int r, const std::vector<int> &k_list, int chi)
{
    if (r < 1) throw DomainError("r must be positive");
    if (chi != 1 && chi != -1) throw DomainError("chi must be +-1");
    if (r % 2 == 0) return 1;
    long e = 0; // exponent of i
    for (int l : k_list)
        for (int j = 0; j <= (r - 1) / 2; ++j) e += (2 * j + 1) * (l - 1) + 1;
    e %= 4;
    if (e % 2) throw NonRealSign("power of i is not real");
    int ip = e == 0 ? 1 : -1;
    // (-chi^r)^r with r odd
    return ip * -chi;
}

double analytic_conductor(int r, const std::vector<int> &k_list, double Nq)
{
    if (r < 1 || !(Nq >= 1)) throw DomainError("need r >= 1, Nq >= 1");
    double Q = std::pow(Nq, r);
    for (int l : k_list) Q *= std::pow(double(l), 2 * ((r + 1) / 2));
    return Q;
}

double dq_constant(const std::vector<int> &k_list, double q)
{
    if (!(q >= 3)) throw DomainError("q must be >= 3");
    double M = std::log(q) / (1 + 1 / std::sqrt(q));
    double b = -0.5 * std::log(2.0) - 0.75 * std::log(pi) + 0.25 * digamma(0.75).real();
    for (int l : k_list) b += 0.5 * digamma(l - 0.5).real();
    return 2 / M * b + 2 * euler_gamma / M + 1;
}

OneLevelDemo empirical_one_level(const HeckeForm &form, int r, const TestFunctionPair &f, double Pmax)
{
    if (r < 1 || r > 4) throw DomainError("r must lie in [1, 4]");
    if (Pmax > 1e7) throw SieveRangeError("Pmax above 10^7");
    double Q = analytic_conductor(r, {form.weight}, 1);
    double lQ = std::log(Q);
    double X = std::min(Pmax, std::exp(f.beta * lQ));
    auto P = primes_upto(uint64_t(std::max(0.0, X)));
    if (!P.empty() && P.back() > form.N()) throw DomainError("form coefficients do not reach the prime range");
    kahan<double> m1, m2;
    for (uint32_t p : P) {
        double lp = std::log(double(p));
        double x = std::clamp(form.lambda[p], -2.0, 2.0);
        m1 += chebyshev_X(r, x) * lp / std::sqrt(double(p)) * f.phi_hat(lp / lQ);
        double e = 0;
        for (int m = 0; m < r; ++m) e += (m % 2 ? -1 : 1) * chebyshev_X(2 * (r - m), x);
        m2 += e * lp / p * f.phi_hat(2 * lp / lQ);
    }
    double v = f.phihat0 + (r % 2 ? 0.5 : -0.5) * f.phi0 - 2 / lQ * (m1.value() + m2.value());
    return {v, Q, long(P.size())};
}

} // namespace sptl
