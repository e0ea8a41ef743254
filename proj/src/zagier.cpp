#include "sptl/zagier.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "sptl/arith.hpp"
#include "sptl/errors.hpp"
#include "sptl/kahan.hpp"
#include "sptl/qexp.hpp"
#include "sptl/quad.hpp"

namespace sptl {

namespace {

void check_strip(int k, cplx s)
{
    if (k < 4 || k % 2) throw DomainError("weight must be even and >= 4");
    if (!(s.real() > 2 - k && s.real() < k - 1)) throw DomainError("s outside 2-k < Re s < k-1");
}

double sign_k(int k) { return (k / 2) % 2 ? -1.0 : 1.0; }

cplx cpow(double base, cplx e) { return std::exp(e * std::log(base)); }

} // namespace

cplx zagier_I(int k, cplx s, double x)
{
    cplx pre = std::pow(2.0, 1 - k) * std::sqrt(pi) * rgamma(k - 0.5) * gamma(double(k - 1) + s) * gamma(double(k) - s);
    return pre * cpow(x * x - 1, -(k - 1) / 2.0) * legendre_P(-s, double(1 - k), x);
}

cplx kernel_pair(const KernelPoint &p)
{
    check_strip(p.k, p.s);
    const int k = p.k;
    const cplx s = p.s;
    long D = p.delta();
    if (D == 0) throw DegenerateDiscriminant("t^2 = 4m; use the closed degenerate term");
    if (D < 0) {
        double aD = double(-D);
        cplx pre = std::pow(2.0, 2.0 - 2.0 * s) * cpow(aD, (s - double(k)) / 2.0) * pi * gamma(double(k - 1) + s) *
                   gamma((double(k) - s) / 2.0) * rgamma(double(k)) * rgamma((double(k) + s) / 2.0);
        return pre * hyp2f1((double(k) - s) / 2.0, (double(k) + s - 1.0) / 2.0, 0.5, double(p.t * p.t) / double(D));
    }
    double x = std::abs(double(p.t)) / std::sqrt(double(D));
    cplx pre = cpow(D / 4.0, (s - double(k)) / 2.0) * 2.0 * cospi((double(k) - s) / 2.0) * std::pow(2.0, 1 - k) * pi *
               gamma(double(k - 1) + s) * gamma(double(k) - s) * rgamma(double(k));
    return pre * cpow(x * x - 1, -(k - 1) / 2.0) * legendre_P(-s, double(1 - k), x);
}

cplx kernel_bridge(const KernelPoint &p)
{
    const int k = p.k;
    const cplx s = p.s;
    return std::pow(double(p.m), (k - 1) / 2.0) * cpow(4 * pi, s - 1.0) / (2 * pi) * std::pow(2.0, k) * gamma(double(k)) *
           rgamma(s + double(k - 1)) * kernel_pair(p);
}

QuadResult mizumoto_kernel_quadrature(const KernelPoint &p, double tol)
{
    const int k = p.k, nu = k - 1;
    const cplx s = p.s;
    if (!(s.real() > 0.5 && s.real() < k)) throw DomainError("quadrature needs 1/2 < Re s < k");
    if (p.m < 1) throw DomainError("m must be positive");
    const double c = 4 * pi * std::sqrt(double(p.m));
    const double tau = 2 * pi * std::abs(double(p.t));
    const double Y0 = std::max(40.0, 2.0 * nu + 10) / c;

    auto f = [&](double y) -> cplx {
        if (y <= 0) return 0.0;
        return 2.0 * std::cos(tau * y) * std::exp(-s * std::log(y)) * bessel_J(nu, c * y);
    };

    // inner part on half-period panels; the first one absorbs y^{k-1-s} at 0
    double w = pi / (c + tau);
    int panels = int(std::ceil(Y0 / w));
    w = Y0 / panels;
    kahan<cplx> inner;
    inner += tanh_sinh(f, 0.0, w, 1e-15);
    for (int j = 1; j < panels; ++j) inner += gl_panel(f, j * w, (j + 1) * w, 24);

    // tail from the Hankel expansion, split into the phases (c +- tau) y
    const double phi0 = -(nu / 2.0 + 0.25) * pi;
    cplx tail = 0;
    double err = 0;
    int used = 0;
    for (int sg : {+1, -1}) {
        double om = c + sg * tau;
        auto g = [&](double y) -> cplx {
            double P, Q;
            hankel_PQ(nu, c * y, P, Q);
            double ph = om * y + phi0;
            return std::exp(-s * std::log(y)) * std::sqrt(2 / (pi * c * y)) * (P * std::cos(ph) - Q * std::sin(ph));
        };
        double hw = pi / std::abs(om);
        std::vector<cplx> partial;
        kahan<cplx> run;
        auto accelerate = [](std::vector<cplx> v) {
            // iterated averaging of partial sums
            while (v.size() > 1) {
                for (size_t i = 0; i + 1 < v.size(); ++i) v[i] = (v[i] + v[i + 1]) / 2.0;
                v.pop_back();
            }
            return v[0];
        };
        cplx best = 0;
        double est = 1e300;
        for (int M = 32; M <= 4096; M *= 2) {
            while (int(partial.size()) < M) {
                int j = int(partial.size());
                run += gl_panel(g, Y0 + j * hw, Y0 + (j + 1) * hw, 20);
                partial.push_back(run.value());
            }
            // drop the leading cells; the acceleration acts on the settled tail
            std::vector<cplx> a(partial.begin() + M / 2, partial.end());
            std::vector<cplx> b(partial.begin() + M / 2, partial.end() - 1);
            cplx va = accelerate(a), vb = accelerate(b);
            double e = std::abs(va - vb);
            if (e < est) {
                est = e;
                best = va;
            }
            used = std::max(used, M);
            if (est <= tol * std::max(std::abs(best), std::abs(inner.value()))) break;
        }
        tail += best;
        err += est;
    }
    cplx val = inner.value() + tail;
    if (err > tol * std::abs(val)) throw ConvergenceError("oscillatory tail acceleration stalled");
    return {val, err, used};
}

double kernel_identity_residual(const KernelPoint &p, double tol)
{
    cplx lhs = mizumoto_kernel_quadrature(p, tol).value;
    cplx rhs = kernel_bridge(p);
    return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs));
}

cplx square_term(int k, long m, cplx s)
{
    check_strip(k, s);
    long r;
    if (!is_square(m, &r)) return 0.0;
    if (std::abs(s - 0.5) < 1e-12) throw PoleError("zeta(2s) at s = 1/2");
    return sign_k(k) * gamma(double(k - 1) + s) * riemann_zeta(2.0 * s) /
           (cpow(2.0, 2.0 * s + double(k - 3)) * cpow(pi, s - 1.0) * gamma(double(k))) *
           cpow(double(m), (k - 1) / 2.0 - s / 2.0);
}

cplx degenerate_term(int k, long m, cplx s)
{
    check_strip(k, s);
    long r;
    if (!is_square(m, &r)) return 0.0;
    if (std::abs(s - 0.5) < 1e-12) throw PoleError("Gamma(s-1/2) at s = 1/2");
    double md = double(m);
    return 2.0 * std::pow(md, k - 1) * std::pow(pi, 1.5) * sign_k(k) * rgamma((s + 1.0) / 2.0) *
           rgamma((1.0 - s) / 2.0) * gamma(s - 0.5) * gamma(double(k) - s) * rgamma(double(k)) *
           riemann_zeta(2.0 * s - 1.0) * cpow(2.0, s - double(k) + 1.0) * cpow(md, (s - double(k)) / 2.0);
}

namespace {

cplx unipotent_limit(int k, long m)
{
    // Laurent data at s = 1/2 of a(s) zeta(2s) + b(s) zeta(2s-1) Gamma(s-1/2)
    double md = double(m);
    double A0 = sign_k(k) * std::exp(std::lgamma(k - 0.5) - (k - 2) * std::log(2.0) + 0.5 * std::log(pi) -
                                     std::lgamma(double(k))) *
                std::pow(md, (k - 1) / 2.0 - 0.25);
    double A1 = A0 * (digamma(k - 0.5).real() - 2 * std::log(2.0) - std::log(pi) - 0.5 * std::log(md));
    double b = 2 * std::pow(md, k - 1) * std::pow(pi, 1.5) * sign_k(k) * std::exp(std::lgamma(k - 0.5)) *
               std::pow(2.0, 1.5 - k) * std::pow(md, (0.5 - k) / 2) /
               (std::tgamma(0.75) * std::tgamma(0.25) * std::tgamma(double(k)));
    double B0 = -0.5 * b;
    double B1 = B0 * (-0.5 * digamma(0.75).real() + 0.5 * digamma(0.25).real() - digamma(k - 0.5).real() +
                      2 * std::log(2 * pi) + std::log(2.0) + 0.5 * std::log(md));
    return A1 / 2 + B1 + 1.5 * euler_gamma * A0;
}

} // namespace

cplx unipotent_sum(int k, long m, cplx s)
{
    check_strip(k, s);
    long r;
    if (!is_square(m, &r)) return 0.0;
    cplx eps = s - 0.5;
    const double e0 = 1e-5;
    if (std::abs(eps) >= e0) return square_term(k, m, s) + degenerate_term(k, m, s);
    cplx v0 = unipotent_limit(k, m);
    if (eps == 0.0) return v0;
    cplx dir = eps / std::abs(eps);
    cplx s0 = 0.5 + e0 * dir;
    cplx v1 = square_term(k, m, s0) + degenerate_term(k, m, s0);
    return v0 + (v1 - v0) * (std::abs(eps) / e0);
}

namespace {

struct lkey {
    long delta;
    double re, im;
    bool operator<(const lkey &o) const { return std::tie(delta, re, im) < std::tie(o.delta, o.re, o.im); }
};

cplx memo_L(cplx s, long delta)
{
    static std::mutex mu;
    static std::map<lkey, cplx> memo;
    lkey key{delta, s.real(), s.imag()};
    {
        std::lock_guard lk(mu);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    cplx v = zagier_L(s, delta);
    std::lock_guard lk(mu);
    memo.emplace(key, v);
    return v;
}

} // namespace

GeomResult geom_side_detail(int k, long m, cplx s, double tol)
{
    check_strip(k, s);
    if (m < 1) throw DomainError("m must be positive");
    if (std::abs(s - 1.0) < 1e-6) throw PoleError("square-discriminant terms have a pole at s = 1");
    GeomResult out;
    cplx uni = unipotent_sum(k, m, s);
    kahan<cplx> acc;
    acc += uni;
    double mk = std::pow(double(m), k - 1);
    int quiet = 0;
    for (long t = 0;; ++t) {
        if (t > 100000) throw TruncationError("t-sum did not settle below |t| = 10^5");
        long D = t * t - 4 * m;
        cplx term = 0;
        if (D != 0) {
            double w = t == 0 ? 1.0 : 2.0;
            term = w * mk * kernel_pair({k, t, m, s}) * memo_L(s, D);
            acc += term;
        }
        out.term.push_back(term);
        if (D > 0 && std::abs(term) < tol * std::abs(acc.value())) {
            if (++quiet >= 10) {
                out.T = t;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    out.value = acc.value();
    return out;
}

cplx geom_side(int k, long m, cplx s, double tol) { return geom_side_detail(k, m, s, tol).value; }

namespace {

const HeckeForm &form_for(int k, const std::string &cache_dir)
{
    static std::mutex mu;
    static std::map<int, HeckeForm> forms;
    std::lock_guard lk(mu);
    auto it = forms.find(k);
    if (it == forms.end()) it = forms.emplace(k, newform_level1(k, 2000, cache_dir)).first;
    return it->second;
}

double norm_for(const HeckeForm &f)
{
    static std::mutex mu;
    static std::map<int, double> norms;
    {
        std::lock_guard lk(mu);
        auto it = norms.find(f.weight);
        if (it != norms.end()) return it->second;
    }
    double v = petersson_norm_sq(f);
    std::lock_guard lk(mu);
    norms[f.weight] = v;
    return v;
}

} // namespace

cplx spec_side(int k, long m, cplx s, const std::string &cache_dir)
{
    if (!is_dim1_weight(k)) throw UnsupportedWeight(std::to_string(k));
    const HeckeForm &f = form_for(k, cache_dir);
    if (m < 1 || size_t(m) > f.N()) throw DomainError("m outside the cached coefficient range");
    double am = f.a[m].convert_to<double>();
    return sign_k(k) * pi / (std::pow(2.0, k - 3) * (k - 1)) * gamma(s + double(k - 1)) /
           cpow(4 * pi, s + double(k - 1)) * symsq_L_afe(f, s) / norm_for(f) * am;
}

} // namespace sptl
