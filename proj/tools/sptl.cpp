// sptl: trace-formula identity checks and one-level density tables
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sptl/arith.hpp"
#include "sptl/density.hpp"
#include "sptl/errors.hpp"
#include "sptl/qexp.hpp"
#include "sptl/stlocal.hpp"
#include "sptl/zagier.hpp"

using namespace sptl;

namespace {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Cell = std::variant<std::string, double, long>;

struct Report {
    std::vector<std::string> cols;
    std::vector<std::vector<Cell>> rows;
    // index of the column checked against the tolerance, -1 for none
    int residual_col = -1;
};

std::string fmt(double v)
{
    char b[40];
    std::snprintf(b, sizeof b, "%.15g", v);
    return b;
}

std::string cell_text(const Cell &c)
{
    if (auto s = std::get_if<std::string>(&c)) return *s;
    if (auto d = std::get_if<double>(&c)) return fmt(*d);
    return std::to_string(std::get<long>(c));
}

std::string render(const Report &r, const std::string &format)
{
    std::ostringstream os;
    if (format == "json") {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (auto &row : r.rows) {
            nlohmann::ordered_json o;
            for (size_t i = 0; i < r.cols.size(); ++i)
                std::visit([&](auto &&v) { o[r.cols[i]] = v; }, row[i]);
            a.push_back(o);
        }
        os << a.dump(2) << "\n";
        return os.str();
    }
    for (size_t i = 0; i < r.cols.size(); ++i) os << (i ? "\t" : "") << r.cols[i];
    os << "\n";
    for (auto &row : r.rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "\t" : "") << cell_text(row[i]);
        os << "\n";
    }
    return os.str();
}

// write via a temporary so that a failed run never leaves a partial file
void emit(const std::string &text, const std::string &out)
{
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::string tmp = out + ".part";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw config_error("cannot open " + out);
        f << text;
        if (!f) {
            std::filesystem::remove(tmp);
            throw config_error("write failed: " + out);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, out, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw config_error("cannot move output into place: " + ec.message());
    }
}

// Evaluates f(0..n-1) on `threads` workers; results come back in index order.
template <class R, class F>
std::vector<R> run_indexed(size_t n, int threads, F f)
{
    std::vector<R> out(n);
    std::vector<std::exception_ptr> err(n);
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i; (i = next++) < n;) {
            try {
                out[i] = f(i);
            } catch (...) {
                err[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    int T = std::max(1, std::min<int>(threads, int(n)));
    for (int t = 1; t < T; ++t) pool.emplace_back(work);
    work();
    for (auto &t : pool) t.join();
    for (auto &e : err)
        if (e) std::rethrow_exception(e);
    return out;
}

// "2", "2.5", "2+0.5i", "-1-2i", "0.5i"
cplx parse_complex(const std::string &s)
{
    static const std::regex re(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:\s*([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i)?\s*$)");
    static const std::regex pure(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i\s*$)");
    std::smatch m;
    if (std::regex_match(s, m, pure)) return {0, std::stod(m[1])};
    if (!std::regex_match(s, m, re) || (!m[1].matched && !m[2].matched) || s.empty())
        throw config_error("malformed complex value '" + s + "'");
    double re_part = m[1].matched ? std::stod(m[1]) : 0;
    double im = 0;
    if (m[2].matched) {
        im = m[3].matched ? std::stod(m[3]) : 1;
        if (m[2] == "-") im = -im;
    }
    return {re_part, im};
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else
            cur += c;
    }
    out.push_back(cur);
    return out;
}

long parse_long(const std::string &s)
{
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (...) {
        throw config_error("malformed integer '" + s + "'");
    }
    if (pos != s.size()) throw config_error("malformed integer '" + s + "'");
    return v;
}

double parse_double(const std::string &s)
{
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (...) {
        throw config_error("malformed number '" + s + "'");
    }
    if (pos != s.size()) throw config_error("malformed number '" + s + "'");
    return v;
}

// "1..6" or "1,2,5"
std::vector<long> parse_int_list(const std::string &s)
{
    std::vector<long> out;
    for (auto &part : split(s, ',')) {
        auto d = part.find("..");
        if (d != std::string::npos) {
            long a = parse_long(part.substr(0, d)), b = parse_long(part.substr(d + 2));
            if (b < a || b - a > 100000) throw config_error("bad range '" + part + "'");
            for (long v = a; v <= b; ++v) out.push_back(v);
        } else
            out.push_back(parse_long(part));
    }
    if (out.empty()) throw config_error("empty grid");
    return out;
}

std::vector<double> parse_double_list(const std::string &s)
{
    std::vector<double> out;
    for (auto &part : split(s, ',')) out.push_back(parse_double(part));
    return out;
}

std::vector<cplx> parse_complex_list(const std::string &s)
{
    std::vector<cplx> out;
    for (auto &part : split(s, ',')) out.push_back(parse_complex(part));
    return out;
}

struct Common {
    double tol = -1;
    std::string format = "tsv";
    std::string cache_dir = ".sptl-cache";
    int threads = int(std::max(1u, std::thread::hardware_concurrency()));
    std::string out;
};

double tol_or(const Common &c, double dflt)
{
    double t = c.tol < 0 ? dflt : c.tol;
    if (!(t >= 1e-12 && t <= 1e-3)) throw config_error("tolerance must lie in [1e-12, 1e-3]");
    return t;
}

Report zagier_verify(const Common &c, const std::string &ks, const std::string &ms, const std::string &ss)
{
    struct P {
        int k;
        long m;
        cplx s;
    };
    std::vector<P> grid;
    auto K = parse_int_list(ks);
    auto M = parse_int_list(ms);
    auto S = parse_complex_list(ss);
    for (long k : K) {
        if (!is_dim1_weight(int(k))) throw config_error("weight " + std::to_string(k) + " not supported");
        for (long m : M) {
            if (m < 1 || m > 2000) throw config_error("m must lie in [1, 2000]");
            for (cplx s : S) grid.push_back({int(k), m, s});
        }
    }
    Report r;
    r.cols = {"k", "m", "s_re", "s_im", "geom_re", "geom_im", "spec_re", "spec_im", "rel_err", "T_used"};
    r.residual_col = 8;
    r.rows = run_indexed<std::vector<Cell>>(grid.size(), c.threads, [&](size_t i) {
        auto [k, m, s] = grid[i];
        auto g = geom_side_detail(k, m, s);
        cplx sp = spec_side(k, m, s, c.cache_dir);
        double rel = std::abs(g.value - sp) / std::abs(sp);
        return std::vector<Cell>{long(k), m, s.real(), s.imag(), g.value.real(), g.value.imag(),
                                 sp.real(), sp.imag(), rel, g.T};
    });
    return r;
}

Report st_identities(const Common &c)
{
    struct Job {
        std::string name, params;
        std::function<double()> f;
    };
    std::vector<Job> jobs;
    auto str = [](auto... a) {
        std::ostringstream os;
        ((os << a << ' '), ...);
        std::string s = os.str();
        s.pop_back();
        return s;
    };
    for (long p : {2L, 3L, 5L, 7L})
        for (int n = 0; n <= 8; ++n)
            for (double z : {0.0, 0.25, 0.5, 1.0}) {
                ChebyshevSpec cs{p, n, z};
                jobs.push_back({"upsilon", str("p=" + std::to_string(p), "n=" + std::to_string(n), "z=" + fmt(z)),
                                [cs] { return std::fabs(upsilon_closed(cs) - upsilon_integral(cs)); }});
            }
    for (long p : {2L, 3L, 5L})
        for (auto t : {LocalType::split, LocalType::inert, LocalType::ramified})
            for (int n = 0; n <= 4; ++n)
                for (int oa = -2; oa <= 2; ++oa)
                    for (double z : {0.0, 0.2, 0.7, 1.0}) {
                        if (oa < 0 && z == 0) continue;
                        ShatSpec ss{p, t, z, n, oa};
                        jobs.push_back({"shat",
                                        str("p=" + std::to_string(p), "type=" + std::to_string(int(t)),
                                            "n=" + std::to_string(n), "ord_a=" + std::to_string(oa), "z=" + fmt(z)),
                                        [ss] { return std::abs(shat_closed(ss) - shat_integral(ss)); }});
                    }
    const std::vector<std::tuple<int, long, cplx>> ju = {
        {12, 1, 2.0},         {12, 1, {0.3, 0.7}},  {12, 4, 1.3},         {12, 9, {0.3, 0.7}},
        {16, 1, {0.6, 2.0}},  {16, 4, 1.7},         {16, 2, {0.8, -1.0}}, {18, 3, 0.75},
        {18, 16, {0.25, 0.5}}, {20, 36, {-3.3, 0.2}}, {20, 1, {0.51, 0.0}}, {22, 25, 2.4},
        {22, 6, {0.1, 3.0}},  {26, 1, {0.9, 0.1}},  {26, 49, {-1.5, 1.0}}, {12, 100, 0.2},
        {16, 8, {1.5, 4.0}},  {18, 1, {-0.5, 0.3}}, {20, 81, {2.2, -0.3}}, {26, 12, {0.4, 1.0}}};
    for (auto [k, m, s] : ju)
        jobs.push_back({"junip",
                        str("k=" + std::to_string(k), "m=" + std::to_string(m), "s=" + fmt(s.real()) + "," + fmt(s.imag())),
                        [k, m, s] { return junip_identity_residual(k, m, s); }});

    Report r;
    r.cols = {"identity", "params", "residual"};
    r.residual_col = 2;
    r.rows = run_indexed<std::vector<Cell>>(jobs.size(), c.threads, [&](size_t i) {
        return std::vector<Cell>{jobs[i].name, jobs[i].params, jobs[i].f()};
    });
    return r;
}

std::vector<KernelPoint> default_kernel_grid()
{
    std::vector<KernelPoint> g;
    for (int k : {12, 16, 26})
        for (auto [t, m] : std::vector<std::pair<long, long>>{{0, 1}, {1, 1}, {1, 3}, {3, 2}, {5, 6}})
            for (cplx s : {cplx(2.0), cplx(1.7, 0.4)}) g.push_back({k, t, m, s});
    return g;
}

Report kernel_check(const Common &c, double tol)
{
    auto grid = default_kernel_grid();
    Report r;
    r.cols = {"k", "t", "m", "delta", "s_re", "s_im", "closed_re", "closed_im", "quad_re", "quad_im", "rel_err"};
    r.residual_col = 10;
    r.rows = run_indexed<std::vector<Cell>>(grid.size(), c.threads, [&](size_t i) {
        auto &p = grid[i];
        cplx a = kernel_bridge(p);
        auto q = mizumoto_kernel_quadrature(p, tol / 100);
        double rel = std::abs(a - q.value) / std::abs(a);
        return std::vector<Cell>{long(p.k), p.t, p.m, p.delta(), p.s.real(), p.s.imag(),
                                 a.real(), a.imag(), q.value.real(), q.value.imag(), rel};
    });
    return r;
}

TestFunctionPair test_pair(const std::string &name, double beta)
{
    if (name == "fejer") return fejer_pair(beta);
    if (name == "fejer2") return fejer_squared_pair(beta);
    throw config_error("unknown test function '" + name + "'");
}

Report density_limit(const Common &c, const std::string &rs, const std::string &zs, const std::string &ns,
                     double frac, const std::string &test, const std::string &policy, const std::string &plot)
{
    auto R = parse_int_list(rs);
    auto Z = parse_double_list(zs);
    auto N = parse_double_list(ns);
    if (!(frac > 0 && frac < 1)) throw config_error("--beta-frac must lie in (0, 1)");
    ModelOptions o;
    if (policy == "theorem")
        o.policy = SupportPolicy::theorem;
    else if (policy == "model")
        o.policy = SupportPolicy::model;
    else
        throw config_error("--policy must be theorem or model");
    o.extrapolate = true;
    o.cache_dir = c.cache_dir;
    struct P {
        int r;
        double z, Nq;
    };
    std::vector<P> grid;
    for (long r : R)
        for (double z : Z)
            for (double n : N) {
                if (r < 1 || r > 8 || z < 0 || z > 1 || n < 100) throw config_error("grid point out of range");
                grid.push_back({int(r), z, n});
            }
    Report rep;
    rep.cols = {"r", "z", "Nq", "beta", "type", "model", "target", "gap"};
    // prime sums already run in parallel
    rep.rows = run_indexed<std::vector<Cell>>(grid.size(), 1, [&](size_t i) {
        auto [r, z, Nq] = grid[i];
        MomentSpec sp{z, Nq, r};
        auto f = test_pair(test, frac * support_limit(sp, o.policy));
        auto t = symmetry_type(r, z);
        double v = explicit_formula_model(sp, f, o);
        double tg = pairing_analytic(t, f);
        return std::vector<Cell>{long(r), z, Nq, f.beta, std::string(to_string(t)), v, tg, v - tg};
    });
    if (!plot.empty()) {
        std::ostringstream os;
        for (auto &row : rep.rows)
            os << fmt(1 / std::log(std::get<double>(row[2]))) << "\t" << fmt(std::get<double>(row[7])) << "\n";
        emit(os.str(), plot);
    }
    return rep;
}

Report density_pairings(const Common &c, const std::string &bs, double tol)
{
    auto B = parse_double_list(bs);
    struct P {
        std::string test;
        double beta;
        SymmetryType t;
    };
    std::vector<P> grid;
    for (std::string test : {"fejer", "fejer2"})
        for (double b : B) {
            if (!(b > 0 && b <= 1)) throw config_error("beta must lie in (0, 1]");
            for (auto t : all_symmetry_types()) grid.push_back({test, b, t});
        }
    Report r;
    r.cols = {"test", "beta", "type", "analytic", "quadrature", "diff"};
    r.residual_col = 5;
    r.rows = run_indexed<std::vector<Cell>>(grid.size(), c.threads, [&](size_t i) {
        auto &p = grid[i];
        auto f = test_pair(p.test, p.beta);
        double a = pairing_analytic(p.t, f);
        double q = pairing_quadrature(p.t, f, std::min(1e-9, tol / 100));
        return std::vector<Cell>{p.test, p.beta, std::string(to_string(p.t)), a, q, std::fabs(a - q)};
    });
    return r;
}

Report demo_one_level(const Common &c, const std::string &ks, const std::string &rs, double beta, double pmax,
                      const std::string &test)
{
    auto K = parse_int_list(ks);
    auto R = parse_int_list(rs);
    Report rep;
    rep.cols = {"label", "k", "r", "beta", "Q", "value", "primes"};
    for (long k : K) {
        if (!is_dim1_weight(int(k))) throw config_error("weight " + std::to_string(k) + " not supported");
        for (long r : R) {
            auto f = test_pair(test, beta);
            double Q = analytic_conductor(int(r), {int(k)}, 1);
            double X = std::min(pmax, std::exp(beta * std::log(Q)));
            auto form = newform_level1(int(k), size_t(std::max(100.0, X + 1)), c.cache_dir);
            auto d = empirical_one_level(form, int(r), f, pmax);
            rep.rows.push_back({std::string("DEMO"), k, r, beta, d.Q, d.value, d.primes_used});
        }
    }
    return rep;
}

Report lvalue(const std::string &fn, const std::string &ss, long r, long k, double x, long p, long chi, long D)
{
    auto S = parse_complex_list(ss);
    Report rep;
    rep.cols = {"fn", "s_re", "s_im", "value_re", "value_im"};
    for (cplx s : S) {
        cplx v;
        if (fn == "zeta")
            v = riemann_zeta(s);
        else if (fn == "dirichlet")
            v = dirichlet_L(s, D);
        else if (fn == "zagier-L")
            v = zagier_L(s, D);
        else if (fn == "gamma")
            v = gamma(s);
        else if (fn == "symsq") {
            if (!is_dim1_weight(int(k))) throw config_error("weight not supported");
            v = symsq_L_afe(newform_level1(int(k), 2000), s);
        } else if (fn == "sym-arch")
            v = sym_Lfactor_arch(int(r), int(k), s);
        else if (fn == "sym-unram")
            v = sym_Lfactor_unram(int(r), x, p, s);
        else if (fn == "sym-steinberg")
            v = sym_Lfactor_steinberg(int(r), int(chi), p, s);
        else
            throw config_error("unknown function '" + fn + "'");
        rep.rows.push_back({fn, s.real(), s.imag(), v.real(), v.imag()});
    }
    return rep;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Trace-formula identity checks and weighted one-level density tables.\n"
                 "Exit status: 0 all residuals within tolerance, 1 identity failure, 2 configuration or IO error."};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--tol", c.tol, "residual tolerance in [1e-12, 1e-3]");
    app.add_option("--format", c.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
    app.add_option("--cache-dir", c.cache_dir, "cache directory (q-expansions, prime table)")
        ->envname("SPTL_CACHE_DIR");
    app.add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", c.out, "write the table to FILE instead of stdout");

    std::string ks = "12", ms = "1..6", ss = "2";
    auto *zv = app.add_subcommand("zagier-verify", "geometric vs spectral side of Zagier's identity.\n"
                                                   "Columns: k m s_re s_im geom_re geom_im spec_re spec_im rel_err T_used");
    zv->add_option("--k", ks, "weights, e.g. 12,16 or 12..26");
    zv->add_option("--m", ms, "m values, e.g. 1..6");
    zv->add_option("--s", ss, "complex s values, e.g. 2,2+0.5i");

    auto *st = app.add_subcommand("st-identities", "local-term identities on a fixed grid.\n"
                                                   "Columns: identity params residual");

    auto *kc = app.add_subcommand("kernel-check", "closed kernel forms vs oscillatory Bessel quadrature.\n"
                                                  "Columns: k t m delta s_re s_im closed_re closed_im quad_re quad_im rel_err");

    std::string rs = "1..4", zs = "0,0.5,1", ns = "1e4,1e6,1e8,1e10", test = "fejer", policy = "model", plot;
    double frac = 0.9;
    auto *dl = app.add_subcommand("density-limit", "explicit-formula model against the limiting pairing.\n"
                                                   "Columns: r z Nq beta type model target gap");
    dl->add_option("--r", rs, "symmetric powers");
    dl->add_option("--z", zs, "weight parameters in [0, 1]");
    dl->add_option("--nq", ns, "level norms");
    dl->add_option("--beta-frac", frac, "support as a fraction of the admissible limit");
    dl->add_option("--test", test, "fejer or fejer2");
    dl->add_option("--policy", policy, "support limit: theorem or model");
    dl->add_option("--plot", plot, "also write (1/log Nq, gap) as two-column TSV to FILE");

    std::string bs = "0.25,0.5,0.9";
    auto *dp = app.add_subcommand("density-pairings", "symmetry-type pairings, closed form vs quadrature.\n"
                                                      "Columns: test beta type analytic quadrature diff");
    dp->add_option("--beta", bs, "support radii in (0, 1]");

    std::string dks = "12", drs = "1,2";
    double dbeta = 1, pmax = 1e5;
    auto *dd = app.add_subcommand("demo-one-level", "explicit formula of a single level-1 form (demonstration).\n"
                                                    "Columns: label k r beta Q value primes");
    dd->add_option("--k", dks, "weights");
    dd->add_option("--r", drs, "symmetric powers (<= 4)");
    dd->add_option("--beta", dbeta, "support radius");
    dd->add_option("--pmax", pmax, "prime bound (<= 1e7)");
    dd->add_option("--test", test, "fejer or fejer2");

    std::string fn = "zeta", ls = "2";
    long lr = 1, lk = 12, lp = 2, lchi = 1, lD = -4;
    double lx = 0;
    auto *lv = app.add_subcommand("lvalue", "evaluate one function at a list of s.\n"
                                            "fn: zeta dirichlet zagier-L gamma symsq sym-arch sym-unram sym-steinberg\n"
                                            "Columns: fn s_re s_im value_re value_im");
    lv->add_option("--fn", fn, "function name");
    lv->add_option("--s", ls, "complex s values");
    lv->add_option("--r", lr, "symmetric power");
    lv->add_option("--k", lk, "weight");
    lv->add_option("--x", lx, "Satake point in [-2, 2]");
    lv->add_option("--p", lp, "prime");
    lv->add_option("--chi", lchi, "Steinberg sign +-1");
    lv->add_option("--D", lD, "discriminant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        Report r;
        double tol = 0;
        if (zv->parsed()) {
            tol = tol_or(c, 1e-6);
            r = zagier_verify(c, ks, ms, ss);
        } else if (st->parsed()) {
            tol = tol_or(c, 1e-8);
            r = st_identities(c);
        } else if (kc->parsed()) {
            tol = tol_or(c, 1e-6);
            r = kernel_check(c, tol);
        } else if (dl->parsed()) {
            r = density_limit(c, rs, zs, ns, frac, test, policy, plot);
        } else if (dp->parsed()) {
            tol = tol_or(c, 1e-6);
            r = density_pairings(c, bs, tol);
        } else if (dd->parsed()) {
            r = demo_one_level(c, dks, drs, dbeta, pmax, test);
        } else if (lv->parsed()) {
            r = lvalue(fn, ls, lr, lk, lx, lp, lchi, lD);
        }
        emit(render(r, c.format), c.out);
        if (r.residual_col >= 0) {
            size_t worst = 0;
            double wv = -1;
            for (size_t i = 0; i < r.rows.size(); ++i) {
                double v = std::get<double>(r.rows[i][r.residual_col]);
                if (!(v <= wv)) {
                    wv = v;
                    worst = i;
                }
            }
            if (!r.rows.empty() && !(wv <= tol)) {
                std::cerr << "identity failure, worst row:";
                for (size_t i = 0; i < r.cols.size(); ++i)
                    std::cerr << " " << r.cols[i] << "=" << cell_text(r.rows[worst][i]);
                std::cerr << "\n";
                return 1;
            }
        }
        return 0;
    } catch (const config_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError &e) {
        std::cerr << "identity failure: " << e.what() << "\n";
        return 1;
    } catch (const TruncationError &e) {
        std::cerr << "identity failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
