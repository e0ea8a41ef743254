#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sptl/qexp.hpp"
#include "sptl/specfun.hpp"

namespace sptl {

// An even Paley-Wiener function and its Fourier transform, supp phi_hat = [-beta, beta].
struct TestFunctionPair {
    std::string name;
    double beta = 1;
    std::function<double(double)> phi;
    std::function<double(double)> phi_hat;
    double phi0 = 0;    // phi(0)
    double phihat0 = 0; // phi_hat(0)
    std::vector<double> knots; // kinks of phi_hat inside (0, beta)
};

// phi_hat = (1 - |xi|/beta)_+, phi = beta sinc^2(pi beta x)
TestFunctionPair fejer_pair(double beta);
// phi_hat = Fejer(beta/2) * Fejer(beta/2), normalized to phi_hat(0) = 1
TestFunctionPair fejer_squared_pair(double beta);

enum class SymmetryType { Sp, O, SOeven, SOodd, U, AnomalousSp2 };

const char *to_string(SymmetryType t);
std::vector<SymmetryType> all_symmetry_types();
// limit predicted for Sym^r weighted by L((z+1)/2, Sym^2)
SymmetryType symmetry_type(int r, double z);

// int phi_hat(x) |x| dx, piecewise Gauss-Legendre (exact for the pairs above)
double abs_moment(const TestFunctionPair &f);

double pairing_analytic(SymmetryType t, const TestFunctionPair &f);
// int phi W(t) dx by quadrature on [-X, X] plus tail handling
double pairing_quadrature(SymmetryType t, const TestFunctionPair &f, double tol = 1e-9);
// int phi dx by the same quadrature
double integral_phi(const TestFunctionPair &f, double tol = 1e-10);

// lambda(p^m) of Sym^r at the Satake point x = 2 cos theta: X_r(2 cos m theta)
double sym_power_sum(double x, int r, int m);

struct MomentSpec {
    double z = 0;
    double Nq = 1e6;
    int r = 1;
};

// model expectation of X_n at p; z = 0 carries the (1 - n log p / (2 log Nq)) correction
double moment_main(long p, int n, const MomentSpec &spec);

// support bound delta_1 / (r (r (k/2 - (z+1)/2) + 1/2)) with delta_1 = 1/2 (F = Q, k >= 4)
double beta0(int r, double z, int k = 12);

enum class SupportPolicy {
    theorem, // beta < beta0
    model    // beta < 1, and beta < 2/r^2 at z = 0 where the moment correction stays below 1
};

double support_limit(const MomentSpec &spec, SupportPolicy policy, int k = 12);

struct ModelOptions {
    SupportPolicy policy = SupportPolicy::theorem;
    int k = 12;
    // prime sums past 10^9 by the prime number theorem instead of SieveRangeError
    bool extrapolate = false;
    std::string cache_dir;
};

struct ModelTerms {
    double value;
    double M1, M2;
    double Q; // Nq^r
};

ModelTerms explicit_formula_terms(const MomentSpec &spec, const TestFunctionPair &f, const ModelOptions &opt = {});
double explicit_formula_model(const MomentSpec &spec, const TestFunctionPair &f, const ModelOptions &opt = {});

// S1 = sum_p phi_hat(log p/log Q) log p / (p log Q)           -> phi(0)/2
// S2 = sum_p phi_hat(log p/log Q) (log p)^2 / (p (log Q)^2)   -> (1/2) int phi_hat |x|
double prime_sum_S1(const TestFunctionPair &f, double Q, const std::string &cache_dir = "");
double prime_sum_S2(const TestFunctionPair &f, double Q, const std::string &cache_dir = "");

cplx sym_Lfactor_arch(int r, int k, cplx s);
// x = alpha + 1/alpha with |alpha| = 1
cplx sym_Lfactor_unram(int r, double x, long p, cplx s);
cplx sym_Lfactor_steinberg(int r, int chi, long p, cplx s);

int epsilon_sign(int r, const std::vector<int> &k_list, int chi);
double analytic_conductor(int r, const std::vector<int> &k_list, double Nq);

// D(q) / (Res zeta * C_l^(0)) for F = Q, level q prime
double dq_constant(const std::vector<int> &k_list, double q);

struct OneLevelDemo {
    double value;
    double Q;
    long primes_used;
};

// explicit formula of one form's Sym^r with the Satake data x_p = lambda_f(p),
// Q the archimedean conductor of analytic_conductor(r, {k}, 1)
OneLevelDemo empirical_one_level(const HeckeForm &form, int r, const TestFunctionPair &f, double Pmax);

} // namespace sptl
