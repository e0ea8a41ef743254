#pragma once

#include <string>
#include <vector>

#include "sptl/specfun.hpp"

namespace sptl {

struct KernelPoint {
    int k = 12;
    long t = 0;
    long m = 1;
    cplx s = 2.0;

    long delta() const { return t * t - 4 * m; }
};

// K_k(Delta, t; s) = I_k(Delta, t; s) + I_k(Delta, -t; s)
cplx kernel_pair(const KernelPoint &p);

// I_{k,s}(x) for x > 1, the function symmetric under s -> 1-s
cplx zagier_I(int k, cplx s, double x);

struct QuadResult {
    cplx value;
    double error;
    int cells; // tail cells used per phase component
};

// 2 int_0^inf cos(2 pi t y) y^{-s} J_{k-1}(4 pi sqrt(m) y) dy, 1/2 < Re s < k
QuadResult mizumoto_kernel_quadrature(const KernelPoint &p, double tol);

// the closed form mapped onto the integral above
cplx kernel_bridge(const KernelPoint &p);

double kernel_identity_residual(const KernelPoint &p, double tol = 1e-11);

cplx square_term(int k, long m, cplx s);
// contribution of t = +-2 sqrt(m) (m a square), zero otherwise
cplx degenerate_term(int k, long m, cplx s);
// square_term + degenerate_term, finite at s = 1/2
cplx unipotent_sum(int k, long m, cplx s);

struct GeomResult {
    cplx value;
    long T;                 // largest |t| used
    std::vector<cplx> term; // term[t], t = 0..T; both signs of t included
};

GeomResult geom_side_detail(int k, long m, cplx s, double tol = 1e-13);
cplx geom_side(int k, long m, cplx s, double tol = 1e-13);

cplx spec_side(int k, long m, cplx s, const std::string &cache_dir = "");

} // namespace sptl
