#pragma once

#include "sptl/specfun.hpp"

namespace sptl {

struct ChebyshevSpec {
    long p = 2;
    int n = 0;
    double z = 1.0;
};

// X_0 = 1, X_1 = x, X_{n+1} = x X_n - X_{n-1}
double chebyshev_X(int n, double x);
cplx chebyshev_X(int n, cplx x);

// -delta(n even) p^{-n(z+1)/4}
double upsilon_closed(const ChebyshevSpec &c);
cplx upsilon_closed(long p, int n, cplx z);
double upsilon_integral(const ChebyshevSpec &c, double tol = 1e-13);

// weighted Plancherel density on (-2, 2)
double plancherel_density(long p, double z, double x);

// local behaviour of Q(sqrt Delta) at p: +1 split, -1 inert, 0 ramified
enum class LocalType { split = 1, inert = -1, ramified = 0 };

struct ShatSpec {
    long p = 2;
    LocalType type = LocalType::split;
    double z = 0.5;
    int n = 0;
    int ord_a = 0;
};

cplx shat_closed(const ShatSpec &c);
cplx shat_integral(const ShatSpec &c, double contour = 3.0, double tol = 1e-13);

// the unipotent term at one archimedean place and D_F = 1
cplx junip_st(int k, cplx z, cplx upsilon);
// relative gap between the symmetrized unipotent terms and the Zagier
// square + degenerate terms
double junip_identity_residual(int k, long m, cplx s);

} // namespace sptl
