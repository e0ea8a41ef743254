#pragma once

#include <utility>
#include <vector>

#include "sptl/specfun.hpp"

namespace sptl {

struct DiscriminantDecomp {
    long delta = 1;
    long fund = 1;
    long conductor = 1;
};

// (p, e) pairs in increasing p; trial division against a cached prime table
std::vector<std::pair<long, int>> factorize(long n);
std::vector<long> divisors(long n);
const std::vector<int> &small_primes(); // primes below 10^6

bool is_squarefree(long n);
bool is_fundamental(long D);
bool is_square(long n, long *root = nullptr);

// Kronecker character of a fundamental discriminant (D = 1 allowed)
int kronecker(long D, long n);

DiscriminantDecomp decompose_discriminant(long delta);

int moebius(long n);
cplx sigma_power(cplx nu, long n);

cplx b_delta_sum(const DiscriminantDecomp &d, cplx s);
cplx b_delta_product(const DiscriminantDecomp &d, cplx s);

// Zagier's L(s, delta)
cplx zagier_L(cplx s, long delta);

} // namespace sptl
