#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sptl/specfun.hpp"

namespace sptl {

using bigint = boost::multiprecision::cpp_int;

// Truncated power series in q with exact integer coefficients c_0..c_N.
class PowerSeries {
  public:
    explicit PowerSeries(size_t N = 0) : c_(N + 1) {}
    explicit PowerSeries(std::vector<bigint> c);

    size_t truncation() const { return c_.size() - 1; }
    const bigint &operator[](size_t i) const { return c_.at(i); }
    bigint &operator[](size_t i) { return c_.at(i); }
    const std::vector<bigint> &coefficients() const { return c_; }

    // product truncated at min of the two truncations
    PowerSeries operator*(const PowerSeries &o) const;

  private:
    std::vector<bigint> c_;
};

PowerSeries delta_series(size_t N);
PowerSeries eisenstein(int k, size_t N);

bool is_dim1_weight(int k);

struct HeckeForm {
    int weight = 0;
    std::vector<bigint> a;      // a[0] = 0, a[1] = 1, ..., a[N]
    std::vector<double> lambda; // a(n) / n^{(k-1)/2}

    size_t N() const { return a.size() - 1; }
};

// Unique normalized cusp form of level 1 for k in {12,16,18,20,22,26}.
// With a non-empty cache_dir, coefficients are read from / written to
// cache_dir/qexp.json.
HeckeForm newform_level1(int k, size_t N, const std::string &cache_dir = "");

// Dirichlet coefficients of L_fin(s, Sym^2 f), n = 0..N (index 0 unused)
std::vector<double> symsq_coefficients(const HeckeForm &f, size_t N);

struct SeriesValue {
    cplx value;
    double tail;  // heuristic bound on the omitted tail
    size_t terms; // n-range used
};

// zeta(2s) sum_{n<=N} lambda(n^2) n^{-s}; needs Re s > 1.05.
// nmax = 0 uses every n allowed by the form's coefficients.
SeriesValue symsq_L_fin(const HeckeForm &f, cplx s, double tol, size_t nmax = 0);

// L_fin(s, Sym^2 f) for any s via the approximate functional equation of
// Lambda(s) = Gamma_R(s+1) Gamma_C(s+k-1) L_fin(s).
cplx symsq_L_afe(const HeckeForm &f, cplx s);

// (f,f) = Gamma_R(2) Gamma_C(k) L_fin(1, Sym^2 f) / 2^k
double petersson_norm_sq(const HeckeForm &f);

} // namespace sptl
