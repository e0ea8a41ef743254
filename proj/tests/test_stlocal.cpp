#include <doctest.h>

#include <cmath>
#include <random>

#include "sptl/errors.hpp"
#include "sptl/quad.hpp"
#include "sptl/stlocal.hpp"
#include "sptl/zagier.hpp"

using namespace sptl;

namespace {

constexpr double tol_upsilon = 1e-10;
constexpr double tol_shat = 1e-9;
constexpr double tol_junip = 1e-8;
constexpr double tol_moment = 1e-9;

// moments of the density by Gauss-Legendre in theta, x = 2 cos theta
double density_moment(long p, double z, int n)
{
    double acc = 0;
    const int P = 64;
    for (int j = 0; j < P; ++j)
        acc += gl_panel(
            [&](double th) {
                double x = 2 * std::cos(th);
                return plancherel_density(p, z, x) * chebyshev_X(n, x) * 2 * std::sin(th);
            },
            pi * j / P, pi * (j + 1) / P, 20);
    return acc;
}

} // namespace

TEST_CASE("Chebyshev X_n")
{
    CHECK(chebyshev_X(0, 0.7) == 1);
    CHECK(chebyshev_X(1, 0.7) == 0.7);
    CHECK(chebyshev_X(2, 2.0) == 3);
    for (int n = 0; n < 20; ++n)
        for (double th = 0.1; th < 3; th += 0.37)
            CHECK(std::fabs(chebyshev_X(n, 2 * std::cos(th)) - std::sin((n + 1) * th) / std::sin(th)) < 1e-11);
    CHECK_THROWS_AS(chebyshev_X(-1, 0.0), DomainError);
}

TEST_CASE("Upsilon closed form")
{
    CHECK(upsilon_closed({5, 3, 0.5}) == 0);
    CHECK(upsilon_closed({5, 0, 0.5}) == -1);
    CHECK(std::fabs(upsilon_closed({2, 2, 1.0}) + 0.5) < 1e-15);
    CHECK(std::fabs(upsilon_integral({7, 0, 0.3}) + 1) < tol_upsilon);
    CHECK(std::fabs(upsilon_integral({7, 1, 0.3})) < tol_upsilon);
    CHECK(std::fabs(upsilon_integral({3, 4, 0.5}) - upsilon_closed({3, 4, 0.5})) < tol_upsilon);
    double worst = 0;
    for (long p : {2L, 3L, 5L, 7L})
        for (int n = 0; n <= 8; ++n)
            for (double z : {0.0, 0.25, 0.5, 1.0}) {
                ChebyshevSpec c{p, n, z};
                worst = std::max(worst, std::fabs(upsilon_closed(c) - upsilon_integral(c)));
            }
    CHECK(worst < tol_upsilon);
    CHECK_THROWS_AS(upsilon_closed({2, 2, 1.5}), DomainError);
}

TEST_CASE("Plancherel density")
{
    for (long p : {2L, 3L, 7L})
        for (double z : {0.0, 0.5, 1.0}) {
            CHECK(std::fabs(density_moment(p, z, 0) - 1) < tol_moment);
            CHECK(std::fabs(density_moment(p, z, 2) - std::pow(double(p), -(z + 1) / 2)) < tol_moment);
            for (int n = 0; n <= 8; ++n)
                CHECK(std::fabs(density_moment(p, z, n) + upsilon_closed({p, n, z})) < tol_moment);
            for (double x = -1.99; x < 2; x += 0.05) CHECK(plancherel_density(p, z, x) >= 0);
        }
    // large p approaches the semicircle
    double d3 = 0, dbig = 0;
    for (double x = -1.9; x < 1.95; x += 0.1) {
        double sc = std::sqrt(4 - x * x) / (2 * pi);
        d3 = std::max(d3, std::fabs(plancherel_density(3, 0.5, x) - sc));
        dbig = std::max(dbig, std::fabs(plancherel_density(1000003, 0.5, x) - sc));
    }
    CHECK(dbig < 1e-3);
    CHECK(dbig < d3 / 100);
    CHECK_THROWS_AS(plancherel_density(3, 0.5, 2.0), DomainError);
}

TEST_CASE("S-hat closed form against the contour integral")
{
    double worst = 0;
    for (long p : {2L, 3L, 5L})
        for (auto t : {LocalType::split, LocalType::inert, LocalType::ramified})
            for (int n = 0; n <= 4; ++n)
                for (int oa = -2; oa <= 2; ++oa)
                    for (double z : {0.2, 0.7, 1.0}) {
                        ShatSpec c{p, t, z, n, oa};
                        cplx a = shat_closed(c), b = shat_integral(c);
                        worst = std::max(worst, std::abs(a - b));
                        if ((n - oa) % 2 && oa >= 0) CHECK(a == 0.0);
                    }
    CHECK(worst < tol_shat);
    // direct substitution, n = 0, ord a = 0, split
    {
        double z = 0.4, p = 5;
        auto zp = [&](double w) { return 1 / (1 - std::pow(p, -w)); };
        auto Lp = [&](double w) { return 1 / (1 - std::pow(p, -w)); };
        double hand = zp(-z) / Lp((1 - z) / 2) + zp(z) / Lp((1 + z) / 2);
        CHECK(std::abs(shat_closed({5, LocalType::split, z, 0, 0}) - hand) < 1e-13);
    }
    CHECK(std::abs(shat_integral({3, LocalType::inert, 0.4, 2, 0}) - shat_closed({3, LocalType::inert, 0.4, 2, 0})) <
          tol_shat);
    // another abscissa gives the same value
    ShatSpec c{3, LocalType::split, 0.7, 3, 1};
    CHECK(std::abs(shat_integral(c, 3.0) - shat_integral(c, 4.0)) < tol_shat);
    // z = 0 through the limit form, against z = +-1e-4
    for (auto t : {LocalType::split, LocalType::inert, LocalType::ramified})
        for (int n = 0; n <= 4; n += 2) {
            ShatSpec c0{5, t, 0.0, n, 0}, cp{5, t, 1e-4, n, 0}, cm{5, t, -1e-4, n, 0};
            CHECK(std::abs(shat_closed(c0) - (shat_closed(cp) + shat_closed(cm)) / 2.0) < 1e-7);
            CHECK(std::abs(shat_closed(c0) - shat_integral(c0)) < tol_shat);
        }
    CHECK_THROWS_AS(shat_integral({3, LocalType::split, 0.0, 2, -1}), DomainError);
}

TEST_CASE("unipotent identity on random strip points")
{
    std::mt19937_64 rng(99);
    const int ks[] = {12, 16, 18, 20, 22, 26};
    std::uniform_int_distribution<int> uk(0, 5);
    std::uniform_int_distribution<long> um(1, 12);
    std::uniform_real_distribution<double> ure(0.05, 0.95), uim(-4, 4);
    int done = 0;
    double worst = 0;
    while (done < 20) {
        int k = ks[uk(rng)];
        long r = um(rng);
        long m = rng() % 2 ? r * r : r;
        cplx s(ure(rng), uim(rng));
        if (std::abs(s - 0.5) < 1e-3) continue;
        worst = std::max(worst, junip_identity_residual(k, m, s));
        ++done;
    }
    CHECK(worst < tol_junip);
    CHECK(junip_identity_residual(12, 1, 2.0) < tol_junip);
    CHECK(junip_identity_residual(16, 4, 1.3) < tol_junip);
}
