#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <vector>

#include "sptl/errors.hpp"
#include "sptl/kahan.hpp"
#include "sptl/quad.hpp"

namespace sptl {

template <class G>
double prime_sum(G &&g, double X, double xmax, const std::string &cache_dir, std::span<const double> breaks)
{
    if (X > xmax * (1 + 1e-12)) throw SieveRangeError("prime range exceeds the allowed bound");
    if (X < 2) return 0;
    uint64_t lim = uint64_t(std::min(X, double(sieve_limit)));
    auto P = primes_upto(lim, cache_dir);

    // fixed segments, summed in order
    const size_t seg = 1 << 16;
    size_t nseg = (P.size() + seg - 1) / seg;
    std::vector<std::future<double>> parts;
    parts.reserve(nseg);
    for (size_t i = 0; i < nseg; ++i) {
        size_t a = i * seg, b = std::min(P.size(), a + seg);
        auto job = [&g, P, a, b] {
            kahan<double> acc;
            for (size_t j = a; j < b; ++j) acc += g(double(P[j]));
            return acc.value();
        };
        parts.push_back(std::async(nseg > 1 ? std::launch::async : std::launch::deferred, job));
    }
    kahan<double> total;
    for (auto &f : parts) total += f.get();

    if (X > double(sieve_limit)) {
        double u0 = std::log(double(sieve_limit)), u1 = std::log(X);
        std::vector<double> cuts{u0};
        for (double b : breaks)
            if (b > u0 && b < u1) cuts.push_back(b);
        cuts.push_back(u1);
        std::sort(cuts.begin(), cuts.end());
        auto h = [&](double u) { return g(std::exp(u)) * std::exp(u) / u; };
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            const int n = 32;
            double w = (cuts[i + 1] - cuts[i]) / n;
            for (int j = 0; j < n; ++j) total += gl_panel(h, cuts[i] + j * w, cuts[i] + (j + 1) * w, 20);
        }
    }
    return total.value();
}

} // namespace sptl
