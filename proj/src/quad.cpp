#include "sptl/quad.hpp"

#include <map>
#include <mutex>

namespace sptl {

const gl_rule &gauss_legendre(int n)
{
    static std::mutex mu;
    static std::map<int, gl_rule> rules;
    std::lock_guard lk(mu);
    auto it = rules.find(n);
    if (it != rules.end()) return it->second;
    gl_rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        r.x[i] = x;
        r.w[i] = 2 / ((1 - x * x) * dp * dp);
    }
    return rules.emplace(n, std::move(r)).first->second;
}

} // namespace sptl
