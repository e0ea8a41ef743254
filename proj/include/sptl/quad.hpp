#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "sptl/errors.hpp"
#include "sptl/specfun.hpp"

namespace sptl {

struct gl_rule {
    std::vector<double> x, w; // on [-1, 1]
};

// n-point Gauss-Legendre rule by Newton iteration on P_n
const gl_rule &gauss_legendre(int n);

template <class F>
auto gl_panel(F &&f, double a, double b, int n = 20)
{
    const gl_rule &r = gauss_legendre(n);
    double h = (b - a) / 2, c = (a + b) / 2;
    decltype(f(c)) acc{};
    for (size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(c + h * r.x[i]);
    return acc * h;
}

// Double-exponential rule on [a, b]; tolerates integrable endpoint singularities.
template <class F>
auto tanh_sinh(F &&f, double a, double b, double tol = 1e-14)
{
    using T = decltype(f(a));
    double h2 = (b - a) / 2;
    auto node = [&](double t, T &acc) {
        double u = pi / 2 * std::sinh(t);
        double ch = std::cosh(u);
        double x = std::tanh(u);
        double w = pi / 2 * std::cosh(t) / (ch * ch);
        if (w < 1e-300) return;
        // distances from the endpoints without cancellation
        double d = 1 / (std::exp(std::fabs(u)) * ch); // 1 - |x|
        double y = x > 0 ? b - h2 * d : a + h2 * d;
        if (y <= a || y >= b) return;
        acc += w * f(y);
    };
    double h = 0.5;
    const double tmax = 3.2;
    T sum{};
    node(0.0, sum);
    for (double t = h; t <= tmax; t += h) {
        node(t, sum);
        node(-t, sum);
    }
    T prev = sum * h;
    for (int level = 0; level < 10; ++level) {
        h /= 2;
        for (double t = h; t <= tmax; t += 2 * h) {
            node(t, sum);
            node(-t, sum);
        }
        T cur = sum * h;
        if (std::abs(cur - prev) <= tol * std::abs(cur)) return cur * h2;
        prev = cur;
    }
    return prev * h2;
}

} // namespace sptl
