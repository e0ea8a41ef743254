#pragma once

#include <complex>
#include <type_traits>

namespace sptl {

// Neumaier variant; works for double and std::complex<double> alike.
template <class T>
class kahan {
  public:
    kahan &operator+=(const T &x)
    {
        add(x);
        return *this;
    }
    T value() const { return s_ + c_; }

  private:
    void add(const T &x)
    {
        if constexpr (std::is_floating_point_v<T>) {
            add1(s_, c_, x);
        } else {
            auto sr = s_.real(), si = s_.imag(), cr = c_.real(), ci = c_.imag();
            add1(sr, cr, x.real());
            add1(si, ci, x.imag());
            s_ = {sr, si};
            c_ = {cr, ci};
        }
    }
    template <class R>
    static void add1(R &s, R &c, R x)
    {
        R t = s + x;
        if ((s < 0 ? -s : s) >= (x < 0 ? -x : x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    T s_{}, c_{};
};

} // namespace sptl
