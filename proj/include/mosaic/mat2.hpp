#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace mosaic {

template <class T>
struct Mat2 {
    T a{}, b{}, c{}, d{};  // [[a, b], [c, d]]

    static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend Mat2 operator*(T s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }

    T det() const { return a * d - b * c; }
    T trace() const { return a + d; }
    Mat2 adjugate() const { return {d, -b, -c, a}; }

    double max_abs() const {
        using std::abs;
        return std::max(std::max(static_cast<double>(abs(a)), static_cast<double>(abs(b))),
                        std::max(static_cast<double>(abs(c)), static_cast<double>(abs(d))));
    }
};

using Mat2d = Mat2<double>;
using Mat2c = Mat2<std::complex<double>>;

// 2x2 product kept at unit scale; true product = unit * exp(log_scale)
template <class T>
struct LogMatProduct {
    Mat2<T> unit = Mat2<T>::identity();
    double log_scale = 0.0;
    std::int64_t steps = 0;

    void push_left(const Mat2<T>& step) {
        unit = step * unit;
        ++steps;
        double m = unit.max_abs();
        if (m > 2.0 || m < 0.5) {
            if (m == 0.0) return;  // annihilated product stays zero
            T inv = T(1.0 / m);
            unit = inv * unit;
            log_scale += std::log(m);
        }
    }

    double log_norm() const {
        double m = unit.max_abs();
        return m == 0.0 ? -1e308 : log_scale + std::log(m);
    }
};

using LogMat2d = LogMatProduct<double>;
using LogMat2c = LogMatProduct<std::complex<double>>;

} // namespace mosaic
