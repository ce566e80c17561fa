#pragma once

// Reference computations kept deliberately naive and independent of the library
// internals: brute-force sums, ray casting, quadrature.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

// sum_{k=1}^{n} 1/k^2, accumulated smallest-first in long double.
inline long double inverse_squares_partial(long n) {
    long double s = 0.0L;
    for (long k = n; k >= 1; --k) s += 1.0L / (static_cast<long double>(k) * k);
    return s;
}

// Euler-Maclaurin remainder sum_{k>n} 1/k^2.
inline long double inverse_squares_tail(long n) {
    const long double x = n;
    return 1.0L / x - 1.0L / (2 * x * x) + 1.0L / (6 * x * x * x);
}

// eps^3 / 2 / (4 + c * sum_{k != 0} 1/k^2), the coefficient budget written
// out from its derivation with the series summed numerically.
inline double budget(double eps, double c, long terms = 10'000'000) {
    const long double s2 = 2.0L * (inverse_squares_partial(terms) + inverse_squares_tail(terms));
    const long double e = eps;
    return static_cast<double>((e / 2) / ((4.0L + c * s2) / (e * e)));
}

enum class Poles { ImagAxis, Integers, HalfIntegers, Lattice };

// Pole list with coefficients A r^{|p|_1}, for |p|_1 <= radius.
inline std::vector<std::pair<Complex, double>> pole_list(Poles kind, double amp, double r,
                                                         int radius) {
    std::vector<std::pair<Complex, double>> out;
    auto add = [&](int x, int y) {
        out.emplace_back(Complex(x, y), amp * std::pow(r, std::abs(x) + std::abs(y)));
    };
    for (int k = -radius; k <= radius; ++k) {
        switch (kind) {
        case Poles::ImagAxis: add(0, k); break;
        case Poles::Integers: add(k, 0); break;
        case Poles::HalfIntegers:
            if (k >= 0) add(k, 0);
            break;
        case Poles::Lattice:
            for (int m = -(radius - std::abs(k)); m <= radius - std::abs(k); ++m) add(k, m);
            break;
        }
    }
    return out;
}

inline Complex series(const std::vector<std::pair<Complex, double>>& poles, Complex z) {
    std::complex<long double> s = 0.0L;
    for (const auto& [p, a] : poles) {
        const std::complex<long double> d(z.real() - p.real(), z.imag() - p.imag());
        s += static_cast<long double>(a) / (d * d);
    }
    return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

// Winding number by counting signed crossings of the ray {v + t : t > 0}.
inline int ray_crossings(const std::vector<Complex>& poly, Complex v) {
    int w = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = poly[i] - v, b = poly[(i + 1) % n] - v;
        if (a.imag() <= 0.0) {
            if (b.imag() > 0.0 && (a.real() * b.imag() - a.imag() * b.real()) > 0.0) ++w;
        } else if (b.imag() <= 0.0 && (a.real() * b.imag() - a.imag() * b.real()) < 0.0) {
            --w;
        }
    }
    return w;
}

inline double simpson(const std::function<double(double)>& g, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = g(a) + g(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
    return s * h / 3.0;
}

}  // namespace oracle
