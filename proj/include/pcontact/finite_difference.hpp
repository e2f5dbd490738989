#pragma once

// Richardson-extrapolated central differences. Works for any value type with
// +, - and scaling by double (double, Complex, ComplexMatrix).

namespace pcontact::fd {

inline constexpr double kDefaultStep = 1e-5;

template <typename F>
auto central_first(const F& f, double x, double h) {
    return (f(x + h) - f(x - h)) * (1.0 / (2.0 * h));
}

template <typename F>
auto central_second(const F& f, double x, double h) {
    return (f(x + h) - f(x) * 2.0 + f(x - h)) * (1.0 / (h * h));
}

/// (4 D(h/2) - D(h)) / 3, error O(h^4).
template <typename F>
auto richardson_first(const F& f, double x, double h = kDefaultStep) {
    return (central_first(f, x, 0.5 * h) * 4.0 - central_first(f, x, h)) * (1.0 / 3.0);
}

template <typename F>
auto richardson_second(const F& f, double x, double h = kDefaultStep) {
    return (central_second(f, x, 0.5 * h) * 4.0 - central_second(f, x, h)) * (1.0 / 3.0);
}

}  // namespace pcontact::fd
