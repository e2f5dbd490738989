#pragma once

namespace pcontact {

/// Numerical thresholds shared by every module. root_tol and simple_tol are
/// applied relative to the natural scale of the quantity they bound.
struct Tolerances {
    double root_tol = 1e-12;
    double simple_tol = 1e-8;
    double fd_step = 1e-5;

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

/// Imaginary residue allowed on quantities that are real in exact arithmetic.
inline constexpr double kRealnessTol = 1e-9;

}  // namespace pcontact
