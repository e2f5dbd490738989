#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "pcontact/matrix.hpp"
#include "pcontact/tolerances.hpp"

namespace pcontact {

/// Open real interval (lo, hi); either end may be infinite.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const noexcept { return x > lo && x < hi; }
    bool empty() const noexcept { return !(lo < hi); }
    Interval intersect(const Interval& o) const noexcept { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// `count` interior points of an interval. Infinite ends are reached through
/// a rational map so the grid still samples far out.
std::vector<double> probe_grid(const Interval& iv, std::size_t count);

enum class WeylKind { point_interaction, scalar_rational, tabulated };

/// Fault-injection hook for the verification battery. `swapped_argument`
/// evaluates i*sqrt(Q - lambda) instead of i*sqrt(lambda - Q), the classic
/// wrong-branch bug; it makes M non-real below the threshold.
enum class BranchFault { none, swapped_argument };

/// Polynomial coefficients in ascending powers of lambda.
struct RationalCoefficients {
    std::vector<double> numerator;
    std::vector<double> denominator;

    friend bool operator==(const RationalCoefficients&, const RationalCoefficients&) = default;
};

/// Matrix Weyl function M(lambda) on a real interval inside the resolvent set
/// of the reference extension, together with M' and M''.
///
/// Evaluation outside valid_interval() throws OutOfInterval: threshold
/// behaviour at the boundary is not modelled.
class WeylModel {
public:
    class Impl;

    std::size_t dim() const noexcept;
    WeylKind kind() const noexcept;
    Interval valid_interval() const noexcept;
    bool has_analytic_derivatives() const noexcept;

    ComplexMatrix eval(double lambda) const;
    ComplexMatrix deriv1(double lambda) const;
    ComplexMatrix deriv2(double lambda) const;

    /// Q for point-interaction models, nullptr otherwise.
    const HermitianMatrix* potential() const noexcept;
    /// Coefficients for scalar rational models, nullptr otherwise.
    const RationalCoefficients* rational() const noexcept;

private:
    explicit WeylModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;

    friend WeylModel make_point_interaction(const HermitianMatrix&, BranchFault);
    friend WeylModel make_scalar_rational(RationalCoefficients, Interval);
    friend WeylModel make_tabulated(std::size_t, std::function<ComplexMatrix(double)>, Interval, double);
};

/// M(lambda) = i sqrt(lambda - Q) on (-inf, min eig Q), derivatives analytic.
WeylModel make_point_interaction(const HermitianMatrix& q, BranchFault fault = BranchFault::none);

/// Scalar M = p/q. Throws NotHerglotz if M' < -1e-9 (or q vanishes) anywhere
/// on a probe grid of `interval`.
WeylModel make_scalar_rational(RationalCoefficients coeffs, Interval interval);

/// Model given only by its values; M' and M'' come from Richardson-extrapolated
/// central differences with base step `fd_step`.
WeylModel make_tabulated(std::size_t dim, std::function<ComplexMatrix(double)> eval, Interval interval,
                         double fd_step = Tolerances{}.fd_step);

/// Smallest eigenvalue of the Hermitian part of M'(lambda) over the grid.
/// Nonnegative (up to round-off) for every Weyl function.
double herglotz_margin(const WeylModel& model, const std::vector<double>& grid);

/// max-norm of M(lambda) - M(lambda)* over the grid.
double hermiticity_defect(const WeylModel& model, const std::vector<double>& grid);

/// D(lambda) = det(param*I - M(lambda)) and its derivative by Jacobi's formula,
/// D'(lambda) = -tr(adj(param*I - M(lambda)) M'(lambda)).
class ExtensionSpectrumProbe {
public:
    ExtensionSpectrumProbe(WeylModel model, double parameter);

    const WeylModel& model() const noexcept { return model_; }
    double parameter() const noexcept { return parameter_; }

    Complex value(double lambda) const;
    Complex derivative(double lambda) const;

    /// Real parts, after asserting the imaginary residue is below kRealnessTol
    /// (NonRealDeterminant otherwise).
    double real_value(double lambda) const;
    double real_derivative(double lambda) const;

    /// Natural magnitude of D near lambda, max(1, |param| + |M|)^d; root
    /// tolerances are taken relative to it.
    double scale(double lambda) const;

private:
    WeylModel model_;
    double parameter_;
};

ExtensionSpectrumProbe detfun(const WeylModel& model, double parameter);

/// Root of D inside `bracket` (TOMS 748), then certified: |D| <= root_tol*scale
/// (NotEigenvalue) and |D'| >= simple_tol (NotSimple). Throws NoSignChange
/// when D has the same sign at both ends.
double find_isolated_eigenvalue(const ExtensionSpectrumProbe& probe, Interval bracket, const Tolerances& tol = {});

/// The certification step alone, for a user-supplied lambda0.
void certify_isolated_eigenvalue(const ExtensionSpectrumProbe& probe, double lambda0, const Tolerances& tol = {});

}  // namespace pcontact
