#pragma once

#include <optional>
#include <vector>

#include "pcontact/contact.hpp"
#include "pcontact/perturbation.hpp"
#include "pcontact/tolerances.hpp"

namespace pcontact {

/// One solved point of the branch F(lambda(x), x) = 0.
struct BranchSample {
    double x = 0.0;
    double lambda = 0.0;
    double residual = 0.0;  ///< |F(lambda, x)| at acceptance
    double f_lambda = 0.0;  ///< F_lambda(lambda, x), bounded away from zero along a simple branch
    int newton_iters = 0;
};

struct FittedCoefficients {
    double a_hat = 0.0;
    std::optional<double> b_hat;
    double remainder_slope = 0.0;
};

struct BranchTrace {
    std::vector<BranchSample> samples;
    double lambda0 = 0.0;
    std::optional<FittedCoefficients> fitted;
};

struct TrackOptions {
    Tolerances tol;
    /// Slope used to seed the first Newton solve (lambda0 + a x1).
    std::optional<double> seed_slope;
    int max_newton_iters = 60;
};

/// Follows the branch through lambda0 for increasing x by safeguarded Newton
/// on lambda, warm-started from the previous sample. Newton steps that leave
/// the current sign-change bracket are replaced by bisection.
///
/// Throws InvalidArgument (xs not strictly increasing or negative),
/// NewtonDiverged (value() = last iterate), BracketLost, LeftInterval, and
/// NotSimple if |F_lambda| drops below simple_tol at an accepted point.
/// Grid points at x = 0 produce no sample. `fitted` is filled (order 2 for
/// d = 1, order 1 otherwise) when the samples allow a fit.
BranchTrace track_branch(const CoupledSystem& sys, double lambda0, const std::vector<double>& xs,
                         const TrackOptions& opts = {});

/// `per_decade` points per decade, geometric, both ends included.
std::vector<double> geometric_grid(double lo, double hi, int per_decade);

/// Least-squares fit of lambda(x) - lambda0 as a polynomial in x without a
/// constant term, in the relative form (lambda - lambda0)/x = a (+ b x):
///  - order 1 uses the smallest decade of x, where the x^2 term is weakest;
///  - order 2 uses every sample.
///
/// remainder_slope is the log-log slope of |lambda - expansion(x)| where the
/// expansion is `reference` when given (it must have the requested order) and
/// the fitted polynomial otherwise. Samples whose remainder sits below the
/// round-off floor 256 eps max(1, |lambda0|) are excluded; the slope is taken
/// over the smallest decade of what remains (at least three samples).
///
/// Needs at least 4 samples with x > 0 spanning a decade (InsufficientSamples).
FittedCoefficients fit_coefficients(const BranchTrace& trace, int order,
                                    const std::optional<ExpansionResult>& reference = std::nullopt);

/// Round-off floor used by fit_coefficients.
double remainder_noise_floor(double lambda0);

/// Log-log least-squares slope over the samples kept by the windowing rule
/// of fit_coefficients. Exposed for reporting on externally computed residuals.
double remainder_slope(const std::vector<double>& xs, const std::vector<double>& remainders, double noise_floor);

}  // namespace pcontact
