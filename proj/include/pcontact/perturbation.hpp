#pragma once

#include <optional>

#include "pcontact/contact.hpp"
#include "pcontact/tolerances.hpp"

namespace pcontact {

/// Denominators that certify the hypotheses at lambda0.
struct ExpansionDiagnostics {
    double dhat_beta_prime = 0.0;  ///< D^_beta'(lambda0), nonzero for a simple eigenvalue
    double dtilde_alpha = 0.0;     ///< D~_alpha(lambda0), nonzero at a resolvent point
};

/// lambda(x) = lambda0 + a x (+ b x^2) with x = |omega|^2.
struct ExpansionResult {
    double lambda0 = 0.0;
    double a = 0.0;
    std::optional<double> b;
    int order = 1;
    ExpansionDiagnostics diagnostics;
};

/// Checks that lambda0 is a simple eigenvalue of the hat side and a resolvent
/// point of the tilde side. Throws OutOfInterval, NotEigenvalue, NotSimple or
/// NotResolventPoint; returns the certified denominators.
ExpansionDiagnostics check_hypotheses(const CoupledSystem& sys, double lambda0, const Tolerances& tol = {});

/// First-order coefficient for any d:
///   a = tr(adj(beta I - M^) (M~ - alpha I)^{-1}) / tr(adj(beta I - M^) M^')
/// at lambda0.
ExpansionResult coeff_a(const CoupledSystem& sys, double lambda0, const Tolerances& tol = {});

/// F_lambda and F_lambdalambda at (lambda0, 0) for d = 1:
///   F_lambda = (M~ - alpha) M^',  F_lambdalambda = 2 M~' M^' + (M~ - alpha) M^''.
struct ScalarDerivativeStack {
    double f_lambda = 0.0;
    double f_lambdalambda = 0.0;

    /// Implicit-function derivatives: lambda'(0) = 1/F_lambda,
    /// lambda''(0) = -F_lambdalambda / F_lambda^3.
    double first() const { return 1.0 / f_lambda; }
    double second() const { return -f_lambdalambda / (f_lambda * f_lambda * f_lambda); }
};

ScalarDerivativeStack scalar_derivative_stack(const CoupledSystem& sys, double lambda0);

/// d = 1 coefficients a and b. b is evaluated in the factored form
///   b = a^2 (M~'/(alpha - M~) - M^''/(2 M^')).
/// Throws DimensionMismatch for d > 1.
ExpansionResult coeff_ab_scalar(const CoupledSystem& sys, double lambda0, const Tolerances& tol = {});

/// coeff_ab_scalar for d = 1, coeff_a otherwise.
ExpansionResult expansion(const CoupledSystem& sys, double lambda0, const Tolerances& tol = {});

double evaluate_expansion(const ExpansionResult& res, double x);

}  // namespace pcontact
