#include "pcontact/perturbation.hpp"

#include <cmath>
#include <sstream>

#include "pcontact/error.hpp"

namespace pcontact {

namespace {

double real_coefficient(Complex z, const char* name) {
    if (std::abs(z.imag()) > kRealnessTol * std::max(1.0, std::abs(z))) {
        std::ostringstream os;
        os << "coefficient " << name << " has imaginary part " << z.imag();
        throw Error(ErrorKind::NonRealDeterminant, os.str(), z.imag());
    }
    return z.real();
}

}  // namespace

ExpansionDiagnostics check_hypotheses(const CoupledSystem& sys, double lambda0, const Tolerances& tol) {
    if (!sys.working_interval().contains(lambda0))
        throw Error(ErrorKind::OutOfInterval, "lambda0 outside the working interval", lambda0);

    const ExtensionSpectrumProbe hat = detfun(sys.hat(), sys.coupling().beta);
    const ExtensionSpectrumProbe tilde = detfun(sys.tilde(), sys.coupling().alpha);

    // NotEigenvalue and NotSimple come from the certification.
    certify_isolated_eigenvalue(hat, lambda0, tol);

    ExpansionDiagnostics diag;
    diag.dhat_beta_prime = hat.real_derivative(lambda0);
    diag.dtilde_alpha = tilde.real_value(lambda0);
    if (std::abs(diag.dtilde_alpha) < tol.simple_tol) {
        std::ostringstream os;
        os << "|D~_alpha(" << lambda0 << ")| = " << std::abs(diag.dtilde_alpha)
           << ": lambda0 is in the spectrum of the tilde extension";
        throw Error(ErrorKind::NotResolventPoint, os.str(), diag.dtilde_alpha);
    }
    return diag;
}

ExpansionResult coeff_a(const CoupledSystem& sys, double lambda0, const Tolerances& tol) {
    ExpansionResult res;
    res.lambda0 = lambda0;
    res.order = 1;
    res.diagnostics = check_hypotheses(sys, lambda0, tol);

    const std::size_t n = sys.dim();
    const ComplexMatrix id = ComplexMatrix::identity(n);
    const ComplexMatrix adj_hat = adjugate(sys.coupling().beta * id - sys.hat().eval(lambda0));

    ComplexMatrix tilde_inv(n);
    try {
        tilde_inv = inverse(sys.tilde().eval(lambda0) - sys.coupling().alpha * id);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularMatrix) throw;
        throw Error(ErrorKind::NotResolventPoint, "M~(lambda0) - alpha I is singular", lambda0);
    }

    const Complex numerator = trace(adj_hat * tilde_inv);
    const Complex denominator = trace(adj_hat * sys.hat().deriv1(lambda0));
    if (std::abs(denominator) < tol.simple_tol)
        throw Error(ErrorKind::ZeroDenominator, "tr(adj(beta I - M^) M^') vanishes", std::abs(denominator));

    res.a = real_coefficient(numerator / denominator, "a");
    return res;
}

ScalarDerivativeStack scalar_derivative_stack(const CoupledSystem& sys, double lambda0) {
    if (sys.dim() != 1) throw Error(ErrorKind::DimensionMismatch, "derivative stack is defined for d = 1");
    const Complex mt = sys.tilde().eval(lambda0)(0, 0);
    const Complex mt1 = sys.tilde().deriv1(lambda0)(0, 0);
    const Complex mh1 = sys.hat().deriv1(lambda0)(0, 0);
    const Complex mh2 = sys.hat().deriv2(lambda0)(0, 0);
    const double alpha = sys.coupling().alpha;

    ScalarDerivativeStack s;
    s.f_lambda = real_coefficient((mt - alpha) * mh1, "F_lambda");
    s.f_lambdalambda = real_coefficient(2.0 * mt1 * mh1 + (mt - alpha) * mh2, "F_lambdalambda");
    return s;
}

ExpansionResult coeff_ab_scalar(const CoupledSystem& sys, double lambda0, const Tolerances& tol) {
    if (sys.dim() != 1)
        throw Error(ErrorKind::DimensionMismatch, "second-order coefficient is only available for d = 1");

    ExpansionResult res;
    res.lambda0 = lambda0;
    res.order = 2;
    res.diagnostics = check_hypotheses(sys, lambda0, tol);

    const ScalarDerivativeStack stack = scalar_derivative_stack(sys, lambda0);
    if (std::abs(stack.f_lambda) < tol.simple_tol)
        throw Error(ErrorKind::ZeroDenominator, "(M~ - alpha) M^' vanishes", stack.f_lambda);
    res.a = stack.first();

    const Complex mt = sys.tilde().eval(lambda0)(0, 0);
    const Complex mt1 = sys.tilde().deriv1(lambda0)(0, 0);
    const Complex mh1 = sys.hat().deriv1(lambda0)(0, 0);
    const Complex mh2 = sys.hat().deriv2(lambda0)(0, 0);
    const double alpha = sys.coupling().alpha;
    const Complex bracket = mt1 / (alpha - mt) - 0.5 * mh2 / mh1;
    res.b = real_coefficient(res.a * res.a * bracket, "b");
    return res;
}

ExpansionResult expansion(const CoupledSystem& sys, double lambda0, const Tolerances& tol) {
    return sys.dim() == 1 ? coeff_ab_scalar(sys, lambda0, tol) : coeff_a(sys, lambda0, tol);
}

double evaluate_expansion(const ExpansionResult& res, double x) {
    double v = res.lambda0 + res.a * x;
    if (res.order >= 2 && res.b) v += *res.b * x * x;
    return v;
}

}  // namespace pcontact
