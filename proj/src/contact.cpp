#include "pcontact/contact.hpp"

#include <cmath>
#include <sstream>

#include "pcontact/error.hpp"
#include "pcontact/tolerances.hpp"

namespace pcontact {

ComplexMatrix CouplingSpec::coupling_matrix() const {
    const std::size_t n = dim;
    ComplexMatrix lam(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        lam(i, i) = alpha;
        lam(n + i, n + i) = beta;
        lam(i, n + i) = omega;
        lam(n + i, i) = std::conj(omega);
    }
    return lam;
}

CoupledSystem::CoupledSystem(WeylModel tilde, WeylModel hat, CouplingSpec coupling)
    : tilde_(std::move(tilde)), hat_(std::move(hat)), coupling_(coupling) {
    if (tilde_.dim() != coupling_.dim || hat_.dim() != coupling_.dim)
        throw Error(ErrorKind::DimensionMismatch, "Weyl models and coupling must share one dimension");
    if (!std::isfinite(coupling_.alpha) || !std::isfinite(coupling_.beta))
        throw Error(ErrorKind::InvalidArgument, "alpha and beta must be finite");
    working_ = tilde_.valid_interval().intersect(hat_.valid_interval());
    if (working_.empty()) throw Error(ErrorKind::InvalidArgument, "the two valid intervals do not overlap");
}

CoupledSystem CoupledSystem::with_omega(Complex omega) const {
    CouplingSpec c = coupling_;
    c.omega = omega;
    return CoupledSystem(tilde_, hat_, c);
}

CoupledSystem CoupledSystem::swapped() const {
    CouplingSpec c{coupling_.beta, coupling_.alpha, std::conj(coupling_.omega), coupling_.dim};
    return CoupledSystem(hat_, tilde_, c);
}

namespace {

void require_working(const CoupledSystem& sys, double lambda) {
    if (!sys.working_interval().contains(lambda)) {
        std::ostringstream os;
        os << "lambda = " << lambda << " outside the working interval";
        throw Error(ErrorKind::OutOfInterval, os.str(), lambda);
    }
}

double real_or_throw(Complex z, double scale, const char* what) {
    if (std::abs(z.imag()) > kRealnessTol * std::max(scale, std::abs(z))) {
        std::ostringstream os;
        os << what << " has imaginary part " << z.imag();
        throw Error(ErrorKind::NonRealDeterminant, os.str(), z.imag());
    }
    return z.real();
}

ComplexMatrix shifted_t(const CoupledSystem& sys, double lambda, double x) {
    return t_matrix(sys, lambda) - x * ComplexMatrix::identity(sys.dim());
}

}  // namespace

ComplexMatrix t_matrix(const CoupledSystem& sys, double lambda) {
    require_working(sys, lambda);
    const ComplexMatrix id = ComplexMatrix::identity(sys.dim());
    return (sys.coupling().alpha * id - sys.tilde().eval(lambda)) * (sys.coupling().beta * id - sys.hat().eval(lambda));
}

ComplexMatrix t_matrix_derivative(const CoupledSystem& sys, double lambda) {
    require_working(sys, lambda);
    const ComplexMatrix id = ComplexMatrix::identity(sys.dim());
    const ComplexMatrix a = sys.coupling().alpha * id - sys.tilde().eval(lambda);
    const ComplexMatrix b = sys.coupling().beta * id - sys.hat().eval(lambda);
    return -(sys.tilde().deriv1(lambda) * b) - a * sys.hat().deriv1(lambda);
}

double char_fn_scale(const CoupledSystem& sys, double lambda, double x) {
    const double n = static_cast<double>(sys.dim());
    const double ta = std::max(1.0, std::abs(sys.coupling().alpha) + sys.tilde().eval(lambda).max_norm());
    const double hb = std::max(1.0, std::abs(sys.coupling().beta) + sys.hat().eval(lambda).max_norm());
    return std::pow(ta * hb, n) + std::pow(std::abs(x), n);
}

double char_fn(const CoupledSystem& sys, double lambda, double x) {
    if (!(x >= 0.0)) throw Error(ErrorKind::InvalidArgument, "x = |omega|^2 must be nonnegative", x);
    return real_or_throw(det(shifted_t(sys, lambda, x)), 1.0, "F(lambda, x)");
}

double char_fn_dlambda(const CoupledSystem& sys, double lambda, double x) {
    const Complex v = trace(adjugate(shifted_t(sys, lambda, x)) * t_matrix_derivative(sys, lambda));
    return real_or_throw(v, 1.0, "F_lambda");
}

double char_fn_dx(const CoupledSystem& sys, double lambda, double x) {
    return real_or_throw(-trace(adjugate(shifted_t(sys, lambda, x))), 1.0, "F_x");
}

Complex block_det_complex(const CoupledSystem& sys, double lambda) {
    require_working(sys, lambda);
    const std::size_t n = sys.dim();
    ComplexMatrix big = sys.coupling().coupling_matrix();
    const ComplexMatrix mt = sys.tilde().eval(lambda);
    const ComplexMatrix mh = sys.hat().eval(lambda);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            big(i, j) -= mt(i, j);
            big(n + i, n + j) -= mh(i, j);
        }
    return det(big);
}

double block_det(const CoupledSystem& sys, double lambda) {
    return real_or_throw(block_det_complex(sys, lambda), 1.0, "block determinant");
}

}  // namespace pcontact
