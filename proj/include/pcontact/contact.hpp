#pragma once

#include <cstddef>

#include "pcontact/matrix.hpp"
#include "pcontact/weyl.hpp"

namespace pcontact {

/// Boundary parameters of the two subsystems and the contact strength. The
/// coupling matrix is [[alpha I, omega I], [conj(omega) I, beta I]].
struct CouplingSpec {
    double alpha = 0.0;
    double beta = 0.0;
    Complex omega = 0.0;
    std::size_t dim = 1;

    /// The 2d x 2d Hermitian coupling matrix.
    ComplexMatrix coupling_matrix() const;
};

/// Two Weyl models (the "tilde" reference side and the "hat" side carrying the
/// unperturbed eigenvalue) joined by a point contact.
class CoupledSystem {
public:
    /// Throws DimensionMismatch if the dimensions disagree and InvalidArgument
    /// if the valid intervals do not overlap.
    CoupledSystem(WeylModel tilde, WeylModel hat, CouplingSpec coupling);

    const WeylModel& tilde() const noexcept { return tilde_; }
    const WeylModel& hat() const noexcept { return hat_; }
    const CouplingSpec& coupling() const noexcept { return coupling_; }
    std::size_t dim() const noexcept { return coupling_.dim; }
    Interval working_interval() const noexcept { return working_; }

    CoupledSystem with_omega(Complex omega) const;

    /// Interchange the roles of the two sides: (tilde, alpha) <-> (hat, beta),
    /// omega -> conj(omega).
    CoupledSystem swapped() const;

private:
    WeylModel tilde_;
    WeylModel hat_;
    CouplingSpec coupling_;
    Interval working_;
};

/// T(lambda) = (alpha I - M~(lambda)) (beta I - M^(lambda)). Not Hermitian in general.
ComplexMatrix t_matrix(const CoupledSystem& sys, double lambda);

/// dT/dlambda = -M~' (beta I - M^) - (alpha I - M~) M^'.
ComplexMatrix t_matrix_derivative(const CoupledSystem& sys, double lambda);

/// F(lambda, x) = det(T(lambda) - x I), x standing for |omega|^2. Real on the
/// working interval; an imaginary residue above kRealnessTol (relative) throws
/// NonRealDeterminant.
double char_fn(const CoupledSystem& sys, double lambda, double x);

/// F_lambda(lambda, x) = tr(adj(T - x I) T'), Jacobi's formula.
double char_fn_dlambda(const CoupledSystem& sys, double lambda, double x);

/// F_x(lambda, x) = -tr(adj(T - x I)).
double char_fn_dx(const CoupledSystem& sys, double lambda, double x);

/// Natural magnitude of F at lambda: max(1, |alpha| + |M~|)^d * max(1, |beta| + |M^|)^d + x^d.
double char_fn_scale(const CoupledSystem& sys, double lambda, double x);

/// Direct 2d x 2d determinant of Lambda - (M~ (+) M^)(lambda), using the
/// system's own omega.
double block_det(const CoupledSystem& sys, double lambda);

/// Same determinant without the realness assertion.
Complex block_det_complex(const CoupledSystem& sys, double lambda);

}  // namespace pcontact
