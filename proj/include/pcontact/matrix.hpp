#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace pcontact {

using Complex = std::complex<double>;

/// Dense d x d complex matrix stored row-major. Sizes here are tiny (d <= ~8),
/// so everything is plain loops.
class ComplexMatrix {
public:
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix zeros(std::size_t dim) { return ComplexMatrix(dim); }
    static ComplexMatrix diagonal(std::span<const Complex> diag);
    static ComplexMatrix diagonal(std::span<const double> diag);

    std::size_t dim() const noexcept { return dim_; }
    std::span<const Complex> entries() const noexcept { return data_; }

    Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

    ComplexMatrix adjoint() const;
    double max_norm() const noexcept;

    /// Entrywise max-norm comparison.
    bool approx_equal(const ComplexMatrix& other, double tol) const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
    friend ComplexMatrix operator-(ComplexMatrix m) { return m *= -1.0; }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t dim_;
    std::vector<Complex> data_;
};

/// Hermitian d x d matrix. Construction symmetrizes (L + L*)/2 after checking
/// that the input is Hermitian to within 1e-12 relative to its max-norm.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const ComplexMatrix& m);

    static HermitianMatrix from_real_diagonal(std::span<const double> diag);

    std::size_t dim() const noexcept { return m_.dim(); }
    const ComplexMatrix& matrix() const noexcept { return m_; }

private:
    ComplexMatrix m_;
};

/// q = U diag(eigenvalues) U*, eigenvalues ascending, columns of U orthonormal.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix vectors;
};

SpectralDecomposition eigen_decompose(const HermitianMatrix& q);

/// U diag(f(d_k)) U* for a scalar map f applied to the spectrum.
ComplexMatrix spectral_map(const SpectralDecomposition& sd, const std::function<Complex(double)>& f);

Complex det(const ComplexMatrix& m);
Complex trace(const ComplexMatrix& m);
ComplexMatrix adjugate(const ComplexMatrix& m);

/// Default relative threshold for inverse(): |det| <= tol * max_norm^d counts as singular.
inline constexpr double kSingularTol = 1e-12;

/// Gauss-Jordan inverse; throws Error{SingularMatrix}.
ComplexMatrix inverse(const ComplexMatrix& m, double singular_tol = kSingularTol);

/// i * sqrt(shift*I - q) with the principal scalar square root (cut on the
/// negative real axis). Below the spectrum of q each eigen-entry is -sqrt(d_k - shift).
ComplexMatrix hermitian_sqrt(const HermitianMatrix& q, double shift);
ComplexMatrix hermitian_sqrt(const SpectralDecomposition& sd, double shift);

/// The one branch convention of the library: i * sqrt(z) with the principal root.
Complex i_sqrt(double z) noexcept;

}  // namespace pcontact
