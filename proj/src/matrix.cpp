#include "pcontact/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "pcontact/error.hpp"

namespace pcontact {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) throw Error(ErrorKind::InvalidArgument, "matrix dimension must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), data_(std::move(entries)) {
    if (dim == 0) throw Error(ErrorKind::InvalidArgument, "matrix dimension must be positive");
    if (data_.size() != dim * dim) throw Error(ErrorKind::DimensionMismatch, "entry count must equal dim^2");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
    if (dim_ == 0) throw Error(ErrorKind::InvalidArgument, "matrix dimension must be positive");
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "matrix rows must be square");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

double ComplexMatrix::max_norm() const noexcept {
    double n = 0.0;
    for (const auto& z : data_) n = std::max(n, std::abs(z));
    return n;
}

bool ComplexMatrix::approx_equal(const ComplexMatrix& other, double tol) const {
    if (other.dim_ != dim_) return false;
    for (std::size_t k = 0; k < data_.size(); ++k)
        if (std::abs(data_[k] - other.data_[k]) > tol) return false;
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (rhs.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "matrix sum of different sizes");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (rhs.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "matrix difference of different sizes");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.dim_ != rhs.dim_) throw Error(ErrorKind::DimensionMismatch, "matrix product of different sizes");
    const std::size_t n = lhs.dim_;
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs(i, k);
            for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

// ---------------------------------------------------------------------------

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) : m_(m) {
    const ComplexMatrix adj = m.adjoint();
    const double scale = std::max(1.0, m.max_norm());
    if (!m.approx_equal(adj, 1e-12 * scale)) throw Error(ErrorKind::NotHermitian, "matrix is not Hermitian");
    m_ += adj;
    m_ *= 0.5;
}

HermitianMatrix HermitianMatrix::from_real_diagonal(std::span<const double> diag) {
    return HermitianMatrix(ComplexMatrix::diagonal(diag));
}

SpectralDecomposition eigen_decompose(const HermitianMatrix& q) {
    // Cyclic complex Jacobi. Each rotation first rotates the phase of a(p,q)
    // onto the real axis, then applies a real Givens rotation.
    const std::size_t n = q.dim();
    ComplexMatrix a = q.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };
    const double total = std::max(a.max_norm(), std::numeric_limits<double>::min());

    for (int sweep = 0; sweep < 100 && off_norm() > 1e-15 * total; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const Complex apr = a(p, r);
                const double mag = std::abs(apr);
                if (mag == 0.0) continue;
                const Complex phase = apr / mag;
                const double app = a(p, p).real();
                const double arr = a(r, r).real();
                const double theta = 0.5 * std::atan2(2.0 * mag, arr - app);
                const double c = std::cos(theta);
                const double s = std::sin(theta);

                // J = P R with P = diag(1, conj(phase)) on (p, r), R the real rotation.
                ComplexMatrix j = ComplexMatrix::identity(n);
                j(p, p) = c;
                j(p, r) = s;
                j(r, p) = -s * std::conj(phase);
                j(r, r) = c * std::conj(phase);

                a = j.adjoint() * a * j;
                v = v * j;
                a(p, r) = 0.0;
                a(r, p) = 0.0;
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    SpectralDecomposition sd{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        sd.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) sd.vectors(i, k) = v(i, order[k]);
    }
    return sd;
}

ComplexMatrix spectral_map(const SpectralDecomposition& sd, const std::function<Complex(double)>& f) {
    const std::size_t n = sd.vectors.dim();
    std::vector<Complex> fd(n);
    for (std::size_t k = 0; k < n; ++k) fd[k] = f(sd.eigenvalues[k]);
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += sd.vectors(i, k) * fd[k] * std::conj(sd.vectors(j, k));
            out(i, j) = s;
        }
    return out;
}

Complex det(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    if (n == 1) return m(0, 0);
    ComplexMatrix lu = m;
    Complex d = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
        if (lu(piv, k) == Complex(0.0)) return 0.0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            d = -d;
        }
        d *= lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = lu(i, k) / lu(k, k);
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
        }
    }
    return d;
}

Complex trace(const ComplexMatrix& m) {
    Complex t = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) t += m(i, i);
    return t;
}

ComplexMatrix adjugate(const ComplexMatrix& m) {
    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k,
    // adj(A) = (-1)^{n-1} M_n. Division-free in A, so singular input is fine.
    const std::size_t n = m.dim();
    const ComplexMatrix id = ComplexMatrix::identity(n);
    ComplexMatrix mk = ComplexMatrix::zeros(n);
    Complex c = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        mk = m * mk + c * id;
        c = -trace(m * mk) / static_cast<double>(k);
    }
    return (n % 2 == 1) ? mk : -mk;
}

ComplexMatrix inverse(const ComplexMatrix& m, double singular_tol) {
    const std::size_t n = m.dim();
    const double scale = std::pow(m.max_norm(), static_cast<double>(n));
    const Complex d = det(m);
    if (!(std::abs(d) > singular_tol * scale) || scale == 0.0)
        throw Error(ErrorKind::SingularMatrix, "matrix is singular to working tolerance");

    ComplexMatrix a = m;
    ComplexMatrix inv = ComplexMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (piv != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(k, j), a(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        const Complex p = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= p;
            inv(k, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const Complex f = a(i, k);
            if (f == Complex(0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

Complex i_sqrt(double z) noexcept {
    // +0.0 imaginary part keeps negative reals on the upper side of the cut.
    return Complex(0.0, 1.0) * std::sqrt(Complex(z, 0.0));
}

ComplexMatrix hermitian_sqrt(const SpectralDecomposition& sd, double shift) {
    return spectral_map(sd, [shift](double dk) { return i_sqrt(shift - dk); });
}

ComplexMatrix hermitian_sqrt(const HermitianMatrix& q, double shift) {
    return hermitian_sqrt(eigen_decompose(q), shift);
}

}  // namespace pcontact
