#include "pcontact/weyl.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pcontact/error.hpp"
#include "pcontact/finite_difference.hpp"

namespace pcontact {

std::vector<double> probe_grid(const Interval& iv, std::size_t count) {
    if (iv.empty()) throw Error(ErrorKind::InvalidArgument, "probe grid of an empty interval");
    std::vector<double> grid;
    grid.reserve(count);
    const bool lo_inf = std::isinf(iv.lo);
    const bool hi_inf = std::isinf(iv.hi);
    for (std::size_t k = 1; k <= count; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(count + 1);
        double x;
        if (!lo_inf && !hi_inf) {
            x = iv.lo + t * (iv.hi - iv.lo);
        } else if (!lo_inf) {
            x = iv.lo + std::max(1.0, std::abs(iv.lo)) * t / (1.0 - t);
        } else if (!hi_inf) {
            x = iv.hi - std::max(1.0, std::abs(iv.hi)) * (1.0 - t) / t;
        } else {
            x = std::tan(std::numbers::pi * (t - 0.5));
        }
        grid.push_back(x);
    }
    return grid;
}

// ---------------------------------------------------------------------------

class WeylModel::Impl {
public:
    Impl(std::size_t dim, WeylKind kind, Interval iv) : dim_(dim), kind_(kind), interval_(iv) {}
    virtual ~Impl() = default;

    std::size_t dim() const noexcept { return dim_; }
    WeylKind kind() const noexcept { return kind_; }
    Interval interval() const noexcept { return interval_; }

    virtual bool analytic() const noexcept { return true; }
    virtual ComplexMatrix eval(double lambda) const = 0;
    virtual ComplexMatrix deriv1(double lambda) const = 0;
    virtual ComplexMatrix deriv2(double lambda) const = 0;
    virtual const HermitianMatrix* potential() const noexcept { return nullptr; }
    virtual const RationalCoefficients* rational() const noexcept { return nullptr; }

    void require_inside(double lambda) const {
        if (!interval_.contains(lambda)) {
            std::ostringstream os;
            os << "lambda = " << lambda << " outside the valid interval (" << interval_.lo << ", " << interval_.hi << ")";
            throw Error(ErrorKind::OutOfInterval, os.str(), lambda);
        }
    }

private:
    std::size_t dim_;
    WeylKind kind_;
    Interval interval_;
};

namespace {

class PointInteraction final : public WeylModel::Impl {
public:
    PointInteraction(const HermitianMatrix& q, BranchFault fault) : PointInteraction(q, eigen_decompose(q), fault) {}

    ComplexMatrix eval(double lambda) const override {
        require_inside(lambda);
        if (fault_ == BranchFault::swapped_argument)
            return spectral_map(sd_, [lambda](double d) { return i_sqrt(d - lambda); });
        return hermitian_sqrt(sd_, lambda);
    }

    ComplexMatrix deriv1(double lambda) const override {
        require_inside(lambda);
        const Complex i(0.0, 1.0);
        if (fault_ == BranchFault::swapped_argument)
            return spectral_map(sd_, [=](double d) { return -0.5 * i / std::sqrt(Complex(d - lambda, 0.0)); });
        return spectral_map(sd_, [=](double d) { return 0.5 * i / std::sqrt(Complex(lambda - d, 0.0)); });
    }

    ComplexMatrix deriv2(double lambda) const override {
        require_inside(lambda);
        const Complex i(0.0, 1.0);
        auto cube = [](Complex z) { return z * z * z; };
        if (fault_ == BranchFault::swapped_argument)
            return spectral_map(sd_, [=](double d) { return -0.25 * i / cube(std::sqrt(Complex(d - lambda, 0.0))); });
        return spectral_map(sd_, [=](double d) { return -0.25 * i / cube(std::sqrt(Complex(lambda - d, 0.0))); });
    }

    const HermitianMatrix* potential() const noexcept override { return &q_; }

private:
    PointInteraction(const HermitianMatrix& q, SpectralDecomposition sd, BranchFault fault)
        : Impl(q.dim(), WeylKind::point_interaction,
               Interval{-std::numeric_limits<double>::infinity(), sd.eigenvalues.front()}),
          q_(q),
          sd_(std::move(sd)),
          fault_(fault) {}

    HermitianMatrix q_;
    SpectralDecomposition sd_;
    BranchFault fault_;
};

struct PolyValue {
    double p, dp, ddp;
};

// Horner with first and second derivative.
PolyValue poly_eval(const std::vector<double>& c, double x) {
    double p = 0.0, dp = 0.0, ddp = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        ddp = ddp * x + 2.0 * dp;
        dp = dp * x + p;
        p = p * x + *it;
    }
    return {p, dp, ddp};
}

class ScalarRational final : public WeylModel::Impl {
public:
    ScalarRational(RationalCoefficients c, Interval iv) : Impl(1, WeylKind::scalar_rational, iv), c_(std::move(c)) {}

    ComplexMatrix eval(double lambda) const override {
        require_inside(lambda);
        const auto [p, q] = values(lambda);
        return ComplexMatrix{{p.p / q.p}};
    }

    ComplexMatrix deriv1(double lambda) const override {
        require_inside(lambda);
        const auto [p, q] = values(lambda);
        return ComplexMatrix{{(p.dp * q.p - p.p * q.dp) / (q.p * q.p)}};
    }

    ComplexMatrix deriv2(double lambda) const override {
        require_inside(lambda);
        const auto [p, q] = values(lambda);
        const double num1 = p.dp * q.p - p.p * q.dp;
        const double val = ((p.ddp * q.p - p.p * q.ddp) * q.p - 2.0 * q.dp * num1) / (q.p * q.p * q.p);
        return ComplexMatrix{{val}};
    }

    const RationalCoefficients* rational() const noexcept override { return &c_; }

    std::pair<PolyValue, PolyValue> values(double lambda) const {
        const PolyValue q = poly_eval(c_.denominator, lambda);
        if (q.p == 0.0) throw Error(ErrorKind::OutOfInterval, "denominator vanishes", lambda);
        return {poly_eval(c_.numerator, lambda), q};
    }

private:
    RationalCoefficients c_;
};

class Tabulated final : public WeylModel::Impl {
public:
    Tabulated(std::size_t dim, std::function<ComplexMatrix(double)> f, Interval iv, double h)
        : Impl(dim, WeylKind::tabulated, iv), f_(std::move(f)), h_(h) {}

    bool analytic() const noexcept override { return false; }

    ComplexMatrix eval(double lambda) const override {
        require_inside(lambda);
        return f_(lambda);
    }
    ComplexMatrix deriv1(double lambda) const override {
        require_inside(lambda);
        return fd::richardson_first(f_, lambda, step(lambda));
    }
    ComplexMatrix deriv2(double lambda) const override {
        require_inside(lambda);
        return fd::richardson_second(f_, lambda, step(lambda));
    }

private:
    // Keep the stencil inside the interval.
    double step(double lambda) const {
        const Interval iv = interval();
        double h = h_;
        const double room = std::min(lambda - iv.lo, iv.hi - lambda);
        if (room < 2.0 * h) h = 0.5 * room;
        return h;
    }

    std::function<ComplexMatrix(double)> f_;
    double h_;
};

}  // namespace

Interval WeylModel::valid_interval() const noexcept { return impl_->interval(); }

std::size_t WeylModel::dim() const noexcept { return impl_->dim(); }
WeylKind WeylModel::kind() const noexcept { return impl_->kind(); }
bool WeylModel::has_analytic_derivatives() const noexcept { return impl_->analytic(); }
ComplexMatrix WeylModel::eval(double lambda) const { return impl_->eval(lambda); }
ComplexMatrix WeylModel::deriv1(double lambda) const { return impl_->deriv1(lambda); }
ComplexMatrix WeylModel::deriv2(double lambda) const { return impl_->deriv2(lambda); }
const HermitianMatrix* WeylModel::potential() const noexcept { return impl_->potential(); }
const RationalCoefficients* WeylModel::rational() const noexcept { return impl_->rational(); }

WeylModel make_point_interaction(const HermitianMatrix& q, BranchFault fault) {
    return WeylModel(std::make_shared<PointInteraction>(q, fault));
}

WeylModel make_scalar_rational(RationalCoefficients coeffs, Interval interval) {
    if (interval.empty()) throw Error(ErrorKind::InvalidArgument, "empty interval for rational model");
    if (coeffs.numerator.empty() || coeffs.denominator.empty())
        throw Error(ErrorKind::InvalidArgument, "rational model needs numerator and denominator coefficients");
    auto impl = std::make_shared<ScalarRational>(std::move(coeffs), interval);
    for (double x : probe_grid(interval, 257)) {
        const auto [p, q] = [&] {
            try {
                return impl->values(x);
            } catch (const Error&) {
                throw Error(ErrorKind::NotHerglotz, "denominator vanishes inside the declared interval", x);
            }
        }();
        const double d1 = (p.dp * q.p - p.p * q.dp) / (q.p * q.p);
        if (!(d1 >= -1e-9)) {
            std::ostringstream os;
            os << "M'(" << x << ") = " << d1 << " < 0";
            throw Error(ErrorKind::NotHerglotz, os.str(), x);
        }
    }
    return WeylModel(std::move(impl));
}

WeylModel make_tabulated(std::size_t dim, std::function<ComplexMatrix(double)> eval, Interval interval, double fd_step) {
    if (interval.empty()) throw Error(ErrorKind::InvalidArgument, "empty interval for tabulated model");
    if (!(fd_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "finite-difference step must be positive");
    return WeylModel(std::make_shared<Tabulated>(dim, std::move(eval), interval, fd_step));
}

double herglotz_margin(const WeylModel& model, const std::vector<double>& grid) {
    double margin = std::numeric_limits<double>::infinity();
    for (double x : grid) {
        const ComplexMatrix d = model.deriv1(x);
        const ComplexMatrix herm = (d + d.adjoint()) * 0.5;
        margin = std::min(margin, eigen_decompose(HermitianMatrix(herm)).eigenvalues.front());
    }
    return margin;
}

double hermiticity_defect(const WeylModel& model, const std::vector<double>& grid) {
    double defect = 0.0;
    for (double x : grid) {
        const ComplexMatrix m = model.eval(x);
        defect = std::max(defect, (m - m.adjoint()).max_norm());
    }
    return defect;
}

// ---------------------------------------------------------------------------

ExtensionSpectrumProbe::ExtensionSpectrumProbe(WeylModel model, double parameter)
    : model_(std::move(model)), parameter_(parameter) {
    if (!std::isfinite(parameter)) throw Error(ErrorKind::InvalidArgument, "boundary parameter must be finite");
}

Complex ExtensionSpectrumProbe::value(double lambda) const {
    const std::size_t n = model_.dim();
    return det(parameter_ * ComplexMatrix::identity(n) - model_.eval(lambda));
}

Complex ExtensionSpectrumProbe::derivative(double lambda) const {
    const std::size_t n = model_.dim();
    const ComplexMatrix shifted = parameter_ * ComplexMatrix::identity(n) - model_.eval(lambda);
    return -trace(adjugate(shifted) * model_.deriv1(lambda));
}

namespace {
double assert_real(Complex z, double lambda, const char* what) {
    if (std::abs(z.imag()) > kRealnessTol * std::max(1.0, std::abs(z))) {
        std::ostringstream os;
        os << what << "(" << lambda << ") has imaginary part " << z.imag();
        throw Error(ErrorKind::NonRealDeterminant, os.str(), z.imag());
    }
    return z.real();
}
}  // namespace

double ExtensionSpectrumProbe::real_value(double lambda) const { return assert_real(value(lambda), lambda, "D"); }

double ExtensionSpectrumProbe::real_derivative(double lambda) const {
    return assert_real(derivative(lambda), lambda, "D'");
}

double ExtensionSpectrumProbe::scale(double lambda) const {
    const double base = std::max(1.0, std::abs(parameter_) + model_.eval(lambda).max_norm());
    return std::pow(base, static_cast<double>(model_.dim()));
}

ExtensionSpectrumProbe detfun(const WeylModel& model, double parameter) { return {model, parameter}; }

void certify_isolated_eigenvalue(const ExtensionSpectrumProbe& probe, double lambda0, const Tolerances& tol) {
    if (!probe.model().valid_interval().contains(lambda0))
        throw Error(ErrorKind::OutOfInterval, "lambda0 outside the model's valid interval", lambda0);
    const double d = probe.real_value(lambda0);
    if (std::abs(d) > tol.root_tol * probe.scale(lambda0)) {
        std::ostringstream os;
        os << "|D(" << lambda0 << ")| = " << std::abs(d) << " exceeds root tolerance";
        throw Error(ErrorKind::NotEigenvalue, os.str(), d);
    }
    const double dp = probe.real_derivative(lambda0);
    if (std::abs(dp) < tol.simple_tol) {
        std::ostringstream os;
        os << "|D'(" << lambda0 << ")| = " << std::abs(dp) << " below simple_tol; eigenvalue is degenerate";
        throw Error(ErrorKind::NotSimple, os.str(), dp);
    }
}

double find_isolated_eigenvalue(const ExtensionSpectrumProbe& probe, Interval bracket, const Tolerances& tol) {
    const Interval valid = probe.model().valid_interval();
    if (bracket.empty() || !valid.contains(bracket.lo) || !valid.contains(bracket.hi))
        throw Error(ErrorKind::OutOfInterval, "bracket must lie inside the model's valid interval");

    auto f = [&](double x) { return probe.real_value(x); };
    const double flo = f(bracket.lo);
    const double fhi = f(bracket.hi);
    double root;
    if (flo == 0.0) {
        root = bracket.lo;
    } else if (fhi == 0.0) {
        root = bracket.hi;
    } else {
        if ((flo > 0.0) == (fhi > 0.0)) throw Error(ErrorKind::NoSignChange, "D has the same sign at both bracket ends");
        std::uintmax_t max_iter = 200;
        const auto [a, b] = boost::math::tools::toms748_solve(f, bracket.lo, bracket.hi, flo, fhi,
                                                               boost::math::tools::eps_tolerance<double>(), max_iter);
        root = std::abs(f(a)) <= std::abs(f(b)) ? a : b;
    }
    certify_isolated_eigenvalue(probe, root, tol);
    return root;
}

}  // namespace pcontact
