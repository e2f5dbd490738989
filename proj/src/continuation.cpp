#include "pcontact/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pcontact/error.hpp"

namespace pcontact {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Solved {
    double lambda;
    double residual;
    double f_lambda;
    int iters;
};

class BranchSolver {
public:
    BranchSolver(const CoupledSystem& sys, const TrackOptions& opts) : sys_(sys), opts_(opts) {}

    Solved solve(double x, double seed, double hint_width) const {
        const Interval iv = sys_.working_interval();
        if (!iv.contains(seed)) {
            std::ostringstream os;
            os << "seed " << seed << " for x = " << x << " left the working interval";
            throw Error(ErrorKind::LeftInterval, os.str(), seed);
        }
        auto f = [&](double l) { return char_fn(sys_, l, x); };

        // Grow a bracket around the seed until F changes sign.
        double w = std::max(hint_width, 1e-12 * std::max(1.0, std::abs(seed)));
        double lo = seed - w, hi = seed + w;
        double flo = 0.0, fhi = 0.0;
        bool found = false;
        for (int k = 0; k < 80; ++k) {
            if (!iv.contains(lo) || !iv.contains(hi)) {
                std::ostringstream os;
                os << "bracket around " << seed << " reached the edge of the working interval";
                throw Error(ErrorKind::LeftInterval, os.str(), seed);
            }
            flo = f(lo);
            fhi = f(hi);
            if (flo == 0.0 || fhi == 0.0 || (flo > 0.0) != (fhi > 0.0)) {
                found = true;
                break;
            }
            w *= 2.0;
            lo = seed - w;
            hi = seed + w;
        }
        if (!found) throw Error(ErrorKind::BracketLost, "no sign change of F near the seed", seed);

        double lambda = seed;
        int iters = 0;
        bool converged = false;
        if (flo == 0.0) {
            lambda = lo;
            converged = true;
        } else if (fhi == 0.0) {
            lambda = hi;
            converged = true;
        }
        const bool lo_positive = flo > 0.0;

        while (!converged && iters < opts_.max_newton_iters) {
            ++iters;
            const double fv = f(lambda);
            if (std::abs(fv) <= 4.0 * kEps * char_fn_scale(sys_, lambda, x)) {
                converged = true;
                break;
            }
            if ((fv > 0.0) == lo_positive)
                lo = lambda;
            else
                hi = lambda;

            const double fp = char_fn_dlambda(sys_, lambda, x);
            double next = (fp != 0.0) ? lambda - fv / fp : std::numeric_limits<double>::quiet_NaN();
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);

            const double step = std::abs(next - lambda);
            lambda = next;
            if (step <= 2.0 * kEps * std::max(1.0, std::abs(lambda)) || hi - lo <= 4.0 * kEps * std::max(1.0, std::abs(lambda)))
                converged = true;
        }

        const double residual = std::abs(f(lambda));
        if (!converged || residual > opts_.tol.root_tol * char_fn_scale(sys_, lambda, x)) {
            std::ostringstream os;
            os << "Newton did not converge at x = " << x << " (last iterate " << lambda << ", |F| = " << residual << ")";
            throw Error(ErrorKind::NewtonDiverged, os.str(), lambda);
        }
        const double f_lambda = char_fn_dlambda(sys_, lambda, x);
        if (std::abs(f_lambda) < opts_.tol.simple_tol) {
            std::ostringstream os;
            os << "|F_lambda| = " << std::abs(f_lambda) << " at x = " << x << ": branch is not simple";
            throw Error(ErrorKind::NotSimple, os.str(), f_lambda);
        }
        return {lambda, residual, f_lambda, iters};
    }

private:
    const CoupledSystem& sys_;
    const TrackOptions& opts_;
};

struct LineFit {
    double intercept;
    double slope;
};

LineFit least_squares_line(const std::vector<double>& t, const std::vector<double>& y) {
    const double n = static_cast<double>(t.size());
    double mt = 0.0, my = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        mt += t[i];
        my += y[i];
    }
    mt /= n;
    my /= n;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += (t[i] - mt) * (t[i] - mt);
        sty += (t[i] - mt) * (y[i] - my);
    }
    const double slope = stt > 0.0 ? sty / stt : 0.0;
    return {my - slope * mt, slope};
}

}  // namespace

BranchTrace track_branch(const CoupledSystem& sys, double lambda0, const std::vector<double>& xs,
                         const TrackOptions& opts) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] >= 0.0) || !std::isfinite(xs[i]))
            throw Error(ErrorKind::InvalidArgument, "x values must be finite and nonnegative", xs[i]);
        if (i > 0 && !(xs[i] > xs[i - 1])) throw Error(ErrorKind::InvalidArgument, "x values must be strictly increasing", xs[i]);
    }

    BranchTrace trace;
    trace.lambda0 = lambda0;
    if (xs.empty()) return trace;

    check_hypotheses(sys, lambda0, opts.tol);
    const BranchSolver solver(sys, opts);

    double prev_x = 0.0;
    double prev_lambda = lambda0;
    // Slope dlambda/dx at the previous point, -F_x / F_lambda.
    std::optional<double> prev_slope = opts.seed_slope;

    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        // lambda(0) = lambda0 by definition; it is kept in trace.lambda0, not as a sample.
        if (x == 0.0) continue;
        const double seed = prev_lambda + prev_slope.value_or(0.0) * (x - prev_x);
        const double hint = std::max(std::abs(seed - prev_lambda), 1e-12);
        const Solved s = solver.solve(x, seed, 1e-3 * hint);
        trace.samples.push_back({x, s.lambda, s.residual, s.f_lambda, s.iters});

        prev_slope = -char_fn_dx(sys, s.lambda, x) / s.f_lambda;
        prev_x = x;
        prev_lambda = s.lambda;
    }
    try {
        trace.fitted = fit_coefficients(trace, sys.dim() == 1 ? 2 : 1);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientSamples) throw;
    }
    return trace;
}

std::vector<double> geometric_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1 || !std::isfinite(hi))
        throw Error(ErrorKind::InvalidArgument, "geometric grid needs 0 < lo <= hi and per_decade >= 1");
    const auto n = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) grid.push_back(lo * std::pow(10.0, static_cast<double>(k) / per_decade));
    grid.back() = hi;
    if (n == 0) grid = {lo};
    return grid;
}

double remainder_noise_floor(double lambda0) { return 256.0 * kEps * std::max(1.0, std::abs(lambda0)); }

double remainder_slope(const std::vector<double>& xs, const std::vector<double>& remainders, double noise_floor) {
    std::vector<double> kx, kr;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] > 0.0 && std::abs(remainders[i]) > noise_floor) {
            kx.push_back(xs[i]);
            kr.push_back(std::abs(remainders[i]));
        }
    }
    if (kx.size() < 3)
        throw Error(ErrorKind::InsufficientSamples, "fewer than three remainders above the round-off floor");

    const double decade_end = 10.0 * kx.front() * (1.0 + 1e-9);
    std::vector<double> lx, lr;
    for (std::size_t i = 0; i < kx.size(); ++i) {
        if (kx[i] > decade_end && lx.size() >= 3) break;
        lx.push_back(std::log(kx[i]));
        lr.push_back(std::log(kr[i]));
    }
    return least_squares_line(lx, lr).slope;
}

FittedCoefficients fit_coefficients(const BranchTrace& trace, int order, const std::optional<ExpansionResult>& reference) {
    if (order != 1 && order != 2) throw Error(ErrorKind::InvalidArgument, "fit order must be 1 or 2");
    if (reference && (reference->order < order || (order == 2 && !reference->b)))
        throw Error(ErrorKind::InvalidArgument, "reference expansion is of lower order than the fit");

    std::vector<double> xs, ys;
    for (const auto& s : trace.samples) {
        if (s.x > 0.0) {
            xs.push_back(s.x);
            ys.push_back(s.lambda);
        }
    }
    if (xs.size() < 4 || xs.back() < 10.0 * xs.front() * (1.0 - 1e-12))
        throw Error(ErrorKind::InsufficientSamples, "need at least 4 samples spanning one decade of x");

    std::vector<double> ratio(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ratio[i] = (ys[i] - trace.lambda0) / xs[i];

    FittedCoefficients fit;
    if (order == 1) {
        const double decade_end = 10.0 * xs.front() * (1.0 + 1e-9);
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < xs.size() && xs[i] <= decade_end; ++i, ++count) sum += ratio[i];
        fit.a_hat = sum / static_cast<double>(count);
    } else {
        const LineFit lf = least_squares_line(xs, ratio);
        fit.a_hat = lf.intercept;
        fit.b_hat = lf.slope;
    }

    ExpansionResult expansion;
    if (reference) {
        expansion = *reference;
    } else {
        expansion.lambda0 = trace.lambda0;
        expansion.a = fit.a_hat;
        expansion.b = fit.b_hat;
    }
    expansion.order = order;

    std::vector<double> rem(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) rem[i] = ys[i] - evaluate_expansion(expansion, xs[i]);
    fit.remainder_slope = remainder_slope(xs, rem, remainder_noise_floor(trace.lambda0));
    return fit;
}

}  // namespace pcontact
