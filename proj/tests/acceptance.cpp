// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"
#include "pcontact/cli.hpp"
#include "pcontact/continuation.hpp"
#include "pcontact/error.hpp"
#include "pcontact/finite_difference.hpp"
#include "pcontact/perturbation.hpp"

using namespace pcontact;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

WeylModel point(std::vector<double> q) { return make_point_interaction(HermitianMatrix::from_real_diagonal(q)); }

std::string fmt(const char* f, auto... v) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, v...);
    return buf;
}

const std::vector<double> kGrid = geometric_grid(1e-6, 1e-3, 8);

Outcome reference_reproduction() {
    const auto t0 = std::chrono::steady_clock::now();
    const CoupledSystem s(point({0.0}), point({0.0}), {-1.0, -2.0, 0.0, 1});
    const double lambda0 = find_isolated_eigenvalue(detfun(s.hat(), -2.0), {-10.0, -1.0});
    const ExpansionResult r = expansion(s, lambda0);
    const BranchTrace t = track_branch(s, lambda0, kGrid, {.tol = {}, .seed_slope = r.a});
    const FittedCoefficients f = fit_coefficients(t, 2, r);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = std::abs(lambda0 + 4.0) <= 1e-12 && std::abs(r.a + 4.0) <= 1e-12 && std::abs(*r.b - 3.0) <= 1e-12 &&
                    std::abs(f.a_hat - r.a) <= 1e-4 && std::abs(*f.b_hat - *r.b) <= 1e-2 && secs < 1.0;
    return {ok, fmt("lambda0=%.15g a=%.15g b=%.15g |a_hat-a|=%.3g |b_hat-b|=%.3g runtime=%.3fs", lambda0, r.a, *r.b,
                    std::abs(f.a_hat - r.a), std::abs(*f.b_hat - *r.b), secs)};
}

Outcome remainder_orders() {
    const CoupledSystem s(point({0.0}), point({0.0}), {-1.0, -2.0, 0.0, 1});
    const ExpansionResult r = expansion(s, -4.0);
    const BranchTrace t = track_branch(s, -4.0, kGrid, {.tol = {}, .seed_slope = r.a});
    const double s1 = fit_coefficients(t, 1, r).remainder_slope;
    const double s2 = fit_coefficients(t, 2, r).remainder_slope;
    return {std::abs(s1 - 2.0) <= 0.2 && std::abs(s2 - 3.0) <= 0.3, fmt("slope1=%.4f slope2=%.4f", s1, s2)};
}

Outcome general_d() {
    const CoupledSystem s(point({0.0, 0.0}), point({0.0, 5.0}), {-1.0, -2.0, 0.0, 2});
    const ComplexMatrix adj = adjugate(ComplexMatrix::identity(2) * Complex(-2.0) - s.hat().eval(-4.0));
    const ComplexMatrix mp = s.hat().deriv1(-4.0);
    const ComplexMatrix inv = inverse(s.tilde().eval(-4.0) + ComplexMatrix::identity(2));
    const bool parts = adj.approx_equal(ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}, 1e-12) &&
                       mp.approx_equal(ComplexMatrix{{0.25, 0.0}, {0.0, 1.0 / 6.0}}, 1e-12) &&
                       inv.approx_equal(ComplexMatrix{{-1.0, 0.0}, {0.0, -1.0}}, 1e-12);
    const ExpansionResult r = expansion(s, -4.0);
    const BranchTrace t = track_branch(s, -4.0, kGrid, {.tol = {}, .seed_slope = r.a});
    const FittedCoefficients f = fit_coefficients(t, 1, r);
    const bool ok = parts && std::abs(r.a + 4.0) <= 1e-12 && std::abs(f.a_hat - r.a) <= 1e-4 &&
                    f.remainder_slope >= 1.8 && r.a < 0.0;
    return {ok, fmt("constituents=%s a=%.15g |a_hat-a|=%.3g slope=%.4f", parts ? "ok" : "bad", r.a,
                    std::abs(f.a_hat - r.a), f.remainder_slope)};
}

Outcome scalar_toy() {
    const WeylModel id = make_scalar_rational({{0.0, 1.0}, {1.0}}, Interval{});
    const CoupledSystem s(id, id, {0.0, 1.0, 0.0, 1});
    const ExpansionResult r = expansion(s, 1.0);
    // sqrt(1 + 4x) = 1 + 2x - 2x^2 + ...  so the root is 1 + x - x^2 + ...
    const double a_exact = 1.0, b_exact = -1.0;
    const BranchTrace t = track_branch(s, 1.0, kGrid);
    double worst = 0.0;
    for (const auto& smp : t.samples) worst = std::max(worst, std::abs(smp.lambda - oracle::toy_root(smp.x)));
    const bool ok = std::abs(r.a - a_exact) <= 1e-10 && std::abs(*r.b - b_exact) <= 1e-10 && worst <= 1e-10;
    return {ok, fmt("a=%.15g b=%.15g max|lambda_num-root|=%.3g", r.a, *r.b, worst)};
}

Outcome jacobi_identity() {
    std::mt19937_64 rng(901);
    std::vector<WeylModel> models;
    for (std::size_t d = 1; d <= 4; ++d) {
        models.push_back(make_point_interaction(HermitianMatrix(oracle::random_hermitian(rng, d))));
        const WeylModel exact = make_point_interaction(HermitianMatrix(oracle::random_hermitian(rng, d)));
        models.push_back(make_tabulated(d, [exact](double l) { return exact.eval(l); }, exact.valid_interval()));
    }
    models.push_back(make_scalar_rational({{0.3, 1.5}, {1.0}}, Interval{}));
    models.push_back(make_scalar_rational({{-2.0, 0.5, 1.0}, {-1.0, 1.0}}, Interval{1.0, 50.0}));
    models.push_back(make_scalar_rational({{-1.0}, {0.0, 1.0}}, Interval{0.0, 50.0}));

    double worst = 0.0;
    for (const auto& m : models) {
        const ExtensionSpectrumProbe probe(m, oracle::uniform(rng, -3.0, -0.5));
        const Interval iv = m.valid_interval();
        double lo = iv.lo, hi = iv.hi;
        if (!std::isfinite(lo) && !std::isfinite(hi)) {
            lo = -10.0;
            hi = 10.0;
        } else if (!std::isfinite(lo)) {
            lo = hi - 20.0;
        } else if (!std::isfinite(hi)) {
            hi = lo + 20.0;
        }
        for (int k = 0; k < 20; ++k) {
            const double lambda = oracle::uniform(rng, lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo));
            const Complex analytic = probe.derivative(lambda);
            const Complex numeric = fd::richardson_first([&](double l) { return probe.value(l); }, lambda, 1e-4);
            worst = std::max(worst, std::abs(analytic - numeric) / std::max(1.0, std::abs(numeric)));
        }
    }
    return {worst <= 1e-6, fmt("models=%zu max relative error=%.3g", models.size(), worst)};
}

Outcome silvester_and_phase() {
    std::mt19937_64 rng(902);
    double worst = 0.0, worst_phase = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 1 + trial % 4;
        const Complex omega(oracle::uniform(rng, -1.5, 1.5), oracle::uniform(rng, -1.5, 1.5));
        const CoupledSystem sys(make_point_interaction(HermitianMatrix(oracle::random_hermitian(rng, d))),
                                make_point_interaction(HermitianMatrix(oracle::random_hermitian(rng, d))),
                                {oracle::uniform(rng, -3.0, 1.0), oracle::uniform(rng, -3.0, 1.0), omega, d});
        const double lambda = sys.working_interval().hi - oracle::uniform(rng, 0.05, 6.0);
        const double x = std::norm(omega);
        const double bd = block_det(sys, lambda);
        worst = std::max(worst, std::abs(bd - char_fn(sys, lambda, x)) / char_fn_scale(sys, lambda, x));
        const double theta = oracle::uniform(rng, -3.14, 3.14);
        const double rotated = block_det(sys.with_omega(omega * std::polar(1.0, theta)), lambda);
        worst_phase = std::max(worst_phase, std::abs(rotated - bd) / std::max(1.0, std::abs(bd)));
    }
    return {worst <= 1e-10 && worst_phase <= 1e-12,
            fmt("max |block_det-F|/scale=%.3g max phase deviation=%.3g", worst, worst_phase)};
}

Outcome adjugate_laws() {
    std::mt19937_64 rng(903);
    double worst = 0.0;
    int singular = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const bool sing = trial % 2 == 1 && n > 1;
        singular += sing;
        const ComplexMatrix m1 = sing ? oracle::random_low_rank(rng, n, 1 + trial % (n - 1)) : oracle::random_matrix(rng, n);
        const ComplexMatrix m2 = oracle::random_matrix(rng, n);
        const ComplexMatrix eye = ComplexMatrix::identity(n);
        worst = std::max(worst, (m1 * adjugate(m1) - det(m1) * eye).max_norm());
        worst = std::max(worst, (adjugate(m1 * m2) - adjugate(m2) * adjugate(m1)).max_norm());
    }
    const double zero = std::abs(adjugate(ComplexMatrix::zeros(1))(0, 0) - Complex(1.0));
    return {worst <= 1e-9 && zero == 0.0, fmt("max deviation=%.3g singular cases=%d |adj(0)-1|=%g", worst, singular, zero)};
}

Outcome d1_consistency() {
    std::mt19937_64 rng(904);
    double worst = 0.0;
    int tested = 0;
    while (tested < 10) {
        // Linear hat model c + k lambda has its eigenvalue at (beta - c) / k.
        const double c = oracle::uniform(rng, -1.0, 1.0), k = oracle::uniform(rng, 0.5, 2.0);
        const double beta = oracle::uniform(rng, -2.0, 2.0);
        const double lambda0 = (beta - c) / k;
        const WeylModel hat = make_scalar_rational({{c, k}, {1.0}}, Interval{});
        const double gap = oracle::uniform(rng, 0.5, 3.0);
        const double pole = lambda0 - gap;
        const WeylModel tilde = tested % 2
                                    ? point({lambda0 + gap})
                                    : make_scalar_rational({{-1.0}, {-pole, 1.0}},
                                                           Interval{pole, std::numeric_limits<double>::infinity()});
        const double alpha = tilde.eval(lambda0)(0, 0).real() + oracle::uniform(rng, 0.3, 2.0) * (tested % 3 ? 1 : -1);
        const CoupledSystem s(tilde, hat, {alpha, beta, 0.0, 1});
        worst = std::max(worst, std::abs(coeff_a(s, lambda0).a - coeff_ab_scalar(s, lambda0).a));
        ++tested;
    }
    return {worst <= 1e-12, fmt("scenarios=%d max |a_general-a_scalar|=%.3g", tested, worst)};
}

Outcome hypothesis_enforcement() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("pcontact_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto pi = [](std::vector<double> q) { return nlohmann::json{{"kind", "point_interaction"}, {"q_eigenvalues", q}}; };
    struct Case {
        std::string name;
        nlohmann::json cfg;
        std::string expected;
    };
    const std::vector<Case> cases{
        {"double", {{"model_tilde", pi({1.0, 1.0})}, {"model_hat", pi({0.0, 0.0})}, {"alpha", -1}, {"beta", -2}, {"lambda0", -4}},
         "NotSimple"},
        {"resolvent", {{"model_tilde", pi({0.0})}, {"model_hat", pi({0.0})}, {"alpha", -2}, {"beta", -2}, {"lambda0", -4}},
         "NotResolventPoint"},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const std::string path = (dir / (c.name + ".json")).string();
        std::ofstream(path) << c.cfg.dump();
        for (const char* cmd : {"coeffs", "branch", "verify"}) {
            const char* argv[] = {"pcontact", cmd, "--config", path.c_str()};
            std::ostringstream out, err;
            const int code = cli::run(4, argv, out, err);
            const bool verify = std::string(cmd) == "verify";
            // verify reports the violation as a failed check instead of aborting.
            const bool good = verify ? (code == cli::kVerificationFailed && out.str().find(c.expected) != std::string::npos)
                                     : (code == cli::kHypothesisViolation && out.str().empty() &&
                                        err.str().find(c.expected) != std::string::npos);
            ok = ok && good;
            detail += c.name + "/" + cmd + "=" + std::to_string(code) + " ";
        }
    }
    fs::remove_all(dir);
    return {ok, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"reference d=1 reproduction", reference_reproduction},
        {"remainder orders", remainder_orders},
        {"general-d coefficient", general_d},
        {"scalar toy oracle", scalar_toy},
        {"Jacobi identity", jacobi_identity},
        {"block determinant identity and phase invariance", silvester_and_phase},
        {"adjugate laws", adjugate_laws},
        {"d=1 consistency", d1_consistency},
        {"hypothesis enforcement", hypothesis_enforcement},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    }
    return failed == 0 ? 0 : 1;
}
