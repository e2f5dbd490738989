#include "doctest.h"

#include "oracles.hpp"
#include "pcontact/continuation.hpp"
#include "pcontact/error.hpp"
#include "pcontact/perturbation.hpp"

using namespace pcontact;

namespace {

WeylModel point(std::vector<double> q) { return make_point_interaction(HermitianMatrix::from_real_diagonal(q)); }
WeylModel identity_model() { return make_scalar_rational({{0.0, 1.0}, {1.0}}, Interval{}); }

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::ConfigError;
}

}  // namespace

TEST_CASE("geometric grid") {
    const auto g = geometric_grid(1e-6, 1e-3, 8);
    REQUIRE(g.size() == 25);
    CHECK(g.front() == 1e-6);
    CHECK(g.back() == doctest::Approx(1e-3).epsilon(1e-14));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("toy branch follows the exact root") {
    const CoupledSystem s(identity_model(), identity_model(), {0.0, 1.0, 0.0, 1});
    std::vector<double> xs = geometric_grid(1e-6, 1e-1, 6);
    xs.insert(xs.begin(), 0.0);
    const BranchTrace t = track_branch(s, 1.0, xs);
    REQUIRE(t.samples.size() == xs.size() - 1);
    CHECK(t.samples.front().x > 0.0);
    CHECK(t.lambda0 == 1.0);
    REQUIRE(t.fitted);
    CHECK(t.fitted->a_hat == doctest::Approx(1.0).epsilon(1e-3));
    for (const auto& smp : t.samples) {
        CHECK(std::abs(smp.lambda - oracle::toy_root(smp.x)) <= 1e-10);
        CHECK(smp.newton_iters <= 60);
    }
}

TEST_CASE("fitted coefficients on the toy branch") {
    const CoupledSystem s(identity_model(), identity_model(), {0.0, 1.0, 0.0, 1});
    const ExpansionResult r = expansion(s, 1.0);
    const BranchTrace t = track_branch(s, 1.0, geometric_grid(1e-6, 1e-3, 8));
    const auto f1 = fit_coefficients(t, 1, r);
    const auto f2 = fit_coefficients(t, 2, r);
    CHECK(f1.a_hat == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(f2.a_hat == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(*f2.b_hat == doctest::Approx(-1.0).epsilon(1e-2));
    CHECK(f1.remainder_slope == doctest::Approx(2.0).epsilon(0.1));
    CHECK(f2.remainder_slope == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("reference d=1 branch") {
    const CoupledSystem s(point({0.0}), point({0.0}), {-1.0, -2.0, 0.0, 1});
    const ExpansionResult r = expansion(s, -4.0);
    const BranchTrace t = track_branch(s, -4.0, geometric_grid(1e-6, 1e-3, 8), {.tol = {}, .seed_slope = r.a});
    for (const auto& smp : t.samples) {
        CHECK(std::abs(smp.lambda - evaluate_expansion(r, smp.x)) <= 10.0 * smp.x * smp.x * smp.x + 1e-13);
        CHECK(smp.f_lambda != 0.0);
    }
    const auto f2 = fit_coefficients(t, 2, r);
    CHECK(std::abs(f2.a_hat + 4.0) <= 1e-4);
    CHECK(std::abs(*f2.b_hat - 3.0) <= 1e-2);
}

TEST_CASE("the branch is continuous and monotone for a < 0") {
    const CoupledSystem s(point({0.0, 0.0}), point({0.0, 5.0}), {-1.0, -2.0, 0.0, 2});
    const BranchTrace t = track_branch(s, -4.0, geometric_grid(1e-5, 1e-1, 10));
    for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].lambda < t.samples[i - 1].lambda);
}

TEST_CASE("input validation") {
    const CoupledSystem s(point({0.0}), point({0.0}), {-1.0, -2.0, 0.0, 1});
    const BranchTrace empty = track_branch(s, -4.0, {});
    CHECK(empty.samples.empty());
    CHECK_FALSE(empty.fitted);
    CHECK(kind_of([&] { track_branch(s, -4.0, {1e-3, 1e-4}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { track_branch(s, -4.0, {-1e-3}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { track_branch(s, -3.0, {1e-3}); }) == ErrorKind::NotEigenvalue);
}

TEST_CASE("branch leaving the interval is reported") {
    // The eigenvalue -0.25 sits close to the threshold 0 and a > 0 pushes it up.
    const CoupledSystem s(point({5.0}), point({0.0}), {-3.0, -0.5, 0.0, 1});
    const ExpansionResult r = expansion(s, -0.25);
    REQUIRE(r.a > 0.0);
    const auto err = kind_of([&] { track_branch(s, -0.25, {0.1, 1.0, 10.0, 100.0}); });
    CHECK((err == ErrorKind::LeftInterval || err == ErrorKind::BracketLost));
}

TEST_CASE("fit needs enough samples") {
    const CoupledSystem s(point({0.0}), point({0.0}), {-1.0, -2.0, 0.0, 1});
    const BranchTrace t = track_branch(s, -4.0, {1e-4, 2e-4, 3e-4});
    CHECK(kind_of([&] { fit_coefficients(t, 1); }) == ErrorKind::InsufficientSamples);
    const BranchTrace narrow = track_branch(s, -4.0, {1e-4, 2e-4, 3e-4, 4e-4, 5e-4});
    CHECK(kind_of([&] { fit_coefficients(narrow, 1); }) == ErrorKind::InsufficientSamples);
}

TEST_CASE("remainder slope ignores round-off dominated points") {
    std::vector<double> xs, rems;
    for (double x : geometric_grid(1e-6, 1e-3, 8)) {
        xs.push_back(x);
        rems.push_back(std::max(6.0 * x * x * x, 1e-16));
    }
    CHECK(remainder_slope(xs, rems, 1e-15) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(kind_of([&] { remainder_slope(xs, rems, 1.0); }) == ErrorKind::InsufficientSamples);
}

TEST_CASE("single-point solves") {
    const CoupledSystem toy(identity_model(), identity_model(), {0.0, 1.0, 0.0, 1});
    CHECK(track_branch(toy, 1.0, {0.01}).samples.front().lambda == doctest::Approx(oracle::toy_root(0.01)).epsilon(1e-14));
    const CoupledSystem ref(point({0.0}), point({0.0}), {-1.0, -2.0, 0.0, 1});
    const BranchSample s = track_branch(ref, -4.0, {1e-4}).samples.front();
    CHECK(std::abs(s.lambda - (-4.0 - 4e-4 + 3e-8)) < 1e-11);
    CHECK(s.residual <= 1e-12);
}
