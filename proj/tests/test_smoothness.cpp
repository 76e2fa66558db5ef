#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracnet/math.hpp"
#include "fracnet/smoothness.hpp"

using namespace fracnet;

namespace {

// low points plus geometric accumulation at the horizon
std::vector<double> horizon_grid(int j_max = 13) {
    std::vector<double> g{0.0, 0.1, 0.25, 0.5, 0.75};
    for (int j = 3; j <= j_max; ++j) g.push_back(1.0 - std::pow(2.0, -j));
    return g;
}

// || 1_{W_1 >= 0} - F(t, W_t) ||_2 in closed form
double binary_d0(double t) {
    return std::sqrt(0.25 - std::asin(t) / (2.0 * std::numbers::pi));
}

double binary_d1(double t) {
    return std::pow(2.0 * std::numbers::pi, -0.5) * std::pow((1.0 - t) * (1.0 + t), -0.25);
}

}  // namespace

TEST_CASE("identity curves in closed form") {
    std::vector<double> grid = horizon_grid();
    SmoothnessCurve c = smoothness_curves(make_identity(ProcessKind::BrownianMotion), 2.0,
                                          grid, 0, 1);
    CHECK(c.method == CurveMethod::Quadrature);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(c.d0[i] == doctest::Approx(std::sqrt(1.0 - grid[i])).epsilon(1e-9));
        CHECK(c.d1[i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c.d2[i] <= 1e-12);
    }
}

TEST_CASE("binary curves match the bivariate-normal closed forms") {
    std::vector<double> grid = horizon_grid();
    SmoothnessCurve c =
        smoothness_curves(make_binary(ProcessKind::BrownianMotion, 0.0), 2.0, grid, 0, 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK_MESSAGE(std::abs(c.d0[i] - binary_d0(grid[i])) <= 1e-8, "t=", grid[i],
                      " d0=", c.d0[i], " oracle=", binary_d0(grid[i]));
        CHECK(c.d1[i] == doctest::Approx(binary_d1(grid[i])).epsilon(1e-8));
    }
}

TEST_CASE("theta fit recovers known decay rates") {
    std::vector<double> grid = horizon_grid();

    SmoothnessCurve binary =
        smoothness_curves(make_binary(ProcessKind::BrownianMotion, 0.0), 2.0, grid, 0, 1);
    ThetaFit fb = fit_theta(binary);
    CHECK(std::abs(fb.theta_hat - 0.5) <= 0.05);
    CHECK(!fb.boundary);
    CHECK(fb.theta_hi - fb.theta_lo < 0.2);

    SmoothnessCurve id =
        smoothness_curves(make_identity(ProcessKind::BrownianMotion), 2.0, grid, 0, 1);
    CHECK(fit_theta(id).boundary);

    // synthetic exact power (1-t)^{0.35} -> theta = 0.7 with a tight band
    SmoothnessCurve synth;
    synth.p = 2.0;
    synth.t_grid = grid;
    for (double t : grid) {
        synth.d0.push_back(std::pow(1.0 - t, 0.35));
        synth.d1.push_back(1.0);
        synth.d2.push_back(1.0);
    }
    ThetaFit fs = fit_theta(synth);
    CHECK(fs.theta_hat == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(fs.theta_hi - fs.theta_lo <= 1e-8);
    CHECK(fs.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("theta fit validates its window") {
    SmoothnessCurve tiny;
    tiny.t_grid = {0.91, 0.92, 0.93};
    tiny.d0 = {0.3, 0.28, 0.26};
    CHECK_THROWS_AS(fit_theta(tiny), std::invalid_argument);
    SmoothnessCurve c;
    CHECK_THROWS_AS(fit_theta(c, 0.99, 0.5), std::invalid_argument);
}

TEST_CASE("besov proxies split at theta = 1/2 for the binary payoff") {
    Payoff binary = make_binary(ProcessKind::BrownianMotion, 0.0);
    std::vector<double> grid = horizon_grid(19);
    SmoothnessCurve c = smoothness_curves(binary, 2.0, grid, 0, 1);

    CHECK(!besov_proxy_norm(c, binary, 0.2, 2.0, 0).divergent);
    CHECK(besov_proxy_norm(c, binary, 0.8, 2.0, 0).divergent);

    // q = inf at the critical exponent: sup of (1-t)^{-1/4} d0 sits at t = 0
    BesovProxy sup = besov_proxy_norm(c, binary, 0.5, kInfinity, 0);
    CHECK(!sup.divergent);
    CHECK(sup.weighted.value == doctest::Approx(0.5).epsilon(1e-6));
    // the t -> 1 limit of the weighted curve is 2^{1/4} / sqrt(2 pi)
    double limit = std::pow(2.0, 0.25) / std::sqrt(2.0 * std::numbers::pi);
    CHECK(sup.weighted.value > limit);

    CHECK(sup.f_norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
    CHECK(sup.value == doctest::Approx(sup.weighted.value + sup.f_norm).epsilon(1e-15));

    // the gradient proxy carries weight (1-t)^{(1-theta)/2}: same split
    CHECK(!besov_proxy_norm(c, binary, 0.4, 2.0, 1).divergent);
    CHECK(besov_proxy_norm(c, binary, 0.9, 2.0, 1).divergent);

    CHECK_THROWS_AS(besov_proxy_norm(c, binary, 0.5, 2.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(besov_proxy_norm(c, binary, -0.1, 2.0, 0), std::invalid_argument);
}

TEST_CASE("fractional integral of the quadratic is exactly 2 at theta = 1") {
    DiffusionModel bm{ProcessKind::BrownianMotion, 1};
    RLNorm rl = riemann_liouville_norm(make_quadratic(), bm, 1.0, 2.0, 200, 3);
    CHECK(rl.estimate.value == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rl.estimate.std_err <= 1e-10);
    CHECK(!rl.divergent);
    CHECK(rl.divergent_paths == 0);
}

TEST_CASE("fractional integral dichotomy for the binary payoff") {
    DiffusionModel bm{ProcessKind::BrownianMotion, 1};
    Payoff binary = make_binary(ProcessKind::BrownianMotion, 0.0);
    // boundary sits at theta = 1/p
    CHECK(!riemann_liouville_norm(binary, bm, 0.3, 2.0, 400, 5).divergent);
    CHECK(riemann_liouville_norm(binary, bm, 0.7, 2.0, 400, 5).divergent);
    CHECK(!riemann_liouville_norm(binary, bm, 0.2, 4.0, 400, 5).divergent);
    CHECK(riemann_liouville_norm(binary, bm, 0.3, 4.0, 400, 5).divergent);
    CHECK_THROWS_AS(riemann_liouville_norm(binary, bm, 0.0, 2.0, 10, 1),
                    std::invalid_argument);
}

TEST_CASE("derivative ratios stay bounded for the binary payoff") {
    std::vector<double> grid = horizon_grid(19);
    SmoothnessCurve c =
        smoothness_curves(make_binary(ProcessKind::BrownianMotion, 0.0), 2.0, grid, 0, 1);
    DerivativeBoundReport rep = derivative_bound_check(c);
    CHECK(rep.finite);
    CHECK(rep.n_used == grid.size());
    CHECK(rep.sup_d1_ratio > 0.0);
    CHECK(rep.sup_d1_ratio < 10.0);
    CHECK(rep.sup_d2_ratio < 10.0);
}

TEST_CASE("multivariate payoffs fall back to flagged Monte Carlo") {
    Payoff id = make_identity(ProcessKind::BrownianMotion);
    Payoff prod = make_product({id, id});
    std::vector<double> grid{0.25, 0.5, 0.75};
    SmoothnessCurve c = smoothness_curves(prod, 2.0, grid, 20000, 9);
    CHECK(c.method == CurveMethod::MonteCarlo);
    REQUIRE(c.std_err.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double t = grid[i];
        // W^1_1 W^2_1 - W^1_t W^2_t has variance (1-t)(1+t)
        double oracle = std::sqrt((1.0 - t) * (1.0 + t));
        CHECK_MESSAGE(std::abs(c.d0[i] - oracle) <= 5.0 * c.std_err[i] + 0.01,
                      "t=", t, " d0=", c.d0[i], " oracle=", oracle);
        // |grad F|^2 = (W^1_t)^2 + (W^2_t)^2 with mean 2t
        CHECK(c.d1[i] == doctest::Approx(std::sqrt(2.0 * t)).epsilon(0.05));
    }
}

TEST_CASE("curve grids are validated") {
    Payoff q = make_quadratic();
    std::vector<double> empty;
    CHECK_THROWS_AS(smoothness_curves(q, 2.0, empty, 0, 1), std::invalid_argument);
    std::vector<double> late{0.5, 1.0 - 1e-8};
    CHECK_THROWS_AS(smoothness_curves(q, 2.0, late, 0, 1), std::invalid_argument);
    std::vector<double> unsorted{0.5, 0.25};
    CHECK_THROWS_AS(smoothness_curves(q, 2.0, unsorted, 0, 1), std::invalid_argument);
}

TEST_CASE("the three weighted proxy norms agree within one constant") {
    // all three are finite for the binary at theta < 1/2 and must be
    // mutually comparable; 25 is a measured ceiling for the chain constant
    Payoff b = make_binary(ProcessKind::BrownianMotion, 0.0);
    std::vector<double> grid = horizon_grid(19);
    SmoothnessCurve c = smoothness_curves(b, 2.0, grid, 0, 1);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int which : {0, 1, 2}) {
        BesovProxy pr = besov_proxy_norm(c, b, 0.3, 2.0, which);
        CHECK(!pr.divergent);
        lo = std::min(lo, pr.value);
        hi = std::max(hi, pr.value);
    }
    CHECK(hi / lo <= 25.0);
}
