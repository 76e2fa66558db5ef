#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "fracnet/timenet.hpp"

using namespace fracnet;

TEST_CASE("equidistant knots") {
    TimeNet net = equidistant(4);
    REQUIRE(net.knots.size() == 5);
    CHECK(net.knots[0] == 0.0);
    CHECK(net.knots[2] == 0.5);
    CHECK(net.knots[4] == 1.0);
    CHECK(net.steps() == 4);
}

TEST_CASE("theta net closed form") {
    TimeNet net = theta_net(4, 0.5);
    // 1 - (1 - i/4)^2
    CHECK(net.knots[0] == 0.0);
    CHECK(net.knots[1] == doctest::Approx(0.4375).epsilon(1e-15));
    CHECK(net.knots[2] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(net.knots[3] == doctest::Approx(0.9375).epsilon(1e-15));
    CHECK(net.knots[4] == 1.0);
}

TEST_CASE("theta = 1 reduces to the equidistant net exactly") {
    for (std::size_t n : {3ul, 7ul, 64ul})
        CHECK(theta_net(n, 1.0).knots == equidistant(n).knots);
}

TEST_CASE("theta net rejects bad arguments") {
    CHECK_THROWS_AS(theta_net(0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(theta_net(4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(theta_net(4, 1.5), std::invalid_argument);
}

TEST_CASE("mesh bound 1/(theta n) holds for all n up to 1024") {
    for (int k = 1; k <= 10; ++k) {
        double theta = k / 10.0;
        for (std::size_t n = 1; n <= 1024; ++n) {
            double mesh = theta_net_mesh(n, theta);
            double bound = 1.0 / (theta * static_cast<double>(n));
            // bound holds in exact arithmetic; a few ulps cover expm1/log
            CHECK(mesh <= bound * (1.0 + 8.0 * std::numeric_limits<double>::epsilon()));
        }
    }
}

TEST_CASE("stable mesh agrees with the knot-based mesh away from the horizon") {
    for (std::size_t n : {4ul, 16ul, 64ul})
        for (double theta : {0.5, 0.8, 1.0}) {
            double a = theta_net_mesh(n, theta);
            double b = mesh_theta(theta_net(n, theta), theta);
            CHECK(a == doctest::Approx(b).epsilon(1e-10));
        }
}

TEST_CASE("a tampered exponent breaks the mesh bound") {
    // the off-by-one net 1 - (1-i/n)^{1/theta + 1} must violate 1/(theta n)
    std::size_t n = 64;
    double theta = 0.5;
    TimeNet bad;
    bad.knots.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        double frac = 1.0 - static_cast<double>(i) / static_cast<double>(n);
        bad.knots[i] = 1.0 - std::pow(frac, 1.0 / theta + 1.0);
    }
    bad.knots[0] = 0.0;
    bad.knots[n] = 1.0;
    CHECK(mesh_theta(bad, theta) > 1.0 / (theta * static_cast<double>(n)));
}

TEST_CASE("equidistant theta-mesh equals n^-theta") {
    for (std::size_t n : {2ul, 8ul, 128ul, 1024ul})
        for (int k = 1; k <= 10; ++k) {
            double theta = k / 10.0;
            CHECK(std::abs(mesh_theta(equidistant(n), theta) -
                           std::pow(static_cast<double>(n), -theta)) <= 1e-12);
        }
}

TEST_CASE("ordinary mesh of the theta net is the last interval") {
    TimeNet net = theta_net(8, 0.5);
    double last = net.knots[8] - net.knots[7];
    double first = net.knots[1] - net.knots[0];
    CHECK(mesh_theta(net, 1.0) == doctest::Approx(first).epsilon(1e-15));
    CHECK(last < first);
}

TEST_CASE("random net realization snaps to the grid and terminates at 1") {
    DiffusionModel bm{ProcessKind::BrownianMotion, 1};
    TimeGrid grid = TimeGrid::refined({0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, 10);
    std::vector<double> w(grid.size(), 0.0);

    AdaptiveNetRule rule;
    rule.max_steps = 16;
    rule.step = [](double t_prev, const Eigen::VectorXd&) { return t_prev + 0.3; };
    TimeNet net = realize_random_net(rule, bm, grid, w);
    CHECK(net.knots.front() == 0.0);
    CHECK(net.knots.back() == 1.0);
    for (std::size_t i = 1; i < net.knots.size(); ++i) {
        CHECK(net.knots[i] > net.knots[i - 1]);
        CHECK(grid.contains(net.knots[i]));
    }

    AdaptiveNetRule bad;
    bad.max_steps = 4;
    bad.step = [](double t_prev, const Eigen::VectorXd&) { return t_prev; };
    CHECK_THROWS_AS(realize_random_net(bad, bm, grid, w), std::invalid_argument);
}

TEST_CASE("lower mesh bound: (1-t_{i-1})^{1-theta} / dt_i <= beta n") {
    // single measured constant across the whole (n, theta) grid
    double beta = 0.0;
    for (std::size_t n : {2ul, 8ul, 64ul, 256ul, 1024ul})
        for (int k = 1; k <= 10; ++k) {
            double theta = k / 10.0;
            TimeNet net = theta_net(n, theta);
            for (std::size_t i = 1; i <= n; ++i) {
                // stable per-interval form of the same ratio
                double a = (static_cast<double>(n) - static_cast<double>(i) + 1.0) /
                           static_cast<double>(n);
                double b = (static_cast<double>(n) - static_cast<double>(i)) /
                           static_cast<double>(n);
                double dt = (i == n || theta == 1.0)
                                ? std::pow(a, 1.0 / theta) - std::pow(b, 1.0 / theta)
                                : -std::pow(a, 1.0 / theta) *
                                      std::expm1(std::log(b / a) / theta);
                double ratio = std::pow(a, (1.0 - theta) / theta) / dt;
                beta = std::max(beta, ratio / static_cast<double>(n));
            }
        }
    CHECK(beta >= 1.0);  // attained on the last interval
    CHECK(beta <= 1.0 + 1e-9);
}

TEST_CASE("step-halving rule realizes (0, 0.5, 0.75, 1)") {
    DiffusionModel bm{ProcessKind::BrownianMotion, 1};
    TimeGrid grid = TimeGrid::refined({0.0, 1.0}, 10);
    std::vector<double> w(grid.size(), 0.0);
    AdaptiveNetRule rule;
    rule.max_steps = 3;
    rule.step = [](double t_prev, const Eigen::VectorXd&) {
        return t_prev + 0.5 * (1.0 - t_prev);
    };
    TimeNet net = realize_random_net(rule, bm, grid, w);
    REQUIRE(net.knots.size() == 4);
    CHECK(net.knots[1] == 0.5);
    CHECK(net.knots[2] == 0.75);
    CHECK(net.knots[3] == 1.0);
}
