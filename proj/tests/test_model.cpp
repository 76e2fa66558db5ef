#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "fracnet/model.hpp"
#include "fracnet/rng.hpp"

using namespace fracnet;

TEST_CASE("start values per process") {
    DiffusionModel bm{ProcessKind::BrownianMotion, 3};
    DiffusionModel gbm{ProcessKind::GeometricBrownianMotion, 2};
    CHECK(bm.start().isZero());
    CHECK(gbm.start() == Eigen::VectorXd::Ones(2));
}

TEST_CASE("sigma is identity for bm and diag(y) for gbm") {
    DiffusionModel bm{ProcessKind::BrownianMotion, 2};
    Eigen::VectorXd y(2);
    y << -3.0, 5.0;
    CHECK(sigma(bm, y) == Eigen::MatrixXd::Identity(2, 2));

    DiffusionModel gbm{ProcessKind::GeometricBrownianMotion, 2};
    Eigen::VectorXd yp(2);
    yp << 0.5, 2.0;
    Eigen::MatrixXd s = sigma(gbm, yp);
    CHECK(s(0, 0) == 0.5);
    CHECK(s(1, 1) == 2.0);
    CHECK(s(0, 1) == 0.0);
    CHECK_THROWS_AS(sigma(gbm, y), std::domain_error);
}

TEST_CASE("coordinate map") {
    DiffusionModel gbm{ProcessKind::GeometricBrownianMotion, 1};
    Eigen::VectorXd w(1);
    w << 0.3;
    CHECK(map_w_to_y(gbm, 0.5, w)[0] == doctest::Approx(std::exp(0.3 - 0.25)).epsilon(1e-15));
    DiffusionModel bm{ProcessKind::BrownianMotion, 1};
    CHECK(map_w_to_y(bm, 0.5, w)[0] == 0.3);
}

TEST_CASE("time grid validation") {
    CHECK_THROWS_AS(TimeGrid({0.0, 0.5, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid({0.1, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid({0.0, 0.5}), std::invalid_argument);
    TimeGrid g({0.0, 0.25, 1.0});
    CHECK(g.size() == 3);
}

TEST_CASE("refined grid carries the geometric tail") {
    TimeGrid g = TimeGrid::refined({0.0, 0.3, 1.0}, 12);
    CHECK(g.contains(0.0));
    CHECK(g.contains(0.3));
    CHECK(g.contains(1.0));
    for (int j = 1; j <= 12; ++j) CHECK(g.contains(1.0 - std::pow(2.0, -j)));
    CHECK(g.index_of(0.3) > 0);
    CHECK_THROWS_AS(g.index_of(0.31), std::invalid_argument);
    CHECK(g.snap_up(0.29) == 0.3);
    CHECK(g.snap_up(0.3) == 0.3);
}

TEST_CASE("path sampling is seed-deterministic and worker-independent") {
    DiffusionModel bm{ProcessKind::BrownianMotion, 2};
    TimeGrid grid = TimeGrid::refined({0.0, 0.5, 1.0}, 8);

    setenv("FRACNET_THREADS", "1", 1);
    PathBatch a = simulate_paths(bm, grid, 500, 42);
    setenv("FRACNET_THREADS", "7", 1);
    PathBatch b = simulate_paths(bm, grid, 500, 42);
    unsetenv("FRACNET_THREADS");
    CHECK(a.w == b.w);

    PathBatch c = simulate_paths(bm, grid, 500, 43);
    CHECK(a.w != c.w);

    for (std::size_t i = 0; i < 500; ++i) {
        CHECK(a.w_at(i, 0, 0) == 0.0);
        CHECK(a.w_at(i, 0, 1) == 0.0);
    }
}

TEST_CASE("terminal marginal has the right first moments") {
    DiffusionModel bm{ProcessKind::BrownianMotion, 1};
    TimeGrid grid = TimeGrid::refined({0.0, 1.0}, 4);
    const std::size_t n = 200000;
    PathBatch batch = simulate_paths(bm, grid, n, 0);
    std::size_t last = grid.size() - 1;
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += batch.w_at(i, last, 0);
    mean /= n;
    for (std::size_t i = 0; i < n; ++i) {
        double d = batch.w_at(i, last, 0) - mean;
        var += d * d;
    }
    var /= n;
    // 3 sigma bands at 2e5 samples
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("increments are independent across intervals") {
    // covariance of disjoint increments vanishes
    DiffusionModel bm{ProcessKind::BrownianMotion, 1};
    TimeGrid grid = TimeGrid::refined({0.0, 0.5, 1.0}, 2);
    const std::size_t n = 100000;
    PathBatch batch = simulate_paths(bm, grid, n, 1);
    std::size_t mid = grid.index_of(0.5), last = grid.size() - 1;
    double cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double a = batch.w_at(i, mid, 0);
        double b = batch.w_at(i, last, 0) - batch.w_at(i, mid, 0);
        cov += a * b;
    }
    cov /= n;
    CHECK(std::abs(cov) < 3.0 * std::sqrt(0.25 / static_cast<double>(n)));
}

TEST_CASE("uniform variates stay inside the open interval") {
    for (std::uint64_t k : {0ull, 1ull, ~0ull, 0x123456789abcdefull}) {
        double u = rng::uniform(k);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("inverse normal round trip") {
    for (double p : {1e-10, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-10}) {
        double x = inv_norm_cdf(p);
        CHECK(norm_cdf(x) == doctest::Approx(p).epsilon(1e-12));
    }
}
