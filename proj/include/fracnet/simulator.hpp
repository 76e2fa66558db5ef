#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracnet/model.hpp"
#include "fracnet/payoff.hpp"
#include "fracnet/timenet.hpp"

namespace fracnet {

/// Monte Carlo L_p estimate with bootstrap uncertainty.
struct LpEstimate {
    double p = 2.0;
    double value = 0.0;
    double std_err = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    std::size_t non_finite = 0;  // samples dropped as NaN/inf
    bool low_p_warning = false;  // p < 2 accepted but outside the theory
};

/// Trading weights v at the net knots.
struct Strategy {
    enum class Kind { GradientAtKnot, Zero, Custom };
    Kind kind = Kind::GradientAtKnot;
    /// used when kind == Custom; must depend on (t, Y_t) at the knot only
    std::function<Eigen::RowVectorXd(double, const Eigen::VectorXd&)> custom;

    static Strategy gradient() { return {Kind::GradientAtKnot, nullptr}; }
    static Strategy zero() { return {Kind::Zero, nullptr}; }
};

struct ErrorSample {
    double c_simple = 0.0;
    std::optional<double> c_strategy;
    double sq_fn = 0.0;
    TimeNet net_used;
};

/// Stochastic integral of one path, realized via the exact identity
/// g(Y_1) - G(0, Y_0) (no time discretization).
double exact_integral(const Payoff& payoff, const DiffusionModel& model, const TimeGrid& grid,
                      std::span<const double> w_path);

/// sum_i v_{t_{i-1}} (Y_{t_i} - Y_{t_{i-1}}); net knots must lie on the grid.
double riemann_sum(const Payoff& payoff, const DiffusionModel& model, const TimeGrid& grid,
                   std::span<const double> w_path, const TimeNet& net,
                   const Strategy& strategy);

/// Error process value at t = 1 together with the square-function
/// (sum_i int (t_i - t) H_G^2(t, Y_t) dt)^{1/2} evaluated on the fine grid.
ErrorSample error_sample(const Payoff& payoff, const DiffusionModel& model,
                         const TimeGrid& grid, std::span<const double> w_path,
                         const TimeNet& net, const Strategy& strategy);

/// (mean |X|^p)^{1/p} with a seeded bootstrap standard error (B = 200).
LpEstimate lp_norm_from_samples(std::span<const double> samples, double p,
                                std::uint64_t seed);

/// Convenience wrapper: evaluates sampler(path) for path = 0..n_paths-1 in
/// parallel (counter-based streams keep the result worker-independent).
LpEstimate lp_norm_mc(const std::function<double(std::size_t)>& sampler, double p,
                      std::size_t n_paths, std::uint64_t seed);

/// Per-path c (simple error) and optionally sq_fn across a seeded batch,
/// generated path by path without materializing the whole batch.
struct ErrorBatch {
    std::vector<double> c;
    std::vector<double> sq;
};
ErrorBatch simulate_errors(const Payoff& payoff, const DiffusionModel& model,
                           const TimeGrid& grid, const TimeNet& net, const Strategy& strategy,
                           std::size_t n_paths, std::uint64_t seed, bool with_sq = false);

/// Same with a predictable random-net rule realized per path.
ErrorBatch simulate_errors_random_net(const Payoff& payoff, const DiffusionModel& model,
                                      const TimeGrid& grid, const AdaptiveNetRule& rule,
                                      const Strategy& strategy, std::size_t n_paths,
                                      std::uint64_t seed, bool with_sq = false);

struct NetSpec {
    std::string family = "equidistant";  // equidistant | theta
    std::size_t n = 1;
    double theta = 1.0;

    TimeNet build() const;
};

struct EquivalenceEntry {
    NetSpec net;
    LpEstimate c_norm;
    LpEstimate sq_norm;
    double ratio = 0.0;
    bool guarded = false;  // denominator below 10x its std_err
};

/// r(n) = ||C_1||_p / ||sq_fn||_p per net, with MC error bars.
std::vector<EquivalenceEntry> equivalence_ratio(const Payoff& payoff,
                                                const DiffusionModel& model,
                                                std::span<const NetSpec> nets, double p,
                                                std::size_t n_paths, std::uint64_t seed);

struct StrategyComparison {
    std::vector<std::string> names;
    std::vector<LpEstimate> norms;
    std::size_t gradient_index = 0;
    bool gradient_near_optimal = false;  // min <= gradient + 3 std_err
};

StrategyComparison strategy_comparison(const Payoff& payoff, const DiffusionModel& model,
                                       const TimeNet& net, double p,
                                       const std::vector<std::pair<std::string, Strategy>>& strategies,
                                       std::size_t n_paths, std::uint64_t seed);

}  // namespace fracnet
