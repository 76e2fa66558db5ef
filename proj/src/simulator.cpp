#include "fracnet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracnet/parallel.hpp"
#include "fracnet/quadrature.hpp"
#include "fracnet/rng.hpp"

namespace fracnet {

namespace {

Eigen::VectorXd w_at(std::span<const double> w_path, std::size_t knot, int dim) {
    Eigen::VectorXd w(dim);
    for (int k = 0; k < dim; ++k)
        w[k] = w_path[knot * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k)];
    return w;
}

Eigen::RowVectorXd strategy_weights(const Strategy& strategy, const Payoff& payoff,
                                    double t, const Eigen::VectorXd& y, int dim) {
    switch (strategy.kind) {
        case Strategy::Kind::GradientAtKnot:
            if (!payoff.analytic)
                throw std::invalid_argument("gradient strategy needs an analytic family");
            return payoff.analytic->grad(t, y);
        case Strategy::Kind::Zero:
            return Eigen::RowVectorXd::Zero(dim);
        case Strategy::Kind::Custom:
            return strategy.custom(t, y);
    }
    return Eigen::RowVectorXd::Zero(dim);
}

double sq_fn_value(const Payoff& payoff, const DiffusionModel& model, const TimeGrid& grid,
                   std::span<const double> w_path, const TimeNet& net) {
    const int d = model.dim;
    double total = 0.0;
    std::vector<double> ts, hs;
    for (std::size_t i = 1; i < net.knots.size(); ++i) {
        double a = net.knots[i - 1];
        double b = net.knots[i];
        std::size_t ja = grid.index_of(a);
        std::size_t jb = grid.index_of(b);
        ts.clear();
        hs.clear();
        for (std::size_t j = ja; j <= jb; ++j) {
            double t = grid[j];
            if (t >= 1.0) break;  // H_G singular at the horizon
            Eigen::VectorXd y = map_w_to_y(model, t, w_at(w_path, j, d));
            double h = h_value(payoff, model, t, y);
            ts.push_back(t);
            hs.push_back(h * h);
        }
        if (ts.empty()) continue;
        total += kernel_interval_integral(ts, hs, b);
    }
    return std::sqrt(std::max(total, 0.0));
}

double terminal_minus(const Payoff& payoff, const DiffusionModel& model, const TimeGrid& grid,
                      std::span<const double> w_path, double g0) {
    const int d = model.dim;
    std::size_t last = grid.size() - 1;
    Eigen::VectorXd y1 = map_w_to_y(model, 1.0, w_at(w_path, last, d));
    return payoff.g(y1) - g0;
}

}  // namespace

double exact_integral(const Payoff& payoff, const DiffusionModel& model, const TimeGrid& grid,
                      std::span<const double> w_path) {
    return terminal_minus(payoff, model, grid, w_path,
                          conditional_expectation(payoff, model, 0.0, model.start()));
}

double riemann_sum(const Payoff& payoff, const DiffusionModel& model, const TimeGrid& grid,
                   std::span<const double> w_path, const TimeNet& net,
                   const Strategy& strategy) {
    const int d = model.dim;
    double sum = 0.0;
    Eigen::VectorXd y_prev = map_w_to_y(model, net.knots[0],
                                        w_at(w_path, grid.index_of(net.knots[0]), d));
    for (std::size_t i = 1; i < net.knots.size(); ++i) {
        double t_prev = net.knots[i - 1];
        double t = net.knots[i];
        Eigen::VectorXd y = map_w_to_y(model, t, w_at(w_path, grid.index_of(t), d));
        Eigen::RowVectorXd v = strategy_weights(strategy, payoff, t_prev, y_prev, d);
        sum += v.dot(y - y_prev);
        y_prev = std::move(y);
    }
    return sum;
}

ErrorSample error_sample(const Payoff& payoff, const DiffusionModel& model,
                         const TimeGrid& grid, std::span<const double> w_path,
                         const TimeNet& net, const Strategy& strategy) {
    ErrorSample s;
    s.net_used = net;
    double exact = exact_integral(payoff, model, grid, w_path);
    double simple = riemann_sum(payoff, model, grid, w_path, net, Strategy::gradient());
    s.c_simple = exact - simple;
    if (strategy.kind != Strategy::Kind::GradientAtKnot)
        s.c_strategy = exact - riemann_sum(payoff, model, grid, w_path, net, strategy);
    s.sq_fn = sq_fn_value(payoff, model, grid, w_path, net);
    return s;
}

LpEstimate lp_norm_from_samples(std::span<const double> samples, double p,
                                std::uint64_t seed) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    LpEstimate est;
    est.p = p;
    est.seed = seed;
    est.n_paths = samples.size();
    est.low_p_warning = p < 2.0;

    std::vector<double> pow_abs;
    pow_abs.reserve(samples.size());
    for (double x : samples) {
        if (!std::isfinite(x)) {
            ++est.non_finite;
            continue;
        }
        pow_abs.push_back(std::pow(std::abs(x), p));
    }
    if (pow_abs.empty()) throw std::runtime_error("lp_norm: no finite samples");
    const std::size_t n = pow_abs.size();
    double mean = 0.0;
    for (double x : pow_abs) mean += x;
    mean /= static_cast<double>(n);
    est.value = std::pow(mean, 1.0 / p);

    constexpr std::size_t B = 200;
    rng::Stream stream(seed, 0x626f6f74ULL);  // bootstrap stream
    double bs_mean = 0.0, bs_m2 = 0.0;
    for (std::size_t b = 0; b < B; ++b) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += pow_abs[stream.next_index(n)];
        double v = std::pow(m / static_cast<double>(n), 1.0 / p);
        double delta = v - bs_mean;
        bs_mean += delta / static_cast<double>(b + 1);
        bs_m2 += delta * (v - bs_mean);
    }
    est.std_err = std::sqrt(bs_m2 / static_cast<double>(B - 1));
    return est;
}

LpEstimate lp_norm_mc(const std::function<double(std::size_t)>& sampler, double p,
                      std::size_t n_paths, std::uint64_t seed) {
    std::vector<double> samples(n_paths);
    parallel_for(n_paths, [&](std::size_t i) { samples[i] = sampler(i); });
    return lp_norm_from_samples(samples, p, seed);
}

ErrorBatch simulate_errors(const Payoff& payoff, const DiffusionModel& model,
                           const TimeGrid& grid, const TimeNet& net, const Strategy& strategy,
                           std::size_t n_paths, std::uint64_t seed, bool with_sq) {
    for (double t : net.knots)
        if (!grid.contains(t))
            throw std::invalid_argument("simulate_errors: net knot off the simulation grid");
    ErrorBatch batch;
    batch.c.resize(n_paths);
    if (with_sq) batch.sq.resize(n_paths);
    const double g0 = conditional_expectation(payoff, model, 0.0, model.start());
    const std::size_t stride = grid.size() * static_cast<std::size_t>(model.dim);
    parallel_for(n_paths, [&](std::size_t i) {
        thread_local std::vector<double> buf;
        buf.resize(stride);
        sample_path(model, grid, seed, i, buf);
        double exact = terminal_minus(payoff, model, grid, buf, g0);
        batch.c[i] = exact - riemann_sum(payoff, model, grid, buf, net, strategy);
        if (with_sq) batch.sq[i] = sq_fn_value(payoff, model, grid, buf, net);
    });
    return batch;
}

ErrorBatch simulate_errors_random_net(const Payoff& payoff, const DiffusionModel& model,
                                      const TimeGrid& grid, const AdaptiveNetRule& rule,
                                      const Strategy& strategy, std::size_t n_paths,
                                      std::uint64_t seed, bool with_sq) {
    ErrorBatch batch;
    batch.c.resize(n_paths);
    if (with_sq) batch.sq.resize(n_paths);
    const double g0 = conditional_expectation(payoff, model, 0.0, model.start());
    const std::size_t stride = grid.size() * static_cast<std::size_t>(model.dim);
    parallel_for(n_paths, [&](std::size_t i) {
        thread_local std::vector<double> buf;
        buf.resize(stride);
        sample_path(model, grid, seed, i, buf);
        TimeNet net = realize_random_net(rule, model, grid, buf);
        double exact = terminal_minus(payoff, model, grid, buf, g0);
        batch.c[i] = exact - riemann_sum(payoff, model, grid, buf, net, strategy);
        if (with_sq) batch.sq[i] = sq_fn_value(payoff, model, grid, buf, net);
    });
    return batch;
}

TimeNet NetSpec::build() const {
    if (family == "equidistant") return equidistant(n);
    if (family == "theta") return theta_net(n, theta);
    throw std::invalid_argument("NetSpec: unknown family " + family);
}

std::vector<EquivalenceEntry> equivalence_ratio(const Payoff& payoff,
                                                const DiffusionModel& model,
                                                std::span<const NetSpec> nets, double p,
                                                std::size_t n_paths, std::uint64_t seed) {
    std::vector<EquivalenceEntry> out;
    for (const NetSpec& spec : nets) {
        TimeNet net = spec.build();
        TimeGrid grid = TimeGrid::refined(net.knots);
        ErrorBatch batch = simulate_errors(payoff, model, grid, net, Strategy::gradient(),
                                           n_paths, seed, /*with_sq=*/true);
        EquivalenceEntry e;
        e.net = spec;
        e.c_norm = lp_norm_from_samples(batch.c, p, seed);
        e.sq_norm = lp_norm_from_samples(batch.sq, p, seed + 1);
        if (e.sq_norm.value < 10.0 * e.sq_norm.std_err) {
            e.guarded = true;
            e.ratio = std::numeric_limits<double>::quiet_NaN();
        } else {
            e.ratio = e.c_norm.value / e.sq_norm.value;
        }
        out.push_back(std::move(e));
    }
    return out;
}

StrategyComparison strategy_comparison(const Payoff& payoff, const DiffusionModel& model,
                                       const TimeNet& net, double p,
                                       const std::vector<std::pair<std::string, Strategy>>& strategies,
                                       std::size_t n_paths, std::uint64_t seed) {
    bool has_gradient = false;
    for (const auto& [name, s] : strategies)
        if (s.kind == Strategy::Kind::GradientAtKnot) has_gradient = true;
    if (!has_gradient)
        throw std::invalid_argument("strategy_comparison: gradient_at_knot must be included");

    TimeGrid grid = TimeGrid::refined(net.knots);
    StrategyComparison cmp;
    double min_value = kInfinity;
    for (std::size_t s = 0; s < strategies.size(); ++s) {
        const auto& [name, strat] = strategies[s];
        ErrorBatch batch =
            simulate_errors(payoff, model, grid, net, strat, n_paths, seed, false);
        cmp.names.push_back(name);
        cmp.norms.push_back(lp_norm_from_samples(batch.c, p, seed));
        if (strat.kind == Strategy::Kind::GradientAtKnot) cmp.gradient_index = s;
        min_value = std::min(min_value, cmp.norms.back().value);
    }
    const LpEstimate& grad = cmp.norms[cmp.gradient_index];
    cmp.gradient_near_optimal = grad.value <= min_value + 3.0 * grad.std_err;
    return cmp;
}

}  // namespace fracnet
