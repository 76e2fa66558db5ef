#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fracnet/math.hpp"
#include "fracnet/simulator.hpp"
#include "fracnet/smoothness.hpp"

namespace fracnet {

struct ExperimentConfig {
    std::string model = "bm";        // bm | gbm
    std::string payoff = "quadratic";
    std::map<std::string, double> params;
    std::string net = "equidistant";  // equidistant | theta | rule:<name>
    double theta = 1.0;
    std::vector<double> p_list = {2.0};
    double q = 2.0;
    double q_holder = kInfinity;  // Hoelder split 1/p = 1/q_h + 1/r_h
    double r_holder = 0.0;        // 0 = unset
    std::vector<std::size_t> n_list = {4, 16, 64};
    std::size_t n_paths = 10000;
    std::uint64_t seed = 0;
    double t_lo = 0.0;
    double t_hi = 1.0 - 1e-4;
    std::size_t t_count = 40;
    std::string out;
    std::string format = "csv";  // csv | json
    int grid_refine = 40;

    /// Throws std::invalid_argument on bad fields; the Hoelder triple is
    /// checked only when r_holder is set.
    void validate() const;
    /// Log-spaced approach to 1: t_k = 1 - (1-t_lo) ((1-t_hi)/(1-t_lo))^{k/(m-1)}.
    std::vector<double> t_grid() const;

    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
};

struct RateReport {
    double p = 2.0;
    std::vector<std::size_t> n;
    std::vector<LpEstimate> estimates;
    double slope = 0.0;
    double slope_lo = 0.0;
    double slope_hi = 0.0;
    double theory_slope = 0.0;
    bool theory_known = false;
    std::string verdict;  // pass | fail | inconclusive | no-theory
};

/// ||C_1||_p across config.n_list with a log-log slope fit against the
/// theoretical rate (equidistant: -theta/2 with the payoff's known theta;
/// theta nets: -1/2). Error bars wider than half the inter-n spacing give
/// an inconclusive verdict.
RateReport run_rate_study(const ExperimentConfig& config, double p,
                          double slope_tolerance = 0.1);
std::vector<RateReport> run_rate_studies(const ExperimentConfig& config,
                                         double slope_tolerance = 0.1);

struct PsiBound {
    double integral_factor = 0.0;  // (int ||sqrt(psi)||_q^2 (1-t)^{theta-2} dt)^{1/2}
    double sup_factor = 0.0;       // sup_t (1-t)^{1-theta/2} ||H_G(t,Y_t)||_r
    double bound = 0.0;            // product, constant taken as 1
    bool sup_divergent = false;
};

/// Bound shape (max_i delta_tau_i) ^ (1-t) through the Hoelder split
/// 1/p = 1/q_h + 1/r_h; deterministic nets only.
PsiBound psi_bound(const TimeNet& net, double theta, double p, double q_h, double r_h,
                   const Payoff& payoff, const DiffusionModel& model);

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyResult {
    std::vector<Check> checks;
    bool passed = false;
    double wall_time = 0.0;
};

/// Cross-module consistency checks; "fast" uses ~1e4 paths, "full" ~1e6.
VerifyResult verify_suite(const std::string& level);

// --- persistence ------------------------------------------------------------

/// Shortest round-trip decimal form, identical across platforms and runs.
std::string format_double(double x);

std::string rate_report_csv(const ExperimentConfig& config,
                            const std::vector<RateReport>& reports);
std::string rate_report_json(const ExperimentConfig& config,
                             const std::vector<RateReport>& reports, double wall_time);
std::string smoothness_csv(const ExperimentConfig& config, const SmoothnessCurve& curve);
std::string verify_json(const VerifyResult& result);
std::string equivalence_csv(const ExperimentConfig& config,
                            const std::vector<EquivalenceEntry>& entries);
std::string nets_csv(const ExperimentConfig& config);

void write_file(const std::string& path, const std::string& content);

}  // namespace fracnet
