#include "fracnet/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fracnet/parallel.hpp"
#include "fracnet/quadrature.hpp"
#include "fracnet/rng.hpp"

namespace fracnet {

namespace {

using ordered_json = nlohmann::ordered_json;

ProcessKind process_from_name(const std::string& model) {
    if (model == "bm") return ProcessKind::BrownianMotion;
    if (model == "gbm") return ProcessKind::GeometricBrownianMotion;
    throw std::invalid_argument("model must be bm or gbm, got " + model);
}

Payoff config_payoff(const ExperimentConfig& config) {
    Payoff payoff = payoff_by_name(config.payoff, config.params);
    if (payoff.process != process_from_name(config.model))
        throw std::invalid_argument("payoff " + config.payoff + " does not live on model " +
                                    config.model);
    return payoff;
}

TimeNet config_net(const ExperimentConfig& config, std::size_t n) {
    if (config.net == "equidistant") return equidistant(n);
    if (config.net == "theta") return theta_net(n, config.theta);
    throw std::invalid_argument("net family " + config.net + " is not deterministic");
}

ordered_json config_json(const ExperimentConfig& c) {
    ordered_json j;
    j["model"] = c.model;
    j["payoff"] = c.payoff;
    j["params"] = ordered_json::object();
    for (const auto& [k, v] : c.params) j["params"][k] = v;
    j["net"] = c.net;
    j["theta"] = c.theta;
    j["p_list"] = c.p_list;
    j["q"] = std::isinf(c.q) ? ordered_json("inf") : ordered_json(c.q);
    j["q_holder"] = std::isinf(c.q_holder) ? ordered_json("inf") : ordered_json(c.q_holder);
    j["r_holder"] = std::isinf(c.r_holder) ? ordered_json("inf") : ordered_json(c.r_holder);
    j["n_list"] = c.n_list;
    j["n_paths"] = c.n_paths;
    j["seed"] = c.seed;
    j["t_lo"] = c.t_lo;
    j["t_hi"] = c.t_hi;
    j["t_count"] = c.t_count;
    j["format"] = c.format;
    j["grid_refine"] = c.grid_refine;
    return j;
}

double json_extended(const ordered_json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return kInfinity;
        throw std::invalid_argument("expected a number or \"inf\"");
    }
    return j.get<double>();
}

std::string versions_line() {
    std::ostringstream os;
    os << "eigen " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
       << EIGEN_MINOR_VERSION;
#if defined(__clang__)
    os << ", clang " << __clang_major__ << '.' << __clang_minor__;
#elif defined(__GNUC__)
    os << ", gcc " << __GNUC__ << '.' << __GNUC_MINOR__;
#endif
    return os.str();
}

}  // namespace

void ExperimentConfig::validate() const {
    process_from_name(model);
    if (payoff.empty()) throw std::invalid_argument("payoff name required");
    if (net != "equidistant" && net != "theta" && net.rfind("rule:", 0) != 0)
        throw std::invalid_argument("net must be equidistant, theta or rule:<name>");
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta in (0,1] required");
    if (p_list.empty()) throw std::invalid_argument("p_list must be non-empty");
    for (double p : p_list)
        if (!(p >= 1.0)) throw std::invalid_argument("every p must be >= 1");
    if (!(q >= 1.0)) throw std::invalid_argument("q >= 1 required");
    if (n_list.empty()) throw std::invalid_argument("n_list must be non-empty");
    for (std::size_t n : n_list)
        if (n < 1) throw std::invalid_argument("every n must be >= 1");
    if (n_paths < 1) throw std::invalid_argument("n_paths >= 1 required");
    if (!(0.0 <= t_lo && t_lo < t_hi && t_hi < 1.0))
        throw std::invalid_argument("need 0 <= t_lo < t_hi < 1");
    if (t_count < 2) throw std::invalid_argument("t_count >= 2 required");
    if (format != "csv" && format != "json")
        throw std::invalid_argument("format must be csv or json");
    if (grid_refine < 1 || grid_refine > 60)
        throw std::invalid_argument("grid_refine in [1,60] required");
    if (r_holder != 0.0) {
        double p = p_list.front();
        if (!(q_holder >= p) || !(r_holder >= p))
            throw std::invalid_argument("Hoelder split needs p <= q_h and p <= r_h");
        double lhs = 1.0 / p;
        double rhs = (std::isinf(q_holder) ? 0.0 : 1.0 / q_holder) +
                     (std::isinf(r_holder) ? 0.0 : 1.0 / r_holder);
        if (std::abs(lhs - rhs) > 1e-12)
            throw std::invalid_argument("Hoelder split 1/p = 1/q_h + 1/r_h violated");
    }
}

std::vector<double> ExperimentConfig::t_grid() const {
    std::vector<double> out(t_count);
    double a = 1.0 - t_lo, b = 1.0 - t_hi;
    for (std::size_t k = 0; k < t_count; ++k) {
        double frac = static_cast<double>(k) / static_cast<double>(t_count - 1);
        out[k] = 1.0 - a * std::pow(b / a, frac);
    }
    out.front() = t_lo;
    out.back() = t_hi;
    return out;
}

std::string ExperimentConfig::to_json() const {
    return config_json(*this).dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    ExperimentConfig c;
    if (j.contains("model")) c.model = j["model"].get<std::string>();
    if (j.contains("payoff")) c.payoff = j["payoff"].get<std::string>();
    if (j.contains("params"))
        for (const auto& [k, v] : j["params"].items()) c.params[k] = v.get<double>();
    if (j.contains("net")) c.net = j["net"].get<std::string>();
    if (j.contains("theta")) c.theta = j["theta"].get<double>();
    if (j.contains("p_list")) c.p_list = j["p_list"].get<std::vector<double>>();
    if (j.contains("q")) c.q = json_extended(j["q"]);
    if (j.contains("q_holder")) c.q_holder = json_extended(j["q_holder"]);
    if (j.contains("r_holder")) c.r_holder = json_extended(j["r_holder"]);
    if (j.contains("n_list")) c.n_list = j["n_list"].get<std::vector<std::size_t>>();
    if (j.contains("n_paths")) c.n_paths = j["n_paths"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("t_lo")) c.t_lo = j["t_lo"].get<double>();
    if (j.contains("t_hi")) c.t_hi = j["t_hi"].get<double>();
    if (j.contains("t_count")) c.t_count = j["t_count"].get<std::size_t>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("grid_refine")) c.grid_refine = j["grid_refine"].get<int>();
    c.validate();
    return c;
}

RateReport run_rate_study(const ExperimentConfig& config, double p, double slope_tolerance) {
    config.validate();
    if (config.n_list.size() < 4)
        throw std::invalid_argument("rate study needs at least 4 values of n");
    Payoff payoff = config_payoff(config);
    DiffusionModel model = payoff.model();

    RateReport report;
    report.p = p;
    for (std::size_t n : config.n_list) {
        TimeNet net = config_net(config, n);
        TimeGrid grid = TimeGrid::refined(net.knots, config.grid_refine);
        ErrorBatch batch = simulate_errors(payoff, model, grid, net, Strategy::gradient(),
                                           config.n_paths, config.seed);
        report.n.push_back(n);
        report.estimates.push_back(lp_norm_from_samples(batch.c, p, config.seed));
    }

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < report.n.size(); ++i) {
        if (report.estimates[i].value <= 0.0) continue;
        lx.push_back(std::log(static_cast<double>(report.n[i])));
        ly.push_back(std::log(report.estimates[i].value));
    }
    if (lx.size() < 4) throw std::runtime_error("rate study: too few positive norms to fit");
    LineFit fit = fit_line(lx, ly);
    report.slope = fit.slope;
    report.slope_lo = fit.slope - 2.0 * fit.slope_se;
    report.slope_hi = fit.slope + 2.0 * fit.slope_se;

    if (config.net == "theta") {
        report.theory_slope = -0.5;
        report.theory_known = true;
    } else if (payoff.known_theta) {
        report.theory_slope = -payoff.known_theta->first / 2.0;
        report.theory_known = true;
    }

    bool inconclusive = false;
    for (std::size_t i = 0; i + 1 < ly.size(); ++i) {
        double spacing = std::abs(ly[i + 1] - ly[i]);
        double bar_i = report.estimates[i].std_err / report.estimates[i].value;
        double bar_j = report.estimates[i + 1].std_err / report.estimates[i + 1].value;
        if (std::max(bar_i, bar_j) > 0.5 * spacing) inconclusive = true;
    }
    if (!report.theory_known)
        report.verdict = "no-theory";
    else if (inconclusive)
        report.verdict = "inconclusive";
    else
        report.verdict =
            std::abs(report.slope - report.theory_slope) <= slope_tolerance ? "pass" : "fail";
    return report;
}

std::vector<RateReport> run_rate_studies(const ExperimentConfig& config,
                                         double slope_tolerance) {
    std::vector<RateReport> out;
    for (double p : config.p_list) out.push_back(run_rate_study(config, p, slope_tolerance));
    return out;
}

PsiBound psi_bound(const TimeNet& net, double theta, double p, double q_h, double r_h,
                   const Payoff& payoff, const DiffusionModel& model) {
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("psi_bound: theta in (0,1]");
    double lhs = 1.0 / p;
    double rhs = (std::isinf(q_h) ? 0.0 : 1.0 / q_h) + (std::isinf(r_h) ? 0.0 : 1.0 / r_h);
    if (std::abs(lhs - rhs) > 1e-12 || !(q_h >= p) || !(r_h >= p))
        throw std::invalid_argument("psi_bound: Hoelder split 1/p = 1/q_h + 1/r_h violated");

    double m = 0.0;
    for (std::size_t i = 1; i < net.knots.size(); ++i)
        m = std::max(m, net.knots[i] - net.knots[i - 1]);

    // int_0^1 (m ^ (1-t)) (1-t)^{theta-2} dt, split at t = 1-m
    double integral;
    if (theta == 1.0)
        integral = m * std::log(1.0 / m) + m;
    else
        integral = (std::pow(m, theta) - m) / (1.0 - theta) + std::pow(m, theta) / theta;

    PsiBound out;
    out.integral_factor = std::sqrt(integral);

    // sup_t (1-t)^{1-theta/2} ||H_G(t, Y_t)||_r on a grid thickening near 1
    std::vector<double> probe_t = {0.0};
    for (int j = 2; j <= 60; ++j) probe_t.push_back(1.0 - std::pow(2.0, -j / 2.0));
    std::vector<double> vals(probe_t.size(), 0.0);
    parallel_for(probe_t.size(), [&](std::size_t i) {
        double t = probe_t[i];
        double weight = std::pow(1.0 - t, 1.0 - theta / 2.0);
        double norm_r;
        if (model.dim == 1) {
            auto h_at = [&](double x) {
                Eigen::VectorXd xv(1);
                xv[0] = x;
                return h_value(payoff, model, t, map_w_to_y(model, t, xv));
            };
            if (std::isinf(r_h)) {
                double st = std::sqrt(std::max(t, 1e-12));
                double sup = 0.0;
                for (int k = -400; k <= 400; ++k) sup = std::max(sup, h_at(st * k * 0.02));
                norm_r = sup;
            } else if (t == 0.0) {
                norm_r = h_at(0.0);
            } else {
                norm_r = std::pow(
                    expect_normal([&](double x) { return std::pow(h_at(x), r_h); }, 0.0,
                                  std::sqrt(t), payoff.kinks_x),
                    1.0 / r_h);
            }
        } else {
            const std::size_t n_mc = 4000;
            double acc = 0.0, sup = 0.0;
            Eigen::VectorXd xv(model.dim);
            for (std::size_t s = 0; s < n_mc; ++s) {
                for (int k = 0; k < model.dim; ++k)
                    xv[k] = std::sqrt(t) * rng::normal(0, s, i, k);
                double h = h_value(payoff, model, t, map_w_to_y(model, t, xv));
                acc += std::isinf(r_h) ? 0.0 : std::pow(h, r_h);
                sup = std::max(sup, h);
            }
            norm_r = std::isinf(r_h) ? sup
                                     : std::pow(acc / static_cast<double>(n_mc), 1.0 / r_h);
        }
        vals[i] = weight * norm_r;
    });
    for (double v : vals) out.sup_factor = std::max(out.sup_factor, v);
    std::size_t mid = vals.size() / 2;
    out.sup_divergent =
        vals.back() >= out.sup_factor * (1.0 - 1e-12) && vals.back() > 10.0 * vals[mid];
    out.bound = out.integral_factor * out.sup_factor;
    return out;
}

// --- persistence -------------------------------------------------------------

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

std::string rate_report_csv(const ExperimentConfig& config,
                            const std::vector<RateReport>& reports) {
    std::ostringstream os;
    os << "net_family,n,p,strategy,lp_value,std_err,sq_fn_value,sq_fn_std_err,ratio,n_paths,"
          "seed\n";
    for (const RateReport& r : reports)
        for (std::size_t i = 0; i < r.n.size(); ++i) {
            const LpEstimate& e = r.estimates[i];
            os << config.net << ',' << r.n[i] << ',' << format_double(r.p)
               << ",gradient_at_knot," << format_double(e.value) << ','
               << format_double(e.std_err) << ",,,," << e.n_paths << ',' << e.seed << '\n';
        }
    return os.str();
}

std::string rate_report_json(const ExperimentConfig& config,
                             const std::vector<RateReport>& reports, double wall_time) {
    ordered_json j;
    j["config"] = config_json(config);
    j["reports"] = ordered_json::array();
    for (const RateReport& r : reports) {
        ordered_json jr;
        jr["p"] = r.p;
        jr["n"] = r.n;
        jr["lp_value"] = ordered_json::array();
        jr["std_err"] = ordered_json::array();
        for (const LpEstimate& e : r.estimates) {
            jr["lp_value"].push_back(e.value);
            jr["std_err"].push_back(e.std_err);
        }
        jr["slope"] = r.slope;
        jr["slope_lo"] = r.slope_lo;
        jr["slope_hi"] = r.slope_hi;
        jr["theory_slope"] = r.theory_known ? ordered_json(r.theory_slope) : ordered_json();
        jr["verdict"] = r.verdict;
        j["reports"].push_back(jr);
    }
    j["versions"] = versions_line();
    j["wall_time"] = wall_time;
    return j.dump(2) + "\n";
}

std::string smoothness_csv(const ExperimentConfig& config, const SmoothnessCurve& curve) {
    const char* method = curve.method == CurveMethod::ClosedForm    ? "closed_form"
                         : curve.method == CurveMethod::Quadrature ? "quadrature"
                                                                   : "monte_carlo";
    std::ostringstream os;
    os << "payoff,p,t,d0,d1,d2,method,std_err\n";
    for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
        os << config.payoff << ',' << format_double(curve.p) << ','
           << format_double(curve.t_grid[i]) << ',' << format_double(curve.d0[i]) << ','
           << format_double(curve.d1[i]) << ',' << format_double(curve.d2[i]) << ',' << method
           << ',' << (curve.std_err.empty() ? "" : format_double(curve.std_err[i])) << '\n';
    }
    return os.str();
}

std::string verify_json(const VerifyResult& result) {
    ordered_json j;
    j["checks"] = ordered_json::array();
    for (const Check& c : result.checks) {
        ordered_json jc;
        jc["name"] = c.name;
        jc["value"] = c.value;
        jc["tolerance"] = c.tolerance;
        jc["pass"] = c.pass;
        j["checks"].push_back(jc);
    }
    j["passed"] = result.passed;
    j["versions"] = versions_line();
    j["wall_time"] = result.wall_time;
    return j.dump(2) + "\n";
}

std::string equivalence_csv(const ExperimentConfig& config,
                            const std::vector<EquivalenceEntry>& entries) {
    std::ostringstream os;
    os << "net_family,n,p,strategy,lp_value,std_err,sq_fn_value,sq_fn_std_err,ratio,n_paths,"
          "seed\n";
    for (const EquivalenceEntry& e : entries) {
        os << e.net.family << ',' << e.net.n << ',' << format_double(e.c_norm.p)
           << ",gradient_at_knot," << format_double(e.c_norm.value) << ','
           << format_double(e.c_norm.std_err) << ',' << format_double(e.sq_norm.value) << ','
           << format_double(e.sq_norm.std_err) << ','
           << (e.guarded ? "" : format_double(e.ratio)) << ',' << e.c_norm.n_paths << ','
           << config.seed << '\n';
    }
    return os.str();
}

std::string nets_csv(const ExperimentConfig& config) {
    std::ostringstream os;
    os << "net_family,n,theta,index,knot,mesh_theta\n";
    for (std::size_t n : config.n_list) {
        TimeNet net = config_net(config, n);
        double mesh = mesh_theta(net, config.theta);
        for (std::size_t i = 0; i < net.knots.size(); ++i)
            os << config.net << ',' << n << ',' << format_double(config.theta) << ',' << i
               << ',' << format_double(net.knots[i]) << ',' << format_double(mesh) << '\n';
    }
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

// --- verification ------------------------------------------------------------

namespace {

void add_check(VerifyResult& r, const std::string& name, double value, double tolerance) {
    r.checks.push_back({name, value, tolerance, value <= tolerance});
}

}  // namespace

VerifyResult verify_suite(const std::string& level) {
    if (level != "fast" && level != "full")
        throw std::invalid_argument("verify level must be fast or full");
    const bool full = level == "full";
    const std::size_t paths = full ? 1000000 : 10000;
    auto t0 = std::chrono::steady_clock::now();
    VerifyResult r;

    {  // exact quadratic benchmark, both sides of the identity
        Payoff payoff = make_quadratic();
        DiffusionModel model = payoff.model();
        std::size_t n = 16;
        TimeNet net = equidistant(n);
        TimeGrid grid = TimeGrid::refined(net.knots);
        ErrorBatch batch = simulate_errors(payoff, model, grid, net, Strategy::gradient(),
                                           paths, 0, true);
        LpEstimate est = lp_norm_from_samples(batch.c, 2.0, 0);
        double target = std::sqrt(2.0 / static_cast<double>(n));
        add_check(r, "quadratic_l2_exact", std::abs(est.value - target), 3.0 * est.std_err);
        double sq_dev = 0.0;
        for (std::size_t i = 0; i < std::min<std::size_t>(batch.sq.size(), 1000); ++i)
            sq_dev = std::max(sq_dev, std::abs(batch.sq[i] - target));
        add_check(r, "quadratic_sq_fn_exact", sq_dev, 1e-10);
    }

    {  // net calculus
        double worst_theta = 0.0, worst_equi = 0.0;
        for (std::size_t n : {2ul, 8ul, 64ul, 256ul, 1024ul})
            for (int k = 1; k <= 10; ++k) {
                double theta = k / 10.0;
                double bound = 1.0 / (theta * static_cast<double>(n));
                double slack = bound * 8.0 * std::numeric_limits<double>::epsilon();
                worst_theta =
                    std::max(worst_theta, theta_net_mesh(n, theta) - bound - slack);
                worst_equi = std::max(worst_equi,
                                      std::abs(mesh_theta(equidistant(n), theta) -
                                               std::pow(static_cast<double>(n), -theta)));
            }
        add_check(r, "theta_net_mesh_bound", worst_theta, 0.0);
        add_check(r, "equidistant_mesh_value", worst_equi, 1e-12);
    }

    {  // chain-rule identity between the two coordinate systems
        Payoff call = make_call(1.0);
        std::vector<std::pair<double, Eigen::VectorXd>> probes;
        for (int i = 0; i < 100; ++i) {
            Eigen::VectorXd x(1);
            x[0] = -2.0 + 4.0 * (i / 99.0);
            probes.push_back({0.1 + 0.8 * (i / 99.0), x});
        }
        add_check(r, "coordinate_hessian_identity",
                  check_bm_gbm_hessian_identity(call, probes).max_residual, 1e-6);
    }

    {  // decay-curve oracle for the binary payoff
        Payoff binary = make_binary(ProcessKind::BrownianMotion, 0.0);
        std::vector<double> ts = {0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0 - 1e-4};
        SmoothnessCurve curve = smoothness_curves(binary, 2.0, ts, paths, 0);
        double worst = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            double oracle = std::sqrt(0.25 - std::asin(ts[i]) / (2.0 * std::numbers::pi));
            worst = std::max(worst, std::abs(curve.d0[i] - oracle));
        }
        add_check(r, "binary_d0_oracle", worst, 1e-6);
    }

    {  // planted power law recovered exactly
        SmoothnessCurve synth;
        synth.p = 2.0;
        for (int k = 0; k < 20; ++k) {
            double t = 1.0 - std::pow(10.0, -1.0 - 3.0 * k / 19.0);
            synth.t_grid.push_back(t);
            synth.d0.push_back(std::pow(1.0 - t, 0.25));
            synth.d1.push_back(0.0);
            synth.d2.push_back(0.0);
        }
        ThetaFit fit = fit_theta(synth);
        add_check(r, "planted_theta_recovery", std::abs(fit.theta_hat - 0.5), 1e-10);
    }

    {  // Hardy inequality spot check
        WeightedCurve phi;
        phi.delta = 1e-6;
        for (int k = 0; k < 400; ++k) {
            double t = 1.0 - std::pow(phi.delta, k / 399.0);
            if (!phi.t.empty() && t <= phi.t.back()) continue;
            phi.t.push_back(t);
            phi.value.push_back(std::pow(1.0 - t, -0.25));
        }
        HardyReport h = hardy_check(phi, 0.5, 2.0);
        add_check(r, "hardy_spot_check", h.holds ? 0.0 : 1.0, 0.0);
    }

    {  // worker-count independence of a seeded batch
        Payoff payoff = make_quadratic();
        DiffusionModel model = payoff.model();
        TimeNet net = equidistant(8);
        TimeGrid grid = TimeGrid::refined(net.knots);
        setenv("FRACNET_THREADS", "1", 1);
        ErrorBatch one = simulate_errors(payoff, model, grid, net, Strategy::gradient(), 2000, 7);
        setenv("FRACNET_THREADS", "5", 1);
        ErrorBatch five = simulate_errors(payoff, model, grid, net, Strategy::gradient(), 2000, 7);
        unsetenv("FRACNET_THREADS");
        double diff = 0.0;
        for (std::size_t i = 0; i < one.c.size(); ++i)
            if (one.c[i] != five.c[i]) diff = 1.0;
        add_check(r, "worker_count_independence", diff, 0.0);
    }

    if (full) {  // rate slopes at full Monte Carlo scale
        ExperimentConfig cfg;
        cfg.payoff = "quadratic";
        cfg.n_list = {8, 16, 32, 64, 128};
        cfg.n_paths = paths;
        RateReport quad = run_rate_study(cfg, 2.0, 0.05);
        add_check(r, "quadratic_rate_slope", std::abs(quad.slope + 0.5), 0.05);

        cfg.payoff = "binary";
        cfg.params["strike"] = 0.0;
        cfg.n_list = {8, 32, 128, 512};
        RateReport bin_eq = run_rate_study(cfg, 2.0, 0.1);
        add_check(r, "binary_equidistant_rate_slope", std::abs(bin_eq.slope + 0.25), 0.1);

        cfg.net = "theta";
        cfg.theta = 0.5;
        RateReport bin_th = run_rate_study(cfg, 2.0, 0.1);
        add_check(r, "binary_theta_net_rate_slope", std::abs(bin_th.slope + 0.5), 0.1);
    }

    r.passed = true;
    for (const Check& c : r.checks) r.passed = r.passed && c.pass;
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace fracnet
