// End-to-end acceptance gate: nine numbered checks, one pass/fail line each.
// Tolerances are pinned here and nowhere else.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fracnet/experiment.hpp"
#include "fracnet/math.hpp"
#include "fracnet/payoff.hpp"
#include "fracnet/quadrature.hpp"
#include "fracnet/simulator.hpp"
#include "fracnet/smoothness.hpp"
#include "fracnet/timenet.hpp"

using namespace fracnet;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    std::string title;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    bool ok = true;
    std::ostringstream detail;

    Criterion(int id_, std::string title_) : id(id_), title(std::move(title_)) {}

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "  failed: " << what << '\n';
        }
    }

    void finish() {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        std::printf("criterion %d (%s): %s  [%.1f s]\n", id, title.c_str(),
                    ok ? "PASS" : "FAIL", secs);
        if (!ok) {
            std::fputs(detail.str().c_str(), stdout);
            ++g_failures;
        }
        std::fflush(stdout);
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

void criterion_1() {
    Criterion c(1, "exact quadratic benchmark");
    Payoff q = make_quadratic();
    DiffusionModel bm = q.model();
    for (std::size_t n : {4ul, 16ul, 64ul}) {
        TimeNet net = equidistant(n);
        TimeGrid grid = TimeGrid::refined(net.knots);
        ErrorBatch batch =
            simulate_errors(q, bm, grid, net, Strategy::gradient(), 100000, 101, true);
        LpEstimate est = lp_norm_from_samples(batch.c, 2.0, 101);
        double target = std::sqrt(2.0 / static_cast<double>(n));
        c.require(std::abs(est.value - target) <= 3.0 * est.std_err,
                  "n=" + std::to_string(n) + " L2 " + fmt(est.value) + " vs " + fmt(target) +
                      " (3 se = " + fmt(3.0 * est.std_err) + ")");
        double worst = 0.0;
        for (double sq : batch.sq) worst = std::max(worst, std::abs(sq - target));
        c.require(worst <= 1e-10,
                  "n=" + std::to_string(n) + " square function deviation " + fmt(worst));
    }
    c.finish();
}

void criterion_2() {
    Criterion c(2, "two-sided error / square-function equivalence");
    struct Case {
        Payoff payoff;
        const char* label;
    };
    std::vector<Case> cases{{make_binary(ProcessKind::BrownianMotion, 0.0), "binary"},
                            {make_call(1.0), "call"},
                            {make_quadratic(), "quadratic"}};
    for (const Case& cs : cases) {
        DiffusionModel model = cs.payoff.model();
        for (const char* family : {"equidistant", "theta"}) {
            for (std::size_t n : {4ul, 16ul, 64ul, 256ul}) {
                TimeNet net = std::string(family) == "theta" ? theta_net(n, 0.5)
                                                             : equidistant(n);
                TimeGrid grid = TimeGrid::refined(net.knots);
                // one batch serves all three p
                ErrorBatch batch = simulate_errors(cs.payoff, model, grid, net,
                                                   Strategy::gradient(), 100000, 202, true);
                for (double p : {2.0, 3.0, 4.0}) {
                    double num = lp_norm_from_samples(batch.c, p, 202).value;
                    double den = lp_norm_from_samples(batch.sq, p, 202).value;
                    double ratio = num / den;
                    c.require(ratio >= 0.1 && ratio <= 10.0,
                              std::string(cs.label) + " " + family + " n=" +
                                  std::to_string(n) + " p=" + fmt(p) + " ratio=" + fmt(ratio));
                }
            }
        }
    }
    c.finish();
}

void rate_criterion(int id, const char* title, const std::string& net_family, double theta,
                    double theory_slope) {
    Criterion c(id, title);
    ExperimentConfig cfg;
    cfg.payoff = "binary";
    cfg.net = net_family;
    // theta must stay strictly below the binary's critical exponent 1/2:
    // at theta = 1/2 the fractional integral leaves L_2 and the norm picks
    // up a sqrt(log n) factor (measured slope -0.39)
    cfg.theta = theta;
    cfg.n_list = {8, 16, 32, 64, 128, 256, 512};
    cfg.n_paths = 100000;
    cfg.seed = 303;
    RateReport r = run_rate_study(cfg, 2.0, 0.10);
    c.require(std::abs(r.slope - theory_slope) <= 0.10,
              "slope " + fmt(r.slope) + " vs theory " + fmt(theory_slope));
    c.require(r.verdict == "pass", "verdict " + r.verdict);
    c.finish();
}

void criterion_5() {
    Criterion c(5, "binary decay curve against the closed form");
    ExperimentConfig cfg;
    cfg.t_lo = 0.0;
    cfg.t_hi = 1.0 - 1e-4;
    cfg.t_count = 40;
    std::vector<double> grid = cfg.t_grid();
    Payoff binary = make_binary(ProcessKind::BrownianMotion, 0.0);
    SmoothnessCurve curve = smoothness_curves(binary, 2.0, grid, 0, 404);
    c.require(curve.method == CurveMethod::Quadrature, "expected the quadrature route");
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double oracle = std::sqrt(0.25 - std::asin(grid[i]) / (2.0 * std::numbers::pi));
        worst = std::max(worst, std::abs(curve.d0[i] - oracle));
    }
    c.require(worst <= 1e-6, "max |d0 - oracle| = " + fmt(worst));
    ThetaFit fit = fit_theta(curve);
    c.require(std::abs(fit.theta_hat - 0.5) <= 0.05, "theta_hat " + fmt(fit.theta_hat));
    c.finish();
}

void criterion_6() {
    Criterion c(6, "fractional-integral dichotomy at theta = 1/2");
    Payoff binary = make_binary(ProcessKind::BrownianMotion, 0.0);
    DiffusionModel bm = binary.model();
    std::vector<double> grid{0.0, 0.1, 0.25, 0.5, 0.75};
    for (int j = 3; j <= 19; ++j) grid.push_back(1.0 - std::pow(2.0, -j));
    SmoothnessCurve curve = smoothness_curves(binary, 2.0, grid, 0, 505);
    for (int k = 1; k <= 9; ++k) {
        if (k == 5) continue;  // the boundary point itself is not asserted
        double theta = k / 10.0;
        bool expect_div = theta > 0.5;
        RLNorm rl = riemann_liouville_norm(binary, bm, theta, 2.0, 2000, 505);
        BesovProxy proxy = besov_proxy_norm(curve, binary, theta, 2.0, 2);
        c.require(rl.divergent == expect_div,
                  "theta=" + fmt(theta) + " fractional integral divergent=" +
                      (rl.divergent ? "yes" : "no"));
        c.require(proxy.divergent == expect_div,
                  "theta=" + fmt(theta) + " d2 proxy divergent=" +
                      (proxy.divergent ? "yes" : "no"));
        c.require(rl.divergent == proxy.divergent, "theta=" + fmt(theta) + " verdicts differ");
    }
    c.finish();
}

void criterion_7() {
    Criterion c(7, "time-net calculus and the coordinate-change identity");
    const double eps = std::numeric_limits<double>::epsilon();
    for (int k = 1; k <= 10; ++k) {
        double theta = k / 10.0;
        for (std::size_t n = 1; n <= 1024; ++n) {
            double bound = 1.0 / (theta * static_cast<double>(n));
            if (theta_net_mesh(n, theta) > bound * (1.0 + 8.0 * eps)) {
                c.require(false, "mesh bound n=" + std::to_string(n) + " theta=" + fmt(theta));
                break;
            }
        }
        for (std::size_t n : {2ul, 16ul, 128ul, 1024ul}) {
            double mesh = mesh_theta(equidistant(n), theta);
            if (std::abs(mesh - std::pow(static_cast<double>(n), -theta)) > 1e-12)
                c.require(false, "equidistant mesh n=" + std::to_string(n) +
                                     " theta=" + fmt(theta));
        }
    }
    std::vector<std::pair<double, Eigen::VectorXd>> probes;
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd x(1);
        x[0] = -2.0 + 4.0 * (i / 99.0);
        probes.push_back({0.1 + 0.8 * (i / 99.0), x});
    }
    HessianIdentityReport rep = check_bm_gbm_hessian_identity(make_call(1.0), probes);
    c.require(rep.n_probes == 100, "expected 100 probes");
    c.require(rep.max_residual <= 1e-6, "identity residual " + fmt(rep.max_residual));
    c.finish();
}

WeightedCurve sampled_curve(const std::function<double(double)>& f) {
    WeightedCurve c;
    c.delta = 1e-12;
    for (double om = 1.0; om > c.delta; om *= 0.99) {
        c.t.push_back(1.0 - om);
        c.value.push_back(f(1.0 - om));
    }
    c.t.push_back(1.0 - c.delta);
    c.value.push_back(f(1.0 - c.delta));
    return c;
}

void criterion_8() {
    Criterion c(8, "weighted Hardy inequality matrix and derivative ratios");
    // six non-decreasing functions (valid for every q) ...
    std::vector<std::function<double(double)>> monotone{
        [](double) { return 1.0; },
        [](double t) { return std::pow(1.0 - t, -0.1); },
        [](double t) { return std::pow(1.0 - t, -0.2); },
        [](double t) { return std::pow(1.0 - t, -0.3); },
        [](double t) { return std::pow(1.0 - t, -0.4); },
        [](double t) { return std::log(std::numbers::e / (1.0 - t)); },
    };
    // ... six general non-negative ones (q >= 2 only)
    std::vector<std::function<double(double)>> general{
        [](double t) { return std::exp(-t); },
        [](double t) { return 2.0 + std::sin(2.0 * std::numbers::pi * t); },
        [](double t) { return std::sqrt(1.0 - t); },
        [](double t) { return 4.0 * t * (1.0 - t); },
        [](double t) { return std::pow(1.0 - t, -0.25) * (2.0 + std::cos(6.0 * t)); },
        [](double t) { return 1.0 + t * t; },
    };
    std::vector<double> thetas;
    for (int k = 1; k <= 9; ++k) thetas.push_back(k / 10.0);
    for (double theta : thetas)
        for (double q : {1.0, 2.0, 4.0, kInfinity}) {
            std::size_t fi = 0;
            for (const auto& f : monotone) {
                HardyReport rep = hardy_check(sampled_curve(f), theta, q);
                c.require(rep.holds, "monotone f" + std::to_string(fi++) + " theta=" +
                                         fmt(theta) + " q=" + fmt(q) +
                                         " ratio=" + fmt(rep.ratio));
            }
            if (q < 2.0) continue;
            fi = 0;
            for (const auto& f : general) {
                HardyReport rep = hardy_check(sampled_curve(f), theta, q);
                c.require(rep.holds, "general f" + std::to_string(fi++) + " theta=" +
                                         fmt(theta) + " q=" + fmt(q) +
                                         " ratio=" + fmt(rep.ratio));
            }
        }

    // derivative-to-value ratios stay finite on the closed-form curves
    std::vector<double> grid{0.0, 0.1, 0.25, 0.5, 0.75};
    for (int j = 3; j <= 19; ++j) grid.push_back(1.0 - std::pow(2.0, -j));
    for (const Payoff& p : {make_binary(ProcessKind::BrownianMotion, 0.0), make_call(1.0)}) {
        SmoothnessCurve curve = smoothness_curves(p, 2.0, grid, 0, 808);
        DerivativeBoundReport rep = derivative_bound_check(curve);
        c.require(rep.finite && rep.n_used > 0, std::string(p.name) + " ratios not finite");
    }
    c.finish();
}

void criterion_9() {
    Criterion c(9, "byte-identical reruns independent of worker count");
    ExperimentConfig cfg;
    cfg.payoff = "quadratic";
    cfg.n_list = {4, 8, 16, 32};
    cfg.n_paths = 2000;
    cfg.seed = 909;

    setenv("FRACNET_THREADS", "1", 1);
    std::string csv_one = rate_report_csv(cfg, run_rate_studies(cfg));
    VerifyResult fast_one = verify_suite("fast");
    setenv("FRACNET_THREADS", "5", 1);
    std::string csv_five = rate_report_csv(cfg, run_rate_studies(cfg));
    unsetenv("FRACNET_THREADS");

    c.require(csv_one == csv_five, "rate CSV differs between 1 and 5 workers");
    c.require(fast_one.passed, "fast verification suite failed");
    c.finish();
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    rate_criterion(3, "binary rate on equidistant nets", "equidistant", 1.0, -0.25);
    rate_criterion(4, "binary rate on theta-adapted nets", "theta", 0.3, -0.50);
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
