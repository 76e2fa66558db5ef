#include "fracnet/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "fracnet/math.hpp"
#include "fracnet/parallel.hpp"
#include "fracnet/rng.hpp"

namespace fracnet {

namespace {

Eigen::VectorXd scalar_vec(double x) {
    Eigen::VectorXd v(1);
    v[0] = x;
    return v;
}

/// Fitted power b of v against s (log-log) over the trailing samples;
/// both lists are ordered with s decreasing toward 0.
bool fit_tail_power(std::span<const double> s, std::span<const double> v, double& b) {
    std::vector<double> lx, ly;
    std::size_t take = std::min<std::size_t>(8, s.size());
    for (std::size_t i = s.size() - take; i < s.size(); ++i) {
        if (s[i] > 0.0 && v[i] > 0.0) {
            lx.push_back(std::log(s[i]));
            ly.push_back(std::log(v[i]));
        }
    }
    if (lx.size() < 3) {
        // constant or vanishing tail: treat an all-equal run as power 0
        if (!ly.empty() && v.back() >= 0.0) {
            b = 0.0;
            return v.back() > 0.0;
        }
        return false;
    }
    LineFit fit = fit_line(lx, ly);
    if (!fit.ok) return false;
    b = fit.slope;
    return true;
}

// --- curve evaluation -------------------------------------------------------

double value_F(const Payoff& fv, const DiffusionModel& bm, double t, double x) {
    if (fv.analytic) return fv.analytic->value(t, scalar_vec(x));
    return conditional_expectation(fv, bm, t, scalar_vec(x));
}

double grad_F(const Payoff& fv, const DiffusionModel& bm, double t, double x) {
    if (fv.analytic) return std::abs(fv.analytic->grad(t, scalar_vec(x))[0]);
    double h = 1e-5 * std::sqrt(1.0 - t);
    return std::abs(value_F(fv, bm, t, x + h) - value_F(fv, bm, t, x - h)) / (2.0 * h);
}

double hess_F(const Payoff& fv, const DiffusionModel& bm, double t, double x) {
    if (fv.analytic) return std::abs(fv.analytic->hess(t, scalar_vec(x))(0, 0));
    double h = 1e-4 * std::sqrt(1.0 - t);
    return std::abs(value_F(fv, bm, t, x + h) - 2.0 * value_F(fv, bm, t, x) +
                    value_F(fv, bm, t, x - h)) /
           (h * h);
}

/// E_x g(x) for x ~ N(0, t); collapses to g(0) at t = 0.
double expect_marginal(const std::function<double(double)>& g, double t,
                       std::span<const double> breaks) {
    if (t <= 0.0) return g(0.0);
    return expect_normal(g, 0.0, std::sqrt(t), breaks);
}

SmoothnessCurve curves_quadrature(const Payoff& payoff, double p,
                                  std::span<const double> t_grid) {
    Payoff fv = f_view(payoff);
    DiffusionModel bm{ProcessKind::BrownianMotion, 1};
    SmoothnessCurve c;
    c.p = p;
    c.t_grid.assign(t_grid.begin(), t_grid.end());
    c.d0.resize(t_grid.size());
    c.d1.resize(t_grid.size());
    c.d2.resize(t_grid.size());
    c.method = CurveMethod::Quadrature;

    parallel_for(t_grid.size(), [&](std::size_t i) {
        double t = t_grid[i];
        double s1 = std::sqrt(1.0 - t);
        // the integrands live in a width-sqrt(1-t) layer around each kink;
        // cuts at that scale keep the layer visible to the outer quadrature
        std::vector<double> cuts;
        for (double k : fv.kinks_x)
            for (double c : {0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
                cuts.push_back(k + c * s1);
                if (c != 0.0) cuts.push_back(k - c * s1);
            }
        auto d0_inner = [&](double x) {
            double Fx = value_F(fv, bm, t, x);
            std::vector<double> zb;
            for (double k : fv.kinks_x) zb.push_back(k - x);
            return expect_normal(
                [&](double z) { return std::pow(std::abs(fv.g(scalar_vec(x + z)) - Fx), p); },
                0.0, s1, zb, 1e-12);
        };
        c.d0[i] = std::pow(expect_marginal(d0_inner, t, cuts), 1.0 / p);
        c.d1[i] = std::pow(
            expect_marginal([&](double x) { return std::pow(grad_F(fv, bm, t, x), p); }, t,
                            cuts),
            1.0 / p);
        c.d2[i] = std::pow(
            expect_marginal([&](double x) { return std::pow(hess_F(fv, bm, t, x), p); }, t,
                            cuts),
            1.0 / p);
    });
    return c;
}

SmoothnessCurve curves_monte_carlo(const Payoff& payoff, double p,
                                   std::span<const double> t_grid, std::size_t n_paths,
                                   std::uint64_t seed) {
    Payoff fv = f_view(payoff);
    const int d = fv.dim;
    DiffusionModel bm{ProcessKind::BrownianMotion, d};
    SmoothnessCurve c;
    c.p = p;
    c.t_grid.assign(t_grid.begin(), t_grid.end());
    c.d0.resize(t_grid.size());
    c.d1.resize(t_grid.size());
    c.d2.resize(t_grid.size());
    c.std_err.resize(t_grid.size());
    c.method = CurveMethod::MonteCarlo;

    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        double t = t_grid[ti];
        double st = std::sqrt(t), s1 = std::sqrt(1.0 - t);
        std::vector<double> s0(n_paths), s1v(n_paths), s2v(n_paths);
        parallel_for(n_paths, [&](std::size_t i) {
            Eigen::VectorXd x(d), w1(d);
            for (int k = 0; k < d; ++k) {
                // step 0 carries W_t, step 1 the bridge to W_1; lane ti*d+k
                // keeps the draws distinct across grid points
                std::uint64_t lane = ti * static_cast<std::size_t>(d) + k;
                x[k] = st * rng::normal(seed, i, 0, lane);
                w1[k] = x[k] + s1 * rng::normal(seed, i, 1, lane);
            }
            double F = fv.analytic ? fv.analytic->value(t, x)
                                   : conditional_expectation(fv, bm, t, x);
            s0[i] = std::abs(fv.g(w1) - F);
            if (fv.analytic) {
                s1v[i] = fv.analytic->grad(t, x).norm();
                s2v[i] = fv.analytic->hess(t, x).norm();
            } else {
                s1v[i] = grad_F(fv, bm, t, x[0]);
                s2v[i] = hess_F(fv, bm, t, x[0]);
            }
        });
        LpEstimate e0 = lp_norm_from_samples(s0, p, seed);
        c.d0[ti] = e0.value;
        c.std_err[ti] = e0.std_err;
        c.d1[ti] = lp_norm_from_samples(s1v, p, seed).value;
        c.d2[ti] = lp_norm_from_samples(s2v, p, seed).value;
    }
    return c;
}

}  // namespace

SmoothnessCurve smoothness_curves(const Payoff& payoff, double p,
                                  std::span<const double> t_grid, std::size_t n_paths,
                                  std::uint64_t seed) {
    if (t_grid.empty()) throw std::invalid_argument("smoothness_curves: empty grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 0.0 || t_grid[i] > 1.0 - 1e-6)
            throw std::invalid_argument("smoothness_curves: grid point outside [0, 1-1e-6]");
        if (i > 0 && t_grid[i] <= t_grid[i - 1])
            throw std::invalid_argument("smoothness_curves: grid must increase");
    }
    if (payoff.dim == 1) {
        try {
            return curves_quadrature(payoff, p, t_grid);
        } catch (const std::exception&) {
            // quadrature route failed; the MC result is flagged via `method`
        }
    }
    return curves_monte_carlo(payoff, p, t_grid, n_paths, seed);
}

BesovProxy besov_proxy_norm(const SmoothnessCurve& curve, const Payoff& payoff,
                            double theta, double q, int which) {
    if (which < 0 || which > 2) throw std::invalid_argument("besov_proxy_norm: which in {0,1,2}");
    if (theta <= 0.0 || theta > 1.0)
        throw std::invalid_argument("besov_proxy_norm: theta in (0,1]");
    double e = which == 0 ? -theta / 2.0 : which == 1 ? (1.0 - theta) / 2.0 : (2.0 - theta) / 2.0;
    const std::vector<double>& d = which == 0 ? curve.d0 : which == 1 ? curve.d1 : curve.d2;

    WeightedCurve wc;
    wc.delta = 1.0 - curve.t_grid.back();
    for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
        wc.t.push_back(curve.t_grid[i]);
        wc.value.push_back(std::pow(1.0 - curve.t_grid[i], e) * d[i]);
    }

    BesovProxy out;
    out.which = which;
    out.weighted = weighted_q_norm(wc, q);
    out.divergent = out.weighted.divergent;

    Payoff fv = f_view(payoff);
    double p = curve.p;
    if (fv.dim == 1) {
        out.f_norm = std::pow(
            expect_normal([&](double x) { return std::pow(std::abs(fv.g(scalar_vec(x))), p); },
                          0.0, 1.0, fv.kinks_x),
            1.0 / p);
    } else {
        Payoff abs_p = fv;
        abs_p.analytic.reset();
        abs_p.g = [g = fv.g, p](const Eigen::VectorXd& x) { return std::pow(std::abs(g(x)), p); };
        DiffusionModel bm{ProcessKind::BrownianMotion, fv.dim};
        out.f_norm = std::pow(
            conditional_expectation(abs_p, bm, 0.0, Eigen::VectorXd::Zero(fv.dim)), 1.0 / p);
    }
    out.value = out.weighted.value + out.f_norm;
    return out;
}

ThetaFit fit_theta(const SmoothnessCurve& curve, double window_lo, double window_hi) {
    if (!(0.0 <= window_lo && window_lo < window_hi && window_hi < 1.0))
        throw std::invalid_argument("fit_theta: window must sit inside [0,1)");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
        double t = curve.t_grid[i];
        if (t < window_lo || t > window_hi || curve.d0[i] <= 0.0) continue;
        x.push_back(std::log(1.0 - t));
        y.push_back(std::log(curve.d0[i]));
    }
    if (x.size() < 5) throw std::invalid_argument("fit_theta: fewer than 5 usable points");
    LineFit fit = fit_line(x, y);
    if (!fit.ok) throw std::runtime_error("fit_theta: degenerate abscissa");

    ThetaFit out;
    out.theta_hat = 2.0 * fit.slope;
    out.theta_lo = out.theta_hat - 2.0 * 2.0 * fit.slope_se;
    out.theta_hi = out.theta_hat + 2.0 * 2.0 * fit.slope_se;
    out.window_lo = window_lo;
    out.window_hi = window_hi;
    out.r_squared = fit.r_squared;
    out.n_points = fit.n;
    out.boundary = out.theta_hat >= 0.98;
    return out;
}

RLNorm riemann_liouville_norm(const Payoff& payoff, const DiffusionModel& model,
                              double theta, double p, std::size_t n_paths,
                              std::uint64_t seed) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("riemann_liouville_norm: theta in (0,1]");
    std::vector<double> base;
    for (int i = 0; i <= 9; ++i) base.push_back(i / 10.0);
    base.push_back(1.0);
    TimeGrid grid = TimeGrid::refined(std::move(base));

    std::vector<double> ts;      // grid knots strictly below 1
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (grid[j] < 1.0) ts.push_back(grid[j]);
    const std::size_t m = ts.size();
    const double delta = 1.0 - ts.back();

    RLNorm out;
    std::vector<double> samples(n_paths);
    std::vector<std::size_t> diverged(n_paths, 0);
    std::vector<double> hp_sum(m, 0.0);  // accumulates H^p for the mean curve
    std::mutex sum_mutex;
    const std::size_t stride = grid.size() * static_cast<std::size_t>(model.dim);

    parallel_for(n_paths, [&](std::size_t i) {
        thread_local std::vector<double> buf;
        buf.resize(stride);
        sample_path(model, grid, seed, i, buf);
        std::vector<double> h2(m), s(m);
        Eigen::VectorXd w(model.dim);
        for (std::size_t j = 0; j < m; ++j) {
            for (int k = 0; k < model.dim; ++k)
                w[k] = buf[j * static_cast<std::size_t>(model.dim) + k];
            double h = h_value(payoff, model, ts[j], map_w_to_y(model, ts[j], w));
            h2[j] = h * h;
            s[j] = 1.0 - ts[j];
        }
        double integral = 0.0;
        for (std::size_t j = 1; j < m; ++j) {
            double fa = std::pow(s[j - 1], 1.0 - theta) * h2[j - 1];
            double fb = std::pow(s[j], 1.0 - theta) * h2[j];
            integral += 0.5 * (fa + fb) * (ts[j] - ts[j - 1]);
        }
        double b = 0.0;
        if (fit_tail_power(s, h2, b)) {
            double expo = 2.0 - theta + b;
            if (expo <= 0.0) {
                samples[i] = std::numeric_limits<double>::infinity();
                diverged[i] = 1;
                return;
            }
            integral += h2.back() * std::pow(delta, 2.0 - theta) / expo;
        }
        samples[i] = std::sqrt(integral);
        std::lock_guard<std::mutex> lock(sum_mutex);
        for (std::size_t j = 0; j < m; ++j) hp_sum[j] += std::pow(h2[j], p / 2.0);
    });

    out.estimate = lp_norm_from_samples(samples, p, seed);
    for (std::size_t d : diverged) out.divergent_paths += d;

    // Divergence verdict from the curve phi(u) = || H_G^2(u, Y_u) ||_{p/2}.
    // By Minkowski's integral inequality a finite weighted integral forces
    // the L_p norm finite; at p = 2 the two agree exactly (Fubini).
    std::vector<double> phi(m);
    bool quad_mean = model.dim == 1 && payoff.analytic;
    if (quad_mean) {
        parallel_for(m, [&](std::size_t j) {
            double t = ts[j];
            auto hp_at = [&](double x) {
                double h = h_value(payoff, model, t, map_w_to_y(model, t, scalar_vec(x)));
                return std::pow(h, p);
            };
            // H_G concentrates in a width-sqrt(1-t) layer around each kink;
            // cuts at that scale keep the spike visible to the quadrature
            double s = std::sqrt(1.0 - t);
            std::vector<double> cuts;
            for (double k : payoff.kinks_x)
                for (double c : {0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
                    cuts.push_back(k + c * s);
                    if (c != 0.0) cuts.push_back(k - c * s);
                }
            phi[j] = std::pow(expect_marginal(hp_at, t, cuts), 2.0 / p);
        });
    } else {
        for (std::size_t j = 0; j < m; ++j)
            phi[j] = std::pow(hp_sum[j] / static_cast<double>(n_paths), 2.0 / p);
    }
    WeightedCurve mean_curve;
    mean_curve.delta = delta;
    bool all_zero = true;
    for (std::size_t j = 0; j < m; ++j) {
        mean_curve.t.push_back(ts[j]);
        mean_curve.value.push_back(std::pow(1.0 - ts[j], 2.0 - theta) * phi[j]);
        if (phi[j] != 0.0) all_zero = false;
    }
    if (all_zero) {
        out.divergent = false;
        return out;
    }
    WeightedNorm mean_norm = weighted_q_norm(mean_curve, 1.0);
    out.divergent = mean_norm.divergent;
    out.mean_tail_exponent = mean_norm.tail_exponent;
    return out;
}

DerivativeBoundReport derivative_bound_check(const SmoothnessCurve& curve) {
    DerivativeBoundReport r;
    for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
        if (curve.d0[i] <= 0.0) continue;
        double s = 1.0 - curve.t_grid[i];
        r.sup_d1_ratio = std::max(r.sup_d1_ratio, std::sqrt(s) * curve.d1[i] / curve.d0[i]);
        r.sup_d2_ratio = std::max(r.sup_d2_ratio, s * curve.d2[i] / curve.d0[i]);
        ++r.n_used;
    }
    r.finite = std::isfinite(r.sup_d1_ratio) && std::isfinite(r.sup_d2_ratio) && r.n_used > 0;
    return r;
}

}  // namespace fracnet
