#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fracnet/payoff.hpp"
#include "fracnet/quadrature.hpp"
#include "fracnet/simulator.hpp"

namespace fracnet {

enum class CurveMethod { ClosedForm, Quadrature, MonteCarlo };

/// Decay curves of a payoff seen through its Brownian view F(t,x):
/// d0 = ||f(W_1) - F(t,W_t)||_p, d1 = ||grad F(t,W_t)||_p,
/// d2 = ||D^2 F(t,W_t)||_p on a grid inside [0, 1).
struct SmoothnessCurve {
    double p = 2.0;
    std::vector<double> t_grid;
    std::vector<double> d0, d1, d2;
    CurveMethod method = CurveMethod::Quadrature;
    std::vector<double> std_err;  // per-point d0 uncertainty, MC mode only
};

struct ThetaFit {
    double theta_hat = 0.0;
    double theta_lo = 0.0;   // 95% band from the regression residuals
    double theta_hi = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
    bool boundary = false;   // estimate at or beyond the theta = 1 endpoint
};

struct BesovProxy {
    WeightedNorm weighted;   // ||(1-t)^e d^which||_q in the dt/(1-t) norm
    double f_norm = 0.0;     // ||f(W_1)||_p
    double value = 0.0;      // weighted.value + f_norm
    int which = 0;
    bool divergent = false;
};

struct RLNorm {
    LpEstimate estimate;
    bool divergent = false;       // mean-curve weighted integral diverges
    std::size_t divergent_paths = 0;  // per-path tail fit gave a non-integrable power
    double mean_tail_exponent = 0.0;
};

struct DerivativeBoundReport {
    double sup_d1_ratio = 0.0;  // sup (1-t)^{1/2} d1 / d0
    double sup_d2_ratio = 0.0;  // sup (1-t) d2 / d0
    std::size_t n_used = 0;     // grid points with d0 > 0
    bool finite = false;
};

/// Quadrature against the joint Gaussian law of (W_t, W_1) when the payoff
/// is one-dimensional; Monte Carlo (flagged in `method`) otherwise or when
/// the quadrature route fails.
SmoothnessCurve smoothness_curves(const Payoff& payoff, double p,
                                  std::span<const double> t_grid, std::size_t n_paths,
                                  std::uint64_t seed);

/// Weighted q-norm of (1-t)^e d^which(t) with e in {-theta/2, (1-theta)/2,
/// (2-theta)/2}, plus ||f||_p. Divergence decided by the tail rule of
/// weighted_q_norm.
BesovProxy besov_proxy_norm(const SmoothnessCurve& curve, const Payoff& payoff,
                            double theta, double q, int which);

/// Least-squares slope of log d0 against log(1-t) on the window;
/// theta_hat = 2 * slope. Throws if fewer than 5 usable points.
ThetaFit fit_theta(const SmoothnessCurve& curve, double window_lo = 0.9,
                   double window_hi = 1.0 - 1e-4);

/// || (int_0^1 (1-u)^{1-theta} H_G^2(u, Y_u) du)^{1/2} ||_p by Monte Carlo,
/// with the per-path tail beyond the sampling horizon extrapolated from a
/// fitted power. The divergence flag comes from the mean curve
/// E H_G^2(u, Y_u), whose weighted integral diverges exactly when the
/// L_p norm does.
RLNorm riemann_liouville_norm(const Payoff& payoff, const DiffusionModel& model,
                              double theta, double p, std::size_t n_paths,
                              std::uint64_t seed);

/// sup over the curve grid of (1-t)^{1/2} d1/d0 and (1-t) d2/d0
/// (points with d0 = 0 excluded).
DerivativeBoundReport derivative_bound_check(const SmoothnessCurve& curve);

}  // namespace fracnet
