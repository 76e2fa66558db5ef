#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fracnet {

// ---------------------------------------------------------------------------
// Generic 1-d quadrature helpers
// ---------------------------------------------------------------------------

/// Adaptive Gauss-Legendre integration of f over [a,b] to absolute
/// tolerance tol (panels are bisected until a 15-point rule agrees with
/// its two halves).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth = 48);

/// E f(X) for X ~ N(mean, sd^2). `breaks` lists points where f kinks or
/// jumps; the integral is split there so each piece is smooth.
double expect_normal(const std::function<double(double)>& f, double mean, double sd,
                     std::span<const double> breaks = {}, double tol = 1e-11);

// ---------------------------------------------------------------------------
// Weighted norms on [0,1) with measure dt/(1-t)
// ---------------------------------------------------------------------------

/// Sampled non-negative integrand phi(t) on [0, 1-delta].
struct WeightedCurve {
    std::vector<double> t;      // strictly increasing, last = 1 - delta
    std::vector<double> value;  // phi(t) >= 0
    double delta = 1e-6;
};

struct WeightedNorm {
    double value = 0.0;        // the q-norm including the tail estimate
    double finite_part = 0.0;  // integral (or sup) over [0, 1-delta]
    double tail = 0.0;         // fitted-power extrapolation over (1-delta, 1)
    double tail_exponent = 0.0;
    bool divergent = false;
};

/// (integral of phi^q dt/(1-t))^{1/q}, trapezoid in u = -ln(1-t);
/// q may be infinity (sup norm). The tail over (1-delta, 1) is estimated
/// from the fitted power of phi near 1; tail > 10x finite part or a
/// non-integrable fitted exponent flags divergence.
WeightedNorm weighted_q_norm(const WeightedCurve& curve, double q);

/// Integral of (b - t) h(t) dt over the sampled sub-grid [t.front, t.back],
/// trapezoid rule, plus a fitted-power tail over (t.back, b) when the
/// samples stop short of b. Throws on an empty sub-grid.
double kernel_interval_integral(std::span<const double> t, std::span<const double> h, double b);

struct HardyReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double bound_constant = 0.0;  // admissible lhs/rhs factor for this (theta, q)
    double ratio = 0.0;           // lhs / (constant * rhs)
    bool holds = false;
    bool lhs_divergent = false;
    bool rhs_divergent = false;
};

/// Checks ||(1-t)^{(1-theta)/2} (int_0^t phi^2)^{1/2}||_q <= c ||(1-t)^{1-theta/2} phi||_q
/// in the dt/(1-t) norm, with c = (1-theta)^{-1/2} for q >= 2 and
/// c = ((2-theta)/(1-theta))^{1/q} for 1 <= q < 2 (phi must be
/// non-decreasing in that range).
HardyReport hardy_check(const WeightedCurve& phi, double theta, double q);

struct NetKernelReport {
    std::vector<std::size_t> n;
    std::vector<double> scaled_sum;  // n * sum_i int (t_i - u) phi(u) du over theta_net(n)
    double weighted_integral = 0.0;  // int (1-u)^{1-theta} phi(u) du
    bool weighted_divergent = false;
    bool sums_bounded = false;
};

/// Numerical witness that the scaled net sums and the weighted integral
/// are finite together (or blow up together).
NetKernelReport net_kernel_equivalence_check(const std::function<double(double)>& phi,
                                             double theta, std::span<const std::size_t> n_list);

}  // namespace fracnet
