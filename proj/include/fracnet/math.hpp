#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>

namespace fracnet {

inline double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Inverse standard normal CDF (Acklam's rational approximation plus one
/// Halley refinement step; accurate to about 1e-15 over (0,1)).
inline double inv_norm_cdf(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement
    double e = norm_cdf(x) - p;
    double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Least-squares line y = slope x + intercept with the usual residual-based
/// standard error of the slope.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double r_squared = 1.0;
    std::size_t n = 0;
    bool ok = false;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    LineFit fit;
    fit.n = x.size();
    if (fit.n < 2 || y.size() != fit.n) return fit;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < fit.n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(fit.n);
    my /= static_cast<double>(fit.n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < fit.n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = syy - fit.slope * sxy;
    if (ssr < 0.0) ssr = 0.0;
    if (fit.n > 2) fit.slope_se = std::sqrt(ssr / static_cast<double>(fit.n - 2) / sxx);
    fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    fit.ok = true;
    return fit;
}

}  // namespace fracnet
