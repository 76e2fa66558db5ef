#include "fracnet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracnet/math.hpp"
#include "fracnet/timenet.hpp"

namespace fracnet {

namespace {

// 15-point Gauss-Legendre rule on [-1,1] (positive half; symmetric).
constexpr double kGlNode[8] = {0.0,
                               0.2011940939974345,
                               0.3941513470775634,
                               0.5709721726085388,
                               0.7244177313601700,
                               0.8482065834104272,
                               0.9372733924007059,
                               0.9879925180204854};
constexpr double kGlWeight[8] = {0.2025782419255613, 0.1984314853271116,
                                 0.1861610000155622, 0.1662692058169939,
                                 0.1395706779261543, 0.1071592204671719,
                                 0.0703660474881081, 0.0307532419961173};

double gl15(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double sum = kGlWeight[0] * f(c);
    for (int i = 1; i < 8; ++i)
        sum += kGlWeight[i] * (f(c - h * kGlNode[i]) + f(c + h * kGlNode[i]));
    return sum * h;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             double tol, double tol_floor, int depth, long& budget) {
    double m = 0.5 * (a + b);
    double left = gl15(f, a, m);
    double right = gl15(f, m, b);
    // the relative floor keeps large-magnitude integrands from demanding
    // agreement below machine precision
    double accept = std::max(tol, 64.0 * std::numeric_limits<double>::epsilon() *
                                      (std::abs(left) + std::abs(right)));
    if (depth <= 0 || --budget <= 0 || std::abs(left + right - whole) <= accept)
        return left + right;
    // the child tolerance stops halving at tol_floor: integrands that are
    // themselves adaptive integrals carry noise at their own tolerance, and
    // demanding agreement below that noise never terminates
    double child = std::max(0.5 * tol, tol_floor);
    return adapt(f, a, m, left, child, tol_floor, depth - 1, budget) +
           adapt(f, m, b, right, child, tol_floor, depth - 1, budget);
}

// Least-squares power-law exponent of (x, y) pairs in log-log space.
// Returns false when fewer than 3 positive samples are available.
bool fit_exponent(std::span<const double> x, std::span<const double> y, double& a_out,
                  std::size_t lo, std::size_t hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        if (!(y[i] > 0.0) || !(x[i] > 0.0)) continue;
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 3) return false;
    double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom == 0.0) return false;
    a_out = (static_cast<double>(m) * sxy - sx * sy) / denom;
    return true;
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth) {
    if (a == b) return 0.0;
    // <= 4096 panels keep the accepted-error sum below the requested tol
    // even when every panel lands exactly on the floor
    long budget = 4096;
    return adapt(f, a, b, gl15(f, a, b), tol, tol / 4096.0, max_depth, budget);
}

double expect_normal(const std::function<double(double)>& f, double mean, double sd,
                     std::span<const double> breaks, double tol) {
    if (!(sd > 0.0)) return f(mean);
    const double lo = mean - 10.0 * sd;
    const double hi = mean + 10.0 * sd;
    std::vector<double> cuts{lo, hi};
    for (double bp : breaks)
        if (bp > lo && bp < hi) cuts.push_back(bp);
    std::sort(cuts.begin(), cuts.end());
    auto integrand = [&](double x) {
        double z = (x - mean) / sd;
        return f(x) * std::exp(-0.5 * z * z);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += integrate_adaptive(integrand, cuts[i], cuts[i + 1],
                                    tol * sd * std::sqrt(2.0 * std::numbers::pi));
    return total / (sd * std::sqrt(2.0 * std::numbers::pi));
}

WeightedNorm weighted_q_norm(const WeightedCurve& curve, double q) {
    if (curve.t.size() != curve.value.size() || curve.t.size() < 2)
        throw std::invalid_argument("weighted_q_norm: malformed curve");
    if (!(q >= 1.0)) throw std::invalid_argument("weighted_q_norm: q must be >= 1");
    WeightedNorm out;
    const auto& t = curve.t;
    const auto& v = curve.value;
    const std::size_t m = t.size();

    bool all_zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    if (all_zero) return out;

    // fit the power of phi near the right endpoint, on samples with
    // 1 - t within a factor 256 of the truncation
    std::vector<double> one_minus(m);
    for (std::size_t i = 0; i < m; ++i) one_minus[i] = 1.0 - t[i];
    double window = std::min(1e-2, one_minus.back() * 256.0);
    std::size_t lo = 0;
    while (lo < m && one_minus[lo] > window) ++lo;
    double a = 0.0;
    bool have_fit = fit_exponent(one_minus, v, a, lo, m);
    out.tail_exponent = have_fit ? a : 0.0;
    double edge = v.back();

    if (std::isinf(q)) {
        out.finite_part = *std::max_element(v.begin(), v.end());
        if (have_fit && a < -1e-9 && edge > 0.0) {
            out.divergent = true;
            out.tail = kInfinity;
            out.value = kInfinity;
        } else {
            out.tail = edge;
            out.value = out.finite_part;
        }
        return out;
    }

    // trapezoid in u = -ln(1-t), where dt/(1-t) = du
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        double du = std::log(one_minus[i] / one_minus[i + 1]);
        integral += 0.5 * du * (std::pow(v[i], q) + std::pow(v[i + 1], q));
    }
    out.finite_part = integral;

    double aq = a * q;
    if (edge > 0.0) {
        if (!have_fit) {
            out.tail = std::pow(edge, q);  // crude: one unit of u
        } else if (aq > 1e-12) {
            out.tail = std::pow(edge, q) / aq;
        } else {
            out.divergent = true;
            out.tail = kInfinity;
            out.value = kInfinity;
            return out;
        }
    }
    if (out.tail > 10.0 * out.finite_part && out.tail > 0.0) out.divergent = true;
    out.value = std::pow(out.finite_part + out.tail, 1.0 / q);
    return out;
}

double kernel_interval_integral(std::span<const double> t, std::span<const double> h,
                                double b) {
    if (t.empty() || t.size() != h.size())
        throw std::invalid_argument("kernel_interval_integral: empty or mismatched sub-grid");
    if (!(t.back() <= b))
        throw std::invalid_argument("kernel_interval_integral: samples exceed right endpoint");
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        double s0 = b - t[i];
        double s1 = b - t[i + 1];
        if (h[i] > 0.0 && h[i + 1] > 0.0 && s1 > 0.0 && s0 > s1) {
            // local power-law panel: h(t) = h_i ((b-t)/s0)^alpha, integrated exactly
            double alpha = std::log(h[i + 1] / h[i]) / std::log(s1 / s0);
            double e = alpha + 2.0;
            if (std::abs(e) > 1e-12) {
                total += h[i] * std::pow(s0, -alpha) *
                         (std::pow(s0, e) - std::pow(s1, e)) / e;
            } else {
                total += h[i] * s0 * s0 * std::log(s0 / s1);
            }
        } else {
            total += 0.5 * (t[i + 1] - t[i]) * (s0 * h[i] + s1 * h[i + 1]);
        }
    }
    // fitted-power tail over (t.back, b)
    double gap = b - t.back();
    if (gap > 0.0 && h.back() > 0.0) {
        std::vector<double> dist(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) dist[i] = b - t[i];
        double a = 0.0;
        std::size_t lo = t.size() > 8 ? t.size() - 8 : 0;
        if (!fit_exponent(dist, h, a, lo, t.size())) a = 0.0;
        if (a + 2.0 > 1e-9) total += h.back() * gap * gap / (a + 2.0);
    }
    return total;
}

HardyReport hardy_check(const WeightedCurve& phi, double theta, double q) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("hardy_check: theta must be in (0,1)");
    const auto& t = phi.t;
    const auto& v = phi.value;
    if (q < 2.0) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] < v[i - 1] * (1.0 - 1e-12) - 1e-14)
                throw std::invalid_argument(
                    "hardy_check: phi must be non-decreasing for q < 2");
    }
    // cumulative int_0^t phi^2 by trapezoid on the sample grid
    std::vector<double> cum(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i)
        cum[i] = cum[i - 1] + 0.5 * (t[i] - t[i - 1]) * (v[i] * v[i] + v[i - 1] * v[i - 1]);

    WeightedCurve lhs_curve{t, {}, phi.delta};
    WeightedCurve rhs_curve{t, {}, phi.delta};
    lhs_curve.value.resize(t.size());
    rhs_curve.value.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        double om = 1.0 - t[i];
        lhs_curve.value[i] = std::pow(om, 0.5 * (1.0 - theta)) * std::sqrt(cum[i]);
        rhs_curve.value[i] = std::pow(om, 1.0 - 0.5 * theta) * v[i];
    }
    WeightedNorm lhs = weighted_q_norm(lhs_curve, q);
    WeightedNorm rhs = weighted_q_norm(rhs_curve, q);

    HardyReport rep;
    rep.lhs = lhs.value;
    rep.rhs = rhs.value;
    rep.lhs_divergent = lhs.divergent;
    rep.rhs_divergent = rhs.divergent;
    rep.bound_constant = (q >= 2.0) ? 1.0 / std::sqrt(1.0 - theta)
                                    : std::pow((2.0 - theta) / (1.0 - theta), 1.0 / q);
    if (rhs.divergent) {
        rep.holds = true;  // unbounded right-hand side; nothing to violate
        rep.ratio = 0.0;
        return rep;
    }
    if (rhs.value == 0.0) {
        rep.holds = (lhs.value == 0.0);
        rep.ratio = 0.0;
        return rep;
    }
    rep.ratio = lhs.value / (rep.bound_constant * rhs.value);
    // the q = 2 constant is attained with equality on every pure power, so
    // the tolerance only absorbs discretization and tail extrapolation; the
    // latter reaches a few 1e-4 when the lhs decays as slowly as (1-t)^0.05
    rep.holds = !lhs.divergent && rep.ratio <= 1.0 + 1e-3;
    return rep;
}

NetKernelReport net_kernel_equivalence_check(const std::function<double(double)>& phi,
                                             double theta,
                                             std::span<const std::size_t> n_list) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("net_kernel_equivalence_check: theta must be in (0,1]");
    NetKernelReport rep;
    const double delta = 1e-10;
    for (std::size_t n : n_list) {
        TimeNet net = theta_net(n, theta);
        double sum = 0.0;
        for (std::size_t i = 1; i < net.knots.size(); ++i) {
            double a = net.knots[i - 1];
            double b = net.knots[i];
            if (b < 1.0) {
                sum += integrate_adaptive([&](double u) { return (b - u) * phi(u); }, a, b,
                                          1e-12);
            } else {
                // geometric samples toward the singular endpoint
                std::vector<double> ts{a}, hs{phi(a)};
                double om = (1.0 - a) * 0.7;
                while (om > delta) {
                    ts.push_back(1.0 - om);
                    hs.push_back(phi(1.0 - om));
                    om *= 0.7;
                }
                sum += kernel_interval_integral(ts, hs, 1.0);
            }
        }
        rep.n.push_back(n);
        rep.scaled_sum.push_back(static_cast<double>(n) * sum);
    }
    // (iii) via the weighted q=1 norm of (1-u)^{2-theta} phi
    WeightedCurve curve;
    curve.delta = 1e-8;
    double om = 1.0;
    std::vector<double> oms;
    while (om > curve.delta) {
        oms.push_back(om);
        om *= 0.97;
    }
    oms.push_back(curve.delta);
    for (double one_minus_u : oms) {
        double u = 1.0 - one_minus_u;
        curve.t.push_back(u);
        curve.value.push_back(std::pow(one_minus_u, 2.0 - theta) * phi(u));
    }
    // the u=0 sample is included via oms.front() == 1 -> t = 0
    WeightedNorm w = weighted_q_norm(curve, 1.0);
    rep.weighted_integral = w.value;
    rep.weighted_divergent = w.divergent;
    rep.sums_bounded =
        !rep.scaled_sum.empty() && rep.scaled_sum.back() <= 2.0 * rep.scaled_sum.front();
    return rep;
}

}  // namespace fracnet
