#include "fracnet/timenet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracnet {

TimeNet equidistant(std::size_t n) {
    if (n < 1) throw std::invalid_argument("equidistant: n must be >= 1");
    TimeNet net;
    net.knots.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        net.knots[i] = static_cast<double>(i) / static_cast<double>(n);
    net.knots[0] = 0.0;
    net.knots[n] = 1.0;
    return net;
}

TimeNet theta_net(std::size_t n, double theta) {
    if (n < 1) throw std::invalid_argument("theta_net: n must be >= 1");
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("theta_net: theta must be in (0,1]");
    if (theta == 1.0) return equidistant(n);
    TimeNet net;
    net.knots.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        double frac = 1.0 - static_cast<double>(i) / static_cast<double>(n);
        net.knots[i] = 1.0 - std::pow(frac, 1.0 / theta);
    }
    net.knots[0] = 0.0;
    net.knots[n] = 1.0;
    return net;
}

double mesh_theta(const TimeNet& net, double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("mesh_theta: theta must be in (0,1]");
    double sup = 0.0;
    for (std::size_t i = 1; i < net.knots.size(); ++i) {
        double dt = net.knots[i] - net.knots[i - 1];
        double ratio = (theta == 1.0)
                           ? dt
                           : dt / std::pow(1.0 - net.knots[i - 1], 1.0 - theta);
        if (ratio > sup) sup = ratio;
    }
    return sup;
}

double theta_net_mesh(std::size_t n, double theta) {
    if (n < 1) throw std::invalid_argument("theta_net_mesh: n must be >= 1");
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("theta_net_mesh: theta must be in (0,1]");
    if (theta == 1.0) return 1.0 / static_cast<double>(n);
    double sup = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        double a = (static_cast<double>(n) - static_cast<double>(i) + 1.0) /
                   static_cast<double>(n);
        double b = (static_cast<double>(n) - static_cast<double>(i)) / static_cast<double>(n);
        double r = (i == n) ? a : -a * std::expm1(std::log(b / a) / theta);
        if (r > sup) sup = r;
    }
    return sup;
}

TimeNet realize_random_net(const AdaptiveNetRule& rule, const DiffusionModel& model,
                           const TimeGrid& grid, std::span<const double> w_path) {
    if (rule.max_steps < 1)
        throw std::invalid_argument("realize_random_net: max_steps must be >= 1");
    constexpr double cap = 1.0 - 1e-9;
    const int d = model.dim;
    TimeNet net;
    net.knots.push_back(0.0);
    double t = 0.0;
    for (std::size_t i = 1; i < rule.max_steps; ++i) {
        std::size_t j = grid.index_of(t);
        Eigen::VectorXd w(d);
        for (int k = 0; k < d; ++k)
            w[k] = w_path[j * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)];
        double proposed = rule.step(t, map_w_to_y(model, t, w));
        if (!(proposed > t))
            throw std::invalid_argument("realize_random_net: rule emitted non-increasing time at step " +
                                        std::to_string(i));
        double next = grid.snap_up(proposed);
        if (next >= cap || next >= 1.0) break;
        if (next <= t) {
            // snapping collapsed onto the current knot; advance one grid knot
            std::size_t idx = grid.index_of(t);
            if (idx + 2 >= grid.size()) break;
            next = grid[idx + 1];
        }
        net.knots.push_back(next);
        t = next;
    }
    net.knots.push_back(1.0);
    return net;
}

}  // namespace fracnet
