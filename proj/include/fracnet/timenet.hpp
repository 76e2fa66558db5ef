#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fracnet/model.hpp"

namespace fracnet {

/// Knot sequence 0 = t_0 <= ... <= t_{n-1} < t_n = 1.
struct TimeNet {
    std::vector<double> knots;

    std::size_t steps() const { return knots.size() - 1; }
};

TimeNet equidistant(std::size_t n);

/// Knots 1 - (1 - i/n)^{1/theta}; concentrates near the horizon for
/// theta < 1 and reduces to the equidistant net at theta = 1.
TimeNet theta_net(std::size_t n, double theta);

/// sup_i (t_i - t_{i-1}) / (1 - t_{i-1})^{1-theta}; theta = 1 is the
/// ordinary mesh.
double mesh_theta(const TimeNet& net, double theta);

/// Mesh of the canonical theta net in the cancellation-free per-interval
/// form a (1 - (b/a)^{1/theta}) with a = 1-(i-1)/n, b = 1-i/n. Knots stored
/// as doubles lose the sub-epsilon spacing next to 1, so the sharp bound
/// 1/(theta n) is only checkable in this form.
double theta_net_mesh(std::size_t n, double theta);

/// Predictable step rule: the next knot is a function of the previous
/// knot and the state there only.
struct AdaptiveNetRule {
    std::function<double(double t_prev, const Eigen::VectorXd& y_prev)> step;
    std::size_t max_steps = 1;
};

/// Realizes the rule along one path. Proposed times are snapped up to the
/// simulation grid; intermediate knots are capped at 1 - 1e-9 and the final
/// knot is forced to 1. Throws if the rule emits a non-increasing time.
TimeNet realize_random_net(const AdaptiveNetRule& rule, const DiffusionModel& model,
                           const TimeGrid& grid, std::span<const double> w_path);

}  // namespace fracnet
