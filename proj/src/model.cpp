#include "fracnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <new>
#include <stdexcept>
#include <string>

#include "fracnet/parallel.hpp"
#include "fracnet/rng.hpp"

namespace fracnet {

Eigen::VectorXd DiffusionModel::start() const {
    if (kind == ProcessKind::BrownianMotion) return Eigen::VectorXd::Zero(dim);
    return Eigen::VectorXd::Ones(dim);
}

Eigen::MatrixXd sigma(const DiffusionModel& model, const Eigen::VectorXd& y) {
    if (model.kind == ProcessKind::BrownianMotion)
        return Eigen::MatrixXd::Identity(model.dim, model.dim);
    for (int k = 0; k < y.size(); ++k)
        if (!(y[k] > 0.0))
            throw std::domain_error("sigma: GBM state has non-positive coordinate " +
                                    std::to_string(k));
    return y.asDiagonal();
}

Eigen::VectorXd map_w_to_y(const DiffusionModel& model, double t, const Eigen::VectorXd& w) {
    if (model.kind == ProcessKind::BrownianMotion) return w;
    return (w.array() - 0.5 * t).exp();
}

TimeGrid::TimeGrid(std::vector<double> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 2 || knots_.front() != 0.0 || knots_.back() != 1.0)
        throw std::invalid_argument("TimeGrid: knots must start at 0 and end at 1");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i] > knots_[i - 1]))
            throw std::invalid_argument("TimeGrid: knots must be strictly increasing");
}

TimeGrid TimeGrid::refined(std::vector<double> base, int refine_j) {
    base.push_back(0.0);
    base.push_back(1.0);
    for (int j = 1; j <= refine_j; ++j) base.push_back(1.0 - std::ldexp(1.0, -j));
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    return TimeGrid(std::move(base));
}

bool TimeGrid::contains(double t) const {
    return std::binary_search(knots_.begin(), knots_.end(), t);
}

std::size_t TimeGrid::index_of(double t) const {
    auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
    if (it == knots_.end() || *it != t)
        throw std::invalid_argument("TimeGrid: knot " + std::to_string(t) + " not on grid");
    return static_cast<std::size_t>(it - knots_.begin());
}

double TimeGrid::snap_up(double t) const {
    auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
    if (it == knots_.end()) return 1.0;
    return *it;
}

void sample_path(const DiffusionModel& model, const TimeGrid& grid, std::uint64_t seed,
                 std::size_t path, std::span<double> w_out) {
    const std::size_t m = grid.size();
    const int d = model.dim;
    for (int k = 0; k < d; ++k) w_out[static_cast<std::size_t>(k)] = 0.0;
    for (std::size_t j = 1; j < m; ++j) {
        double sdt = std::sqrt(grid[j] - grid[j - 1]);
        for (int k = 0; k < d; ++k) {
            double z = rng::normal(seed, path, j, static_cast<std::uint64_t>(k));
            w_out[j * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] =
                w_out[(j - 1) * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] +
                sdt * z;
        }
    }
}

PathBatch simulate_paths(const DiffusionModel& model, const TimeGrid& grid,
                         std::size_t n_paths, std::uint64_t seed) {
    if (n_paths < 1) throw std::invalid_argument("simulate_paths: n_paths must be >= 1");
    PathBatch batch;
    batch.grid = grid;
    batch.dim = model.dim;
    batch.n_paths = n_paths;
    batch.seed = seed;
    const std::size_t stride = grid.size() * static_cast<std::size_t>(model.dim);
    try {
        batch.w.resize(n_paths * stride);
    } catch (const std::bad_alloc&) {
        throw std::runtime_error("simulate_paths: allocation of " +
                                 std::to_string(n_paths * stride * sizeof(double)) +
                                 " bytes failed (paths=" + std::to_string(n_paths) +
                                 ", knots=" + std::to_string(grid.size()) + ")");
    }
    parallel_for(n_paths, [&](std::size_t p) {
        sample_path(model, grid, seed, p, {batch.w.data() + p * stride, stride});
    });
    return batch;
}

}  // namespace fracnet
