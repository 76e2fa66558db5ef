#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace fracnet {

enum class ProcessKind { BrownianMotion, GeometricBrownianMotion };

/// Driving diffusion on [0,1]: W itself or the coordinate-wise geometric
/// Brownian motion Y_t = exp(W_t - t/2), both with unit volatility.
struct DiffusionModel {
    ProcessKind kind = ProcessKind::BrownianMotion;
    int dim = 1;

    Eigen::VectorXd start() const;  // Y_0
};

/// Diffusion matrix sigma(y): identity for BM, diag(y) for GBM.
/// Throws std::domain_error on non-positive GBM coordinates.
Eigen::MatrixXd sigma(const DiffusionModel& model, const Eigen::VectorXd& y);

/// y_k = w_k for BM, y_k = exp(w_k - t/2) for GBM.
Eigen::VectorXd map_w_to_y(const DiffusionModel& model, double t, const Eigen::VectorXd& w);

/// Strictly increasing knot sequence covering [0,1]. Carries both net knots
/// and quadrature knots; the default refinement adds 1 - 2^-j near the
/// horizon so singular integrands stay resolved.
class TimeGrid {
public:
    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> knots);

    /// Union of base knots, {0,1} and the geometric refinement
    /// 1 - 2^-j, j = 1..refine_j.
    static TimeGrid refined(std::vector<double> base, int refine_j = 40);

    const std::vector<double>& knots() const { return knots_; }
    std::size_t size() const { return knots_.size(); }
    double operator[](std::size_t i) const { return knots_[i]; }

    bool contains(double t) const;
    /// Index of an exact knot; throws std::invalid_argument if absent.
    std::size_t index_of(double t) const;
    /// Smallest knot >= t.
    double snap_up(double t) const;

private:
    std::vector<double> knots_;
};

/// Seeded batch of Brownian values on a grid, path-major layout.
/// Y values are derived on demand via map_w_to_y.
struct PathBatch {
    TimeGrid grid;
    int dim = 1;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    std::vector<double> w;  // [path][knot][coord]

    double w_at(std::size_t path, std::size_t knot, int coord) const {
        return w[(path * grid.size() + knot) * static_cast<std::size_t>(dim) +
                 static_cast<std::size_t>(coord)];
    }
    std::span<const double> path(std::size_t p) const {
        std::size_t stride = grid.size() * static_cast<std::size_t>(dim);
        return {w.data() + p * stride, stride};
    }
};

/// Writes the W values of one path into w_out (size grid.size()*dim).
/// Exact Gaussian increments; variates are counter-based per
/// (path, interval, coord), so output is independent of batching.
void sample_path(const DiffusionModel& model, const TimeGrid& grid, std::uint64_t seed,
                 std::size_t path, std::span<double> w_out);

PathBatch simulate_paths(const DiffusionModel& model, const TimeGrid& grid,
                         std::size_t n_paths, std::uint64_t seed);

}  // namespace fracnet
