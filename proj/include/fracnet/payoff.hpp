#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracnet/model.hpp"

namespace fracnet {

/// Closed-form family G(t,y) = E(g(Y_1) | Y_t = y) with gradient and
/// Hessian, valid on [0,1) x E (value extends to t = 1).
struct AnalyticG {
    std::function<double(double, const Eigen::VectorXd&)> value;
    std::function<Eigen::RowVectorXd(double, const Eigen::VectorXd&)> grad;
    std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)> hess;
};

struct Payoff {
    std::string name;
    int dim = 1;
    ProcessKind process = ProcessKind::BrownianMotion;
    std::function<double(const Eigen::VectorXd&)> g;
    std::optional<AnalyticG> analytic;
    /// fractional smoothness per marginal index, when known: (theta, p)
    std::optional<std::pair<double, double>> known_theta;
    /// kink / jump locations of the Brownian view f, in x coordinates
    std::vector<double> kinks_x;

    DiffusionModel model() const { return DiffusionModel{process, dim}; }
};

// catalog
Payoff make_identity(ProcessKind kind);
Payoff make_quadratic();                           // g(x) = x^2 on BM
Payoff make_call(double strike);                   // (y - K)_+ on GBM
Payoff make_binary(ProcessKind kind, double strike);  // 1_{[K, inf)}
Payoff make_log_quadratic();                       // GBM payoff whose BM view is x^2
/// Separable product g(y) = prod_k g_k(y_k) of one-dimensional components
/// on the same process; G factorizes.
Payoff make_product(const std::vector<Payoff>& components);

/// Lookup by name with a parameter map (e.g. {"strike", 1.0}).
Payoff payoff_by_name(const std::string& name, const std::map<std::string, double>& params = {});

/// G(t,y); analytic family when available, otherwise quadrature against the
/// Gaussian transition law (piecewise rule split at the payoff's kinks).
double conditional_expectation(const Payoff& payoff, const DiffusionModel& model, double t,
                               const Eigen::VectorXd& y);

/// H_G(t,y) = sqrt(sum_{k,l} (sigma_kk sigma_ll d2G/dy_k dy_l)^2).
/// Rejects t = 1 (singular horizon).
double h_value(const Payoff& payoff, const DiffusionModel& model, double t,
               const Eigen::VectorXd& y);

/// Pull a GBM payoff back to Brownian coordinates: f(x) = g(y(1)),
/// F(t,x) = G(t, y(t)). Identity transform for BM payoffs.
Payoff f_view(const Payoff& payoff);

struct HessianIdentityReport {
    double max_residual = 0.0;
    std::size_t n_probes = 0;
};

/// Verifies y_k y_l d2G/dy_k dy_l = d2F/dx_k dx_l - delta_kl dF/dx_k at the
/// probes, with F differentiated by central differences.
HessianIdentityReport check_bm_gbm_hessian_identity(
    const Payoff& payoff, const std::vector<std::pair<double, Eigen::VectorXd>>& probes);

}  // namespace fracnet
