#include "fracnet/payoff.hpp"

#include <cmath>
#include <stdexcept>

#include "fracnet/math.hpp"
#include "fracnet/quadrature.hpp"

namespace fracnet {

namespace {

Eigen::VectorXd scalar(double x) {
    Eigen::VectorXd v(1);
    v[0] = x;
    return v;
}

// Gauss-Hermite abscissa count for the d >= 2 tensor fallback.
constexpr int kGhNodes = 128;

// Nodes/weights for E h(Z), Z ~ N(0,1): Golub-Welsch on the probabilists'
// Hermite Jacobi matrix (off-diagonal sqrt(k)).
struct GhRule {
    std::vector<double> node, weight;
};

const GhRule& gh_rule() {
    static const GhRule rule = [] {
        GhRule r;
        const int n = kGhNodes;
        Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
        for (int k = 1; k < n; ++k) {
            double b = std::sqrt(static_cast<double>(k));
            jacobi(k, k - 1) = b;
            jacobi(k - 1, k) = b;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
        r.node.resize(n);
        r.weight.resize(n);
        for (int i = 0; i < n; ++i) {
            r.node[i] = es.eigenvalues()[i];
            double v0 = es.eigenvectors()(0, i);
            r.weight[i] = v0 * v0;  // total mass 1: weights are expectations
        }
        return r;
    }();
    return rule;
}

double d_plus(double y, double strike, double s) {
    return (std::log(y / strike) + 0.5 * s * s) / s;
}

}  // namespace

Payoff make_identity(ProcessKind kind) {
    Payoff p;
    p.name = "identity";
    p.process = kind;
    p.g = [](const Eigen::VectorXd& y) { return y[0]; };
    p.known_theta = {1.0, 2.0};
    AnalyticG a;
    a.value = [](double, const Eigen::VectorXd& y) { return y[0]; };
    a.grad = [](double, const Eigen::VectorXd& y) {
        return Eigen::RowVectorXd::Ones(y.size()).eval();
    };
    a.hess = [](double, const Eigen::VectorXd& y) {
        return Eigen::MatrixXd::Zero(y.size(), y.size()).eval();
    };
    if (kind == ProcessKind::GeometricBrownianMotion) {
        a.grad = [](double, const Eigen::VectorXd& y) {
            Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(y.size());
            g[0] = 1.0;
            return g;
        };
    }
    p.analytic = a;
    return p;
}

Payoff make_quadratic() {
    Payoff p;
    p.name = "quadratic";
    p.process = ProcessKind::BrownianMotion;
    p.g = [](const Eigen::VectorXd& x) { return x[0] * x[0]; };
    p.known_theta = {1.0, 2.0};
    AnalyticG a;
    a.value = [](double t, const Eigen::VectorXd& x) { return x[0] * x[0] + (1.0 - t); };
    a.grad = [](double, const Eigen::VectorXd& x) {
        Eigen::RowVectorXd g(1);
        g[0] = 2.0 * x[0];
        return g;
    };
    a.hess = [](double, const Eigen::VectorXd&) {
        Eigen::MatrixXd h(1, 1);
        h(0, 0) = 2.0;
        return h;
    };
    p.analytic = a;
    return p;
}

Payoff make_call(double strike) {
    if (!(strike > 0.0)) throw std::invalid_argument("make_call: strike must be positive");
    Payoff p;
    p.name = "call";
    p.process = ProcessKind::GeometricBrownianMotion;
    p.g = [strike](const Eigen::VectorXd& y) { return std::max(y[0] - strike, 0.0); };
    p.known_theta = {1.0, 2.0};
    p.kinks_x = {std::log(strike) + 0.5};
    AnalyticG a;
    a.value = [strike](double t, const Eigen::VectorXd& y) {
        if (t >= 1.0) return std::max(y[0] - strike, 0.0);
        double s = std::sqrt(1.0 - t);
        double dp = d_plus(y[0], strike, s);
        return y[0] * norm_cdf(dp) - strike * norm_cdf(dp - s);
    };
    a.grad = [strike](double t, const Eigen::VectorXd& y) {
        double s = std::sqrt(1.0 - t);
        Eigen::RowVectorXd g(1);
        g[0] = norm_cdf(d_plus(y[0], strike, s));
        return g;
    };
    a.hess = [strike](double t, const Eigen::VectorXd& y) {
        double s = std::sqrt(1.0 - t);
        Eigen::MatrixXd h(1, 1);
        h(0, 0) = norm_pdf(d_plus(y[0], strike, s)) / (y[0] * s);
        return h;
    };
    p.analytic = a;
    return p;
}

Payoff make_binary(ProcessKind kind, double strike) {
    Payoff p;
    p.name = "binary";
    p.process = kind;
    p.g = [strike](const Eigen::VectorXd& y) { return y[0] >= strike ? 1.0 : 0.0; };
    p.known_theta = {0.5, 2.0};
    AnalyticG a;
    if (kind == ProcessKind::BrownianMotion) {
        p.kinks_x = {strike};
        a.value = [strike](double t, const Eigen::VectorXd& x) {
            if (t >= 1.0) return x[0] >= strike ? 1.0 : 0.0;
            return norm_cdf((x[0] - strike) / std::sqrt(1.0 - t));
        };
        a.grad = [strike](double t, const Eigen::VectorXd& x) {
            double s = std::sqrt(1.0 - t);
            Eigen::RowVectorXd g(1);
            g[0] = norm_pdf((x[0] - strike) / s) / s;
            return g;
        };
        a.hess = [strike](double t, const Eigen::VectorXd& x) {
            double s = std::sqrt(1.0 - t);
            double z = (x[0] - strike) / s;
            Eigen::MatrixXd h(1, 1);
            h(0, 0) = -z * norm_pdf(z) / (s * s);
            return h;
        };
    } else {
        if (!(strike > 0.0))
            throw std::invalid_argument("make_binary: GBM strike must be positive");
        p.kinks_x = {std::log(strike) + 0.5};
        a.value = [strike](double t, const Eigen::VectorXd& y) {
            if (t >= 1.0) return y[0] >= strike ? 1.0 : 0.0;
            double s = std::sqrt(1.0 - t);
            return norm_cdf(d_plus(y[0], strike, s) - s);
        };
        a.grad = [strike](double t, const Eigen::VectorXd& y) {
            double s = std::sqrt(1.0 - t);
            Eigen::RowVectorXd g(1);
            g[0] = norm_pdf(d_plus(y[0], strike, s) - s) / (y[0] * s);
            return g;
        };
        a.hess = [strike](double t, const Eigen::VectorXd& y) {
            double s = std::sqrt(1.0 - t);
            double dm = d_plus(y[0], strike, s) - s;
            Eigen::MatrixXd h(1, 1);
            h(0, 0) = -norm_pdf(dm) * (dm + s) / (y[0] * y[0] * s * s);
            return h;
        };
    }
    p.analytic = a;
    return p;
}

Payoff make_log_quadratic() {
    Payoff p;
    p.name = "logquad";
    p.process = ProcessKind::GeometricBrownianMotion;
    p.g = [](const Eigen::VectorXd& y) {
        double x = std::log(y[0]) + 0.5;
        return x * x;
    };
    p.known_theta = {1.0, 2.0};
    AnalyticG a;
    a.value = [](double t, const Eigen::VectorXd& y) {
        double x = std::log(y[0]) + 0.5 * t;
        return x * x + (1.0 - t);
    };
    a.grad = [](double t, const Eigen::VectorXd& y) {
        double x = std::log(y[0]) + 0.5 * t;
        Eigen::RowVectorXd g(1);
        g[0] = 2.0 * x / y[0];
        return g;
    };
    a.hess = [](double t, const Eigen::VectorXd& y) {
        double x = std::log(y[0]) + 0.5 * t;
        Eigen::MatrixXd h(1, 1);
        h(0, 0) = 2.0 * (1.0 - x) / (y[0] * y[0]);
        return h;
    };
    p.analytic = a;
    return p;
}

Payoff make_product(const std::vector<Payoff>& components) {
    if (components.empty()) throw std::invalid_argument("make_product: no components");
    const ProcessKind kind = components.front().process;
    for (const auto& c : components) {
        if (c.dim != 1) throw std::invalid_argument("make_product: components must be 1-d");
        if (c.process != kind)
            throw std::invalid_argument("make_product: mixed processes");
        if (!c.analytic)
            throw std::invalid_argument("make_product: components need analytic families");
    }
    Payoff p;
    p.name = "product";
    for (const auto& c : components) p.name += ":" + c.name;
    p.dim = static_cast<int>(components.size());
    p.process = kind;
    auto comps = components;  // captured by value
    p.g = [comps](const Eigen::VectorXd& y) {
        double prod = 1.0;
        for (std::size_t k = 0; k < comps.size(); ++k) prod *= comps[k].g(scalar(y[k]));
        return prod;
    };
    for (const auto& c : comps)
        for (double kx : c.kinks_x) p.kinks_x.push_back(kx);
    AnalyticG a;
    a.value = [comps](double t, const Eigen::VectorXd& y) {
        double prod = 1.0;
        for (std::size_t k = 0; k < comps.size(); ++k)
            prod *= comps[k].analytic->value(t, scalar(y[k]));
        return prod;
    };
    a.grad = [comps](double t, const Eigen::VectorXd& y) {
        std::size_t d = comps.size();
        std::vector<double> v(d), dv(d);
        for (std::size_t k = 0; k < d; ++k) {
            v[k] = comps[k].analytic->value(t, scalar(y[k]));
            dv[k] = comps[k].analytic->grad(t, scalar(y[k]))(0);
        }
        Eigen::RowVectorXd g(d);
        for (std::size_t k = 0; k < d; ++k) {
            double prod = dv[k];
            for (std::size_t j = 0; j < d; ++j)
                if (j != k) prod *= v[j];
            g[static_cast<Eigen::Index>(k)] = prod;
        }
        return g;
    };
    a.hess = [comps](double t, const Eigen::VectorXd& y) {
        std::size_t d = comps.size();
        std::vector<double> v(d), dv(d), d2v(d);
        for (std::size_t k = 0; k < d; ++k) {
            v[k] = comps[k].analytic->value(t, scalar(y[k]));
            dv[k] = comps[k].analytic->grad(t, scalar(y[k]))(0);
            d2v[k] = comps[k].analytic->hess(t, scalar(y[k]))(0, 0);
        }
        Eigen::MatrixXd h(d, d);
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t l = 0; l < d; ++l) {
                double prod = (k == l) ? d2v[k] : dv[k] * dv[l];
                for (std::size_t j = 0; j < d; ++j)
                    if (j != k && j != l) prod *= v[j];
                h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = prod;
            }
        }
        return h;
    };
    p.analytic = a;
    return p;
}

Payoff payoff_by_name(const std::string& name, const std::map<std::string, double>& params) {
    auto strike = [&](double fallback) {
        auto it = params.find("strike");
        return it == params.end() ? fallback : it->second;
    };
    if (name == "identity") return make_identity(ProcessKind::BrownianMotion);
    if (name == "identity_gbm") return make_identity(ProcessKind::GeometricBrownianMotion);
    if (name == "quadratic") return make_quadratic();
    if (name == "call") return make_call(strike(1.0));
    if (name == "binary") return make_binary(ProcessKind::BrownianMotion, strike(0.0));
    if (name == "binary_gbm")
        return make_binary(ProcessKind::GeometricBrownianMotion, strike(1.0));
    if (name == "logquad") return make_log_quadratic();
    throw std::invalid_argument("unknown payoff: " + name);
}

namespace {

// x coordinates of a state y at time t (inverse of map_w_to_y)
Eigen::VectorXd x_of_y(const DiffusionModel& model, double t, const Eigen::VectorXd& y) {
    if (model.kind == ProcessKind::BrownianMotion) return y;
    return (y.array().log() + 0.5 * t).matrix();
}

double quadrature_G(const Payoff& payoff, const DiffusionModel& model, double t,
                    const Eigen::VectorXd& y) {
    if (model.dim > 3)
        throw std::invalid_argument("conditional_expectation: quadrature fallback supports d <= 3");
    if (t >= 1.0) return payoff.g(y);
    const double s = std::sqrt(1.0 - t);
    Eigen::VectorXd x = x_of_y(model, t, y);
    auto f = [&](const Eigen::VectorXd& xv) {
        return payoff.g(map_w_to_y(model, 1.0, xv));
    };
    if (model.dim == 1) {
        std::vector<double> breaks;
        for (double kx : payoff.kinks_x) breaks.push_back(kx);
        Eigen::VectorXd xv(1);
        return expect_normal(
            [&](double u) {
                xv[0] = u;
                return f(xv);
            },
            x[0], s, breaks, 1e-12);
    }
    // tensor Gauss-Hermite for d in {2,3}
    const GhRule& r = gh_rule();
    const int d = model.dim;
    double total = 0.0;
    Eigen::VectorXd xv(d);
    if (d == 2) {
        for (int i = 0; i < kGhNodes; ++i) {
            xv[0] = x[0] + s * r.node[i];
            double inner = 0.0;
            for (int j = 0; j < kGhNodes; ++j) {
                xv[1] = x[1] + s * r.node[j];
                inner += r.weight[j] * f(xv);
            }
            total += r.weight[i] * inner;
        }
        return total;
    }
    for (int i = 0; i < kGhNodes; ++i) {
        xv[0] = x[0] + s * r.node[i];
        double mid = 0.0;
        for (int j = 0; j < kGhNodes; ++j) {
            xv[1] = x[1] + s * r.node[j];
            double inner = 0.0;
            for (int k = 0; k < kGhNodes; ++k) {
                xv[2] = x[2] + s * r.node[k];
                inner += r.weight[k] * f(xv);
            }
            mid += r.weight[j] * inner;
        }
        total += r.weight[i] * mid;
    }
    return total;
}

}  // namespace

double conditional_expectation(const Payoff& payoff, const DiffusionModel& model, double t,
                               const Eigen::VectorXd& y) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("conditional_expectation: t must be in [0,1]");
    if (payoff.analytic) return payoff.analytic->value(t, y);
    return quadrature_G(payoff, model, t, y);
}

double h_value(const Payoff& payoff, const DiffusionModel& model, double t,
               const Eigen::VectorXd& y) {
    if (!(t < 1.0)) throw std::invalid_argument("h_value: t = 1 is singular");
    Eigen::MatrixXd hess;
    if (payoff.analytic) {
        hess = payoff.analytic->hess(t, y);
    } else {
        // central differences of the quadrature G, step scaled to the horizon
        const int d = model.dim;
        const double h = std::sqrt(1.0 - t) * 1e-4;
        hess.resize(d, d);
        double g0 = conditional_expectation(payoff, model, t, y);
        for (int k = 0; k < d; ++k) {
            for (int l = k; l < d; ++l) {
                Eigen::VectorXd ypp = y, ypm = y, ymp = y, ymm = y;
                ypp[k] += h;
                ypp[l] += h;
                ypm[k] += h;
                ypm[l] -= h;
                ymp[k] -= h;
                ymp[l] += h;
                ymm[k] -= h;
                ymm[l] -= h;
                double v;
                if (k == l) {
                    Eigen::VectorXd yp = y, ym = y;
                    yp[k] += h;
                    ym[k] -= h;
                    v = (conditional_expectation(payoff, model, t, yp) - 2.0 * g0 +
                         conditional_expectation(payoff, model, t, ym)) /
                        (h * h);
                } else {
                    v = (conditional_expectation(payoff, model, t, ypp) -
                         conditional_expectation(payoff, model, t, ypm) -
                         conditional_expectation(payoff, model, t, ymp) +
                         conditional_expectation(payoff, model, t, ymm)) /
                        (4.0 * h * h);
                }
                hess(k, l) = v;
                hess(l, k) = v;
            }
        }
    }
    Eigen::VectorXd diag = sigma(model, y).diagonal();
    return (diag.asDiagonal() * hess * diag.asDiagonal()).norm();
}

Payoff f_view(const Payoff& payoff) {
    if (payoff.process == ProcessKind::BrownianMotion) return payoff;
    Payoff out;
    out.name = payoff.name + "|bm";
    out.dim = payoff.dim;
    out.process = ProcessKind::BrownianMotion;
    out.known_theta = payoff.known_theta;
    out.kinks_x = payoff.kinks_x;
    auto src_g = payoff.g;
    const int d = payoff.dim;
    DiffusionModel gbm{ProcessKind::GeometricBrownianMotion, d};
    out.g = [src_g, gbm](const Eigen::VectorXd& x) {
        return src_g(map_w_to_y(gbm, 1.0, x));
    };
    if (payoff.analytic) {
        AnalyticG src = *payoff.analytic;
        AnalyticG a;
        a.value = [src, gbm](double t, const Eigen::VectorXd& x) {
            return src.value(t, map_w_to_y(gbm, t, x));
        };
        // dF/dx_k = y_k dG/dy_k; d2F/dx_k dx_l = y_k y_l G_kl + delta_kl y_k G_k
        a.grad = [src, gbm](double t, const Eigen::VectorXd& x) {
            Eigen::VectorXd y = map_w_to_y(gbm, t, x);
            Eigen::RowVectorXd g = src.grad(t, y);
            return (g.array() * y.transpose().array()).matrix().eval();
        };
        a.hess = [src, gbm](double t, const Eigen::VectorXd& x) {
            Eigen::VectorXd y = map_w_to_y(gbm, t, x);
            Eigen::RowVectorXd g = src.grad(t, y);
            Eigen::MatrixXd h = src.hess(t, y);
            Eigen::MatrixXd out_h = y.asDiagonal() * h * y.asDiagonal();
            out_h.diagonal() += (g.transpose().array() * y.array()).matrix();
            return out_h.eval();
        };
        out.analytic = a;
    }
    return out;
}

HessianIdentityReport check_bm_gbm_hessian_identity(
    const Payoff& payoff, const std::vector<std::pair<double, Eigen::VectorXd>>& probes) {
    if (payoff.process != ProcessKind::GeometricBrownianMotion || !payoff.analytic)
        throw std::invalid_argument(
            "check_bm_gbm_hessian_identity: needs a GBM payoff with analytic family");
    DiffusionModel gbm{ProcessKind::GeometricBrownianMotion, payoff.dim};
    HessianIdentityReport rep;
    const int d = payoff.dim;
    auto F = [&](double t, const Eigen::VectorXd& x) {
        return payoff.analytic->value(t, map_w_to_y(gbm, t, x));
    };
    for (const auto& [t, x] : probes) {
        if (t > 1.0 - 1e-3)
            throw std::invalid_argument("check_bm_gbm_hessian_identity: probe too close to t=1");
        Eigen::VectorXd y = map_w_to_y(gbm, t, x);
        Eigen::MatrixXd hess = payoff.analytic->hess(t, y);
        // step balances truncation against roundoff for second differences
        const double h = std::sqrt(1.0 - t) * 1e-3;
        for (int k = 0; k < d; ++k) {
            Eigen::VectorXd xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            double fk = (F(t, xp) - F(t, xm)) / (2.0 * h);
            for (int l = 0; l < d; ++l) {
                double fkl;
                if (k == l) {
                    fkl = (F(t, xp) - 2.0 * F(t, x) + F(t, xm)) / (h * h);
                } else {
                    Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
                    xpp[k] += h;
                    xpp[l] += h;
                    xpm[k] += h;
                    xpm[l] -= h;
                    xmp[k] -= h;
                    xmp[l] += h;
                    xmm[k] -= h;
                    xmm[l] -= h;
                    fkl = (F(t, xpp) - F(t, xpm) - F(t, xmp) + F(t, xmm)) / (4.0 * h * h);
                }
                double lhs = y[k] * y[l] * hess(k, l);
                double rhs = fkl - (k == l ? fk : 0.0);
                double res = std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
                rep.max_residual = std::max(rep.max_residual, res);
            }
        }
        ++rep.n_probes;
    }
    return rep;
}

}  // namespace fracnet
