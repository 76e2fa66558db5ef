#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracnet/experiment.hpp"

namespace {

using fracnet::ExperimentConfig;

void add_common_flags(CLI::App* cmd, ExperimentConfig& config,
                      std::vector<std::string>& raw_params) {
    cmd->add_option("--model", config.model, "driving process: bm or gbm");
    cmd->add_option("--payoff", config.payoff, "payoff name from the catalog");
    cmd->add_option("--param", raw_params, "payoff parameter as key=value")
        ->type_name("KEY=VALUE");
    cmd->add_option("--net", config.net, "net family: equidistant, theta or rule:<name>");
    cmd->add_option("--theta", config.theta, "net concentration exponent in (0,1]");
    cmd->add_option("--p", config.p_list, "moment orders");
    cmd->add_option("--n", config.n_list, "net sizes");
    cmd->add_option("--paths", config.n_paths, "Monte Carlo paths");
    cmd->add_option("--seed", config.seed, "root seed (0 unless overridden)");
    cmd->add_option("--out", config.out, "output path (stdout when omitted)");
    cmd->add_option("--format", config.format, "csv or json");
    cmd->add_option("--grid-refine", config.grid_refine,
                    "geometric refinement depth of the simulation grid");
}

void apply_params(ExperimentConfig& config, const std::vector<std::string>& raw_params) {
    for (const std::string& kv : raw_params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw CLI::ValidationError("--param expects key=value, got " + kv);
        config.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
}

void emit(const ExperimentConfig& config, const std::string& content) {
    if (config.out.empty())
        std::cout << content;
    else
        fracnet::write_file(config.out, content);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Riemann approximation error studies for Brownian payoffs"};
    app.require_subcommand(1);

    ExperimentConfig config;
    std::vector<std::string> raw_params;
    std::string level = "fast";

    CLI::App* nets = app.add_subcommand("nets", "emit time-net knots and meshes");
    CLI::App* simulate =
        app.add_subcommand("simulate", "error norms against the square function");
    CLI::App* rates = app.add_subcommand("rates", "convergence rate study over n");
    CLI::App* smooth = app.add_subcommand("smoothness", "decay curves and theta fit");
    CLI::App* verify = app.add_subcommand("verify", "cross-module consistency checks");
    for (CLI::App* cmd : {nets, simulate, rates, smooth})
        add_common_flags(cmd, config, raw_params);
    verify->add_option("--level", level, "fast or full");
    verify->add_option("--out", config.out, "output path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        apply_params(config, raw_params);

        if (nets->parsed()) {
            config.validate();
            emit(config, fracnet::nets_csv(config));
        } else if (simulate->parsed()) {
            config.validate();
            fracnet::Payoff payoff = fracnet::payoff_by_name(config.payoff, config.params);
            fracnet::DiffusionModel model = payoff.model();
            std::vector<fracnet::EquivalenceEntry> entries;
            for (double p : config.p_list) {
                std::vector<fracnet::NetSpec> specs;
                for (std::size_t n : config.n_list)
                    specs.push_back({config.net, n, config.theta});
                auto batch = fracnet::equivalence_ratio(payoff, model, specs, p,
                                                        config.n_paths, config.seed);
                entries.insert(entries.end(), batch.begin(), batch.end());
            }
            emit(config, fracnet::equivalence_csv(config, entries));
        } else if (rates->parsed()) {
            config.validate();
            auto t0 = std::chrono::steady_clock::now();
            std::vector<fracnet::RateReport> reports = fracnet::run_rate_studies(config);
            double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            emit(config, config.format == "json"
                             ? fracnet::rate_report_json(config, reports, wall)
                             : fracnet::rate_report_csv(config, reports));
        } else if (smooth->parsed()) {
            config.validate();
            fracnet::Payoff payoff = fracnet::payoff_by_name(config.payoff, config.params);
            std::vector<double> grid = config.t_grid();
            std::string content;
            for (double p : config.p_list) {
                fracnet::SmoothnessCurve curve =
                    fracnet::smoothness_curves(payoff, p, grid, config.n_paths, config.seed);
                std::string block = fracnet::smoothness_csv(config, curve);
                if (!content.empty()) block.erase(0, block.find('\n') + 1);
                content += block;
            }
            emit(config, content);
        } else if (verify->parsed()) {
            fracnet::VerifyResult result = fracnet::verify_suite(level);
            emit(config, fracnet::verify_json(result));
            return result.passed ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
