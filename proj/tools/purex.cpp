#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "purex/bench.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfigError = 2;

void emit(const std::string& text, const std::optional<std::string>& path) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw purex::bench::ConfigError("cannot open output file: " + *path);
    out << text;
}

int cmd_run(purex::bench::ExperimentConfig cfg) {
    const auto report = purex::bench::run(cfg);
    const std::string text = cfg.format == purex::bench::ReportFormat::Csv
                                 ? purex::bench::to_csv(report)
                                 : purex::bench::to_json(report);
    emit(text, cfg.out_path);
    std::fprintf(stderr,
                 "framework=%s replications=%zu error_rate=%.4f mean_pulls=%.1f "
                 "racing_bound=%llu lucb_bound=%llu\n",
                 report.framework.c_str(), report.rows.size(), report.error_rate,
                 report.mean_pulls, static_cast<unsigned long long>(report.racing_bound),
                 static_cast<unsigned long long>(report.lucb_bound));
    return kExitOk;
}

int cmd_check(const std::string& suite) {
    const auto result = purex::bench::check(suite);
    for (const auto& [name, pass] : result.checks)
        std::printf("%-48s %s\n", name.c_str(), pass ? "pass" : "FAIL");
    return result.ok() ? kExitOk : kExitFailure;
}

std::pair<std::string, std::vector<double>> parse_vary(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw purex::bench::ConfigError("--vary expects param=v1,v2,... got '" + spec + "'");
    std::vector<double> values;
    std::stringstream ss(spec.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw purex::bench::ConfigError("--vary: not a number: '" + item + "'");
        }
    }
    return {spec.substr(0, eq), values};
}

int cmd_sweep(const purex::bench::ExperimentConfig& cfg, const std::string& vary) {
    const auto [param, values] = parse_vary(vary);
    const auto result = purex::bench::sweep(cfg, param, values);
    std::printf("%s,framework,error_rate,mean_pulls,median_pulls,p95_pulls\n", param.c_str());
    for (const auto& pt : result.points)
        std::printf("%g,%s,%.6f,%.1f,%.1f,%.1f\n", pt.value, pt.report.framework.c_str(),
                    pt.report.error_rate, pt.report.mean_pulls, pt.report.median_pulls,
                    pt.report.p95_pulls);
    if (result.log_inv_delta_slope)
        std::printf("# slope of mean pulls vs log(1/delta): %.2f\n", *result.log_inv_delta_slope);
    return kExitOk;
}

int cmd_bound(const purex::bench::ExperimentConfig& cfg) {
    const auto b = purex::bench::bound(cfg);
    std::printf("gaps:");
    for (const double g : b.gaps) std::printf(" %.6f", g);
    std::printf("\nracing_bound: %llu\nlucb_bound: %llu\n",
                static_cast<unsigned long long>(b.racing_bound),
                static_cast<unsigned long long>(b.lucb_bound));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pure-exploration bandit engine for distribution-level rewards"};
    app.require_subcommand(1);

    std::string config_path, vary_spec, suite;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::uint64_t> reps_override;
    std::optional<std::string> out_override;
    std::optional<std::string> format_override;

    auto* run_cmd = app.add_subcommand("run", "Run seeded replications of one experiment");
    run_cmd->add_option("--config", config_path, "experiment config file")->required();
    run_cmd->add_option("--seed", seed_override, "override the base seed");
    run_cmd->add_option("--reps", reps_override, "override the replication count");
    run_cmd->add_option("--out", out_override, "write the report to this path");
    run_cmd->add_option("--format", format_override, "csv or json");

    auto* check_cmd = app.add_subcommand("check", "Run a built-in invariant suite");
    check_cmd->add_option("suite", suite, "metrics|estimation|confidence|rewards|explorer|all")
        ->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment over a parameter grid");
    sweep_cmd->add_option("--config", config_path, "experiment config file")->required();
    sweep_cmd->add_option("--vary", vary_spec, "param=v1,v2,... (delta or gap)")->required();

    auto* bound_cmd = app.add_subcommand("bound", "Print the theoretical complexity bounds");
    bound_cmd->add_option("--config", config_path, "experiment config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (check_cmd->parsed()) return cmd_check(suite);
        auto cfg = purex::bench::load_config(config_path);
        if (seed_override) cfg.base_seed = *seed_override;
        if (reps_override) {
            if (*reps_override < 1)
                throw purex::bench::ConfigError("--reps: must be >= 1");
            cfg.replications = *reps_override;
        }
        if (out_override) cfg.out_path = out_override;
        if (format_override) {
            if (*format_override == "csv")
                cfg.format = purex::bench::ReportFormat::Csv;
            else if (*format_override == "json")
                cfg.format = purex::bench::ReportFormat::Json;
            else
                throw purex::bench::ConfigError("--format: expected csv or json");
        }
        if (run_cmd->parsed()) return cmd_run(std::move(cfg));
        if (sweep_cmd->parsed()) return cmd_sweep(cfg, vary_spec);
        if (bound_cmd->parsed()) return cmd_bound(cfg);
    } catch (const purex::bench::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
    return kExitConfigError;
}
