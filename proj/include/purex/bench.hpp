#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "purex/explorer.hpp"

namespace purex::bench {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Framework { Racing, Lucb };
enum class ReportFormat { Csv, Json };

struct ExperimentConfig {
    Problem problem;
    Framework framework = Framework::Lucb;
    std::uint64_t replications = 1;
    std::uint64_t base_seed = 0;
    std::optional<std::string> out_path;
    ReportFormat format = ReportFormat::Csv;
};

// Parses the sectioned key=value config text. Unknown sections or keys raise
// ConfigError with the offending field path.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

struct ReplicationRow {
    std::uint64_t seed = 0;
    std::size_t output_arm = 0;
    bool correct = false;
    std::uint64_t total_pulls = 0;
    std::vector<std::uint64_t> arm_pulls;
    bool capped = false;
};

struct Report {
    std::string framework;
    std::vector<ReplicationRow> rows;
    double error_rate = 0.0;
    double error_ci_low = 0.0;   // Wilson-free normal-approximation band
    double error_ci_high = 0.0;
    double mean_pulls = 0.0;
    double median_pulls = 0.0;
    double p95_pulls = 0.0;
    std::uint64_t racing_bound = 0;
    std::uint64_t lucb_bound = 0;
};

Report run(const ExperimentConfig& config);

std::string to_csv(const Report& report);
std::string to_json(const Report& report);

// Built-in invariant suites. `corruption` shifts one side of every checked
// inequality; zero for real checks, nonzero only as a negative control.
struct CheckResult {
    std::vector<std::pair<std::string, bool>> checks;
    bool ok() const {
        for (const auto& [name, pass] : checks)
            if (!pass) return false;
        return true;
    }
};
CheckResult check(const std::string& suite, double corruption = 0.0);

struct SweepPoint {
    std::string param;
    double value = 0.0;
    Report report;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    // Least-squares slope of mean pulls against log(1/delta), when delta was
    // the swept parameter.
    std::optional<double> log_inv_delta_slope;
};

// param is "delta" or "gap" (gap rebuilds a two-arm Bernoulli problem around
// mean 0.5).
SweepResult sweep(const ExperimentConfig& config, const std::string& param,
                  const std::vector<double>& values);

struct BoundSummary {
    std::vector<double> gaps;
    std::uint64_t racing_bound = 0;
    std::uint64_t lucb_bound = 0;
};
BoundSummary bound(const ExperimentConfig& config);

}  // namespace purex::bench
