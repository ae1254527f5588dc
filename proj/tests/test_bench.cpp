#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "purex/bench.hpp"

using namespace purex;
using namespace purex::bench;

namespace {

const char* kTwoBernoulli = R"(
# two-arm sanity problem
[problem]
delta = 0.1

[arms.0]
preset = bernoulli
p = 0.9

[arms.1]
preset = bernoulli
p = 0.1

[reward]
kind = mean

[case]
kind = hoeffding_mean
b = 1

[run]
framework = lucb
replications = 5
seed = 7
)";

ExperimentConfig config_from(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

}  // namespace

TEST_CASE("config parsing round trip") {
    const auto cfg = config_from(kTwoBernoulli);
    CHECK(cfg.problem.delta == doctest::Approx(0.1));
    CHECK(cfg.problem.arms.size() == 2);
    CHECK(cfg.framework == Framework::Lucb);
    CHECK(cfg.replications == 5);
    CHECK(cfg.base_seed == 7);
    CHECK(cfg.format == ReportFormat::Csv);
}

TEST_CASE("config errors carry field paths") {
    CHECK_THROWS_WITH_AS(config_from("[problem]\ndelta=0.1\nbogus=1\n"),
                         doctest::Contains("problem.bogus"), ConfigError);
    CHECK_THROWS_WITH_AS(config_from("[nonsense]\nx=1\n"), doctest::Contains("nonsense"),
                         ConfigError);
    CHECK_THROWS_AS(config_from(std::string(kTwoBernoulli) + "[arms.3]\npreset=bernoulli\np=0.5\n"),
                    ConfigError);
    CHECK_THROWS_AS(config_from("[problem]\ndelta=not_a_number\n"), ConfigError);

    // Missing case constants and unknown values are rejected.
    std::string broken = kTwoBernoulli;
    const auto pos = broken.find("hoeffding_mean");
    broken.replace(pos, 14, "finite_tv");
    CHECK_THROWS_AS(config_from(broken), ConfigError);

    std::string bad_fw = kTwoBernoulli;
    const auto fw = bad_fw.find("framework = lucb");
    bad_fw.replace(fw, 16, "framework = ucb1");
    CHECK_THROWS_AS(config_from(bad_fw), ConfigError);
}

TEST_CASE("target arm keys inside the reward section") {
    const char* text = R"(
[problem]
delta = 0.1
[arms.0]
preset = categorical
probs = 0.6,0.2,0.2
[arms.1]
preset = categorical
probs = 0.2,0.4,0.4
[reward]
kind = neg_distance_to_target
distance = tv
target_preset = categorical
target_probs = 0.6,0.2,0.2
[case]
kind = finite_tv
support_size = 3
[run]
framework = racing
replications = 2
seed = 1
)";
    const auto cfg = config_from(text);
    const auto& r = std::get<NegDistanceToTarget>(cfg.problem.reward.kind);
    CHECK(r.distance == DistanceKind::TotalVariation);
    CHECK(std::get<DiscreteFinite>(r.target).probs[0] == doctest::Approx(0.6));
    const auto report = run(cfg);
    CHECK(report.rows.size() == 2);
    CHECK(report.error_rate <= 0.5);
}

TEST_CASE("run aggregates match the rows and single-rep degenerate case") {
    auto cfg = config_from(kTwoBernoulli);
    cfg.replications = 1;
    const auto report = run(cfg);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.mean_pulls == doctest::Approx(double(report.rows[0].total_pulls)));
    CHECK(report.median_pulls == doctest::Approx(double(report.rows[0].total_pulls)));
    CHECK(report.p95_pulls == doctest::Approx(double(report.rows[0].total_pulls)));
    CHECK(report.error_rate == (report.rows[0].correct ? 0.0 : 1.0));
}

TEST_CASE("reports are byte identical across repeated runs") {
    const auto cfg = config_from(kTwoBernoulli);
    const auto a = run(cfg);
    const auto b = run(cfg);
    CHECK(to_csv(a) == to_csv(b));
    CHECK(to_json(a) == to_json(b));
}

TEST_CASE("csv schema is fixed and json mirrors it") {
    const auto cfg = config_from(kTwoBernoulli);
    const auto report = run(cfg);
    const std::string csv = to_csv(report);
    CHECK(csv.starts_with("seed,framework,output_arm,correct,total_pulls,n_arm_0,n_arm_1\n"));

    const auto j = nlohmann::json::parse(to_json(report));
    REQUIRE(j["rows"].size() == report.rows.size());
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        CHECK(j["rows"][i]["seed"] == report.rows[i].seed);
        CHECK(j["rows"][i]["output_arm"] == report.rows[i].output_arm);
        CHECK(j["rows"][i]["total_pulls"] == report.rows[i].total_pulls);
    }
    CHECK(j["aggregates"]["racing_bound"] == report.racing_bound);
    CHECK(j["aggregates"]["lucb_bound"] == report.lucb_bound);
}

TEST_CASE("error rate stays near delta on the sanity problem") {
    auto cfg = config_from(kTwoBernoulli);
    cfg.replications = 200;
    const auto report = run(cfg);
    CHECK(report.error_rate <= 0.1 + 3.0 * std::sqrt(0.09 / 200.0));
}

TEST_CASE("check suites pass and the negative control fails") {
    const auto metrics = check("metrics");
    CHECK(metrics.ok());
    const auto confidence = check("confidence");
    CHECK(confidence.ok());
    CHECK_THROWS_AS(check("nope"), ConfigError);

    const auto corrupted = check("confidence", 1.0);
    CHECK_FALSE(corrupted.ok());
}

TEST_CASE("sweep over delta produces a scaling summary") {
    auto cfg = config_from(kTwoBernoulli);
    cfg.replications = 30;
    const auto result = sweep(cfg, "delta", {0.1, 0.01});
    REQUIRE(result.points.size() == 2);
    CHECK(result.points[1].report.mean_pulls > result.points[0].report.mean_pulls);
    REQUIRE(result.log_inv_delta_slope.has_value());
    CHECK(*result.log_inv_delta_slope > 0.0);

    const auto empty = sweep(cfg, "delta", {});
    CHECK(empty.points.empty());
    CHECK_THROWS_AS(sweep(cfg, "learning_rate", {0.1}), ConfigError);
}

TEST_CASE("bound summary matches the confidence module") {
    const auto cfg = config_from(kTwoBernoulli);
    const auto b = bound(cfg);
    REQUIRE(b.gaps.size() == 2);
    CHECK(b.gaps[0] == doctest::Approx(0.8));
    CHECK(b.racing_bound ==
          racing_complexity_bound(cfg.problem.reward.confidence, b.gaps, 0.1));
    CHECK(b.lucb_bound == lucb_complexity_bound(cfg.problem.reward.confidence, b.gaps, 0.1));
}
