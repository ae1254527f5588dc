#include "purex/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace purex::bench {

namespace {

// ---------------------------------------------------------------------------
// Config text parsing

using Section = std::vector<std::pair<std::string, std::string>>;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::map<std::string, Section> parse_sections(std::istream& in) {
    std::map<std::string, Section> out;
    std::string line, current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            current = trim(t.substr(1, t.size() - 2));
            if (current.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            out[current];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        if (current.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        out[current].emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return out;
}

double parse_double(const std::string& section, const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(section + "." + key + ": not a number: '" + v + "'");
    }
}

std::uint64_t parse_uint(const std::string& section, const std::string& key,
                         const std::string& v) {
    try {
        std::size_t pos = 0;
        const auto u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return u;
    } catch (const std::exception&) {
        throw ConfigError(section + "." + key + ": not a nonnegative integer: '" + v + "'");
    }
}

std::vector<double> parse_list(const std::string& section, const std::string& key,
                               const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(section, key, trim(item)));
    if (out.empty()) throw ConfigError(section + "." + key + ": empty list");
    return out;
}

// Key lookup that records consumption so leftovers can be rejected.
struct KvView {
    std::string section;
    const Section* kv;
    std::set<std::string> used;

    const std::string* find(const std::string& key) {
        const std::string* hit = nullptr;
        for (const auto& [k, v] : *kv)
            if (k == key) {
                if (hit != nullptr) throw ConfigError(section + "." + key + ": duplicate key");
                hit = &v;
            }
        if (hit != nullptr) used.insert(key);
        return hit;
    }
    std::string require(const std::string& key) {
        const auto* v = find(key);
        if (v == nullptr) throw ConfigError(section + "." + key + ": missing");
        return *v;
    }
    void reject_unknown() const {
        for (const auto& [k, v] : *kv)
            if (!used.contains(k)) throw ConfigError(section + "." + k + ": unknown key");
    }
};

ArmDistribution build_arm(KvView& kv) {
    const std::string preset = kv.require("preset");
    ArmDistribution arm;
    if (preset == "bernoulli") {
        arm = make_bernoulli(parse_double(kv.section, "p", kv.require("p")));
    } else if (preset == "categorical") {
        arm = make_categorical(parse_list(kv.section, "probs", kv.require("probs")));
    } else if (preset == "geometric") {
        arm = make_geometric(parse_double(kv.section, "q", kv.require("q")));
    } else if (preset == "uniform") {
        arm = make_uniform01();
    } else if (preset == "triangular") {
        arm = make_triangular(parse_double(kv.section, "mode", kv.require("mode")));
    } else if (preset == "polynomial") {
        arm = make_polynomial(parse_list(kv.section, "coeffs", kv.require("coeffs")));
    } else if (preset == "gaussian") {
        arm = make_gaussian(parse_double(kv.section, "mu", kv.require("mu")),
                            parse_double(kv.section, "sigma2", kv.require("sigma2")));
    } else if (preset == "laplace") {
        arm = make_laplace(parse_double(kv.section, "mu", kv.require("mu")),
                           parse_double(kv.section, "b", kv.require("b")));
    } else if (preset == "gaussian_mixture") {
        arm = make_gaussian_mixture(parse_list(kv.section, "weights", kv.require("weights")),
                                    parse_list(kv.section, "means", kv.require("means")),
                                    parse_list(kv.section, "variances", kv.require("variances")));
    } else {
        throw ConfigError(kv.section + ".preset: unknown preset '" + preset + "'");
    }
    return arm;
}

CaseKind parse_case_kind(const std::string& section, const std::string& v) {
    for (const CaseKind k :
         {CaseKind::HoeffdingMean, CaseKind::HoeffdingKS, CaseKind::FiniteTV,
          CaseKind::CountableTV, CaseKind::BoundedContinuousTV, CaseKind::UnboundedContinuousTV,
          CaseKind::GaussianFitTV})
        if (case_name(k) == v) return k;
    throw ConfigError(section + ".kind: unknown case '" + v + "'");
}

ConfidenceCase build_case(KvView& kv) {
    ConfidenceCase cs;
    cs.kind = parse_case_kind(kv.section, kv.require("kind"));
    if (const auto* v = kv.find("b")) cs.b = parse_double(kv.section, "b", *v);
    if (const auto* v = kv.find("support_size"))
        cs.support_size = static_cast<int>(parse_uint(kv.section, "support_size", *v));
    if (const auto* v = kv.find("beta")) cs.beta = parse_double(kv.section, "beta", *v);
    if (const auto* v = kv.find("lambda")) cs.lambda = parse_double(kv.section, "lambda", *v);
    if (const auto* v = kv.find("lipschitz"))
        cs.lipschitz = parse_double(kv.section, "lipschitz", *v);
    if (const auto* v = kv.find("sigma_min2"))
        cs.sigma_min2 = parse_double(kv.section, "sigma_min2", *v);
    if (const auto* v = kv.find("sigma_max2"))
        cs.sigma_max2 = parse_double(kv.section, "sigma_max2", *v);
    try {
        cs.check();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(kv.section + ": " + e.what());
    }
    return cs;
}

RewardKind build_reward_kind(KvView& kv, const ConfidenceCase& cs) {
    const std::string kind = kv.require("kind");
    if (kind == "mean") return MeanReward{};
    if (kind == "quantile")
        return QuantileReward{parse_double(kv.section, "tau", kv.require("tau"))};
    if (kind == "neg_distance_to_target") {
        NegDistanceToTarget r;
        const std::string d = kv.require("distance");
        if (d == "mean")
            r.distance = DistanceKind::Mean;
        else if (d == "ks")
            r.distance = DistanceKind::KolmogorovSmirnov;
        else if (d == "tv")
            r.distance = DistanceKind::TotalVariation;
        else
            throw ConfigError(kv.section + ".distance: unknown distance '" + d + "'");
        // Target keys mirror the arm keys with a target_ prefix.
        Section target_kv;
        for (const auto& [k, v] : *kv.kv)
            if (k.starts_with("target_")) {
                target_kv.emplace_back(k.substr(7), v);
                kv.used.insert(k);
            }
        KvView tv{kv.section + ".target", &target_kv, {}};
        r.target = build_arm(tv);
        tv.reject_unknown();
        return r;
    }
    if (kind == "neg_tv_to_fitted_gaussian") {
        NegTVToFittedGaussian r;
        r.sigma_min2 = cs.sigma_min2;
        r.sigma_max2 = cs.sigma_max2;
        if (const auto* v = kv.find("sigma_min2"))
            r.sigma_min2 = parse_double(kv.section, "sigma_min2", *v);
        if (const auto* v = kv.find("sigma_max2"))
            r.sigma_max2 = parse_double(kv.section, "sigma_max2", *v);
        return r;
    }
    throw ConfigError(kv.section + ".kind: unknown reward '" + kind + "'");
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    const auto sections = parse_sections(in);
    ExperimentConfig cfg;

    for (const auto& [name, kv] : sections) {
        if (name != "problem" && name != "reward" && name != "case" && name != "run" &&
            !name.starts_with("arms."))
            throw ConfigError(name + ": unknown section");
    }

    const auto view = [&sections](const std::string& name) -> KvView {
        const auto it = sections.find(name);
        if (it == sections.end()) throw ConfigError(name + ": missing section");
        return KvView{name, &it->second, {}};
    };

    auto problem_kv = view("problem");
    cfg.problem.delta = parse_double("problem", "delta", problem_kv.require("delta"));
    problem_kv.reject_unknown();

    for (std::size_t i = 0;; ++i) {
        const std::string name = "arms." + std::to_string(i);
        const auto it = sections.find(name);
        if (it == sections.end()) break;
        KvView kv{name, &it->second, {}};
        cfg.problem.arms.push_back(build_arm(kv));
        kv.reject_unknown();
    }
    for (const auto& [name, kv] : sections)
        if (name.starts_with("arms.") &&
            parse_uint(name, "index", name.substr(5)) >= cfg.problem.arms.size())
            throw ConfigError(name + ": arm indices must be contiguous from 0");
    if (cfg.problem.arms.size() < 2) throw ConfigError("arms: need at least two [arms.N] sections");

    auto case_kv = view("case");
    cfg.problem.reward.confidence = build_case(case_kv);
    case_kv.reject_unknown();

    auto reward_kv = view("reward");
    cfg.problem.reward.kind = build_reward_kind(reward_kv, cfg.problem.reward.confidence);
    reward_kv.reject_unknown();
    try {
        cfg.problem.reward.check();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("reward: ") + e.what());
    }

    auto run_kv = view("run");
    const std::string fw = run_kv.require("framework");
    if (fw == "racing")
        cfg.framework = Framework::Racing;
    else if (fw == "lucb")
        cfg.framework = Framework::Lucb;
    else
        throw ConfigError("run.framework: expected racing or lucb, got '" + fw + "'");
    if (const auto* v = run_kv.find("replications")) {
        cfg.replications = parse_uint("run", "replications", *v);
        if (cfg.replications < 1) throw ConfigError("run.replications: must be >= 1");
    }
    if (const auto* v = run_kv.find("seed")) cfg.base_seed = parse_uint("run", "seed", *v);
    if (const auto* v = run_kv.find("budget_cap"))
        cfg.problem.budget_cap = parse_uint("run", "budget_cap", *v);
    if (const auto* v = run_kv.find("out")) cfg.out_path = *v;
    if (const auto* v = run_kv.find("format")) {
        if (*v == "csv")
            cfg.format = ReportFormat::Csv;
        else if (*v == "json")
            cfg.format = ReportFormat::Json;
        else
            throw ConfigError("run.format: expected csv or json, got '" + *v + "'");
    }
    run_kv.reject_unknown();

    cfg.problem.record_trace = false;
    try {
        cfg.problem.check();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("problem: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

Report run(const ExperimentConfig& config) {
    Report rep;
    rep.framework = config.framework == Framework::Racing ? "racing" : "lucb";
    const std::size_t star = best_arm(config.problem);
    const auto g = gaps(config.problem);
    rep.racing_bound =
        racing_complexity_bound(config.problem.reward.confidence, g, config.problem.delta);
    rep.lucb_bound =
        lucb_complexity_bound(config.problem.reward.confidence, g, config.problem.delta);

    std::vector<double> pulls;
    std::uint64_t errors = 0;
    for (std::uint64_t r = 0; r < config.replications; ++r) {
        const std::uint64_t seed = mix_seed(config.base_seed, r);
        const RunResult res = config.framework == Framework::Racing
                                  ? racing(config.problem, seed)
                                  : lucb(config.problem, seed);
        ReplicationRow row;
        row.seed = seed;
        row.output_arm = res.output;
        row.correct = res.output == star;
        row.total_pulls = res.total_pulls;
        row.arm_pulls = res.counts;
        row.capped = res.stop == StopReason::BudgetCap;
        if (!row.correct) ++errors;
        pulls.push_back(static_cast<double>(res.total_pulls));
        rep.rows.push_back(std::move(row));
    }

    const double M = static_cast<double>(rep.rows.size());
    rep.error_rate = static_cast<double>(errors) / M;
    const double half = 3.0 * std::sqrt(rep.error_rate * (1.0 - rep.error_rate) / M);
    rep.error_ci_low = std::max(0.0, rep.error_rate - half);
    rep.error_ci_high = std::min(1.0, rep.error_rate + half);

    std::sort(pulls.begin(), pulls.end());
    rep.mean_pulls = std::accumulate(pulls.begin(), pulls.end(), 0.0) / M;
    const auto quantile_at = [&pulls](double q) {
        const auto idx = static_cast<std::size_t>(
            std::min<double>(std::ceil(q * static_cast<double>(pulls.size())) - 1.0,
                             static_cast<double>(pulls.size() - 1)));
        return pulls[std::max<std::size_t>(idx, 0)];
    };
    rep.median_pulls = quantile_at(0.5);
    rep.p95_pulls = quantile_at(0.95);
    return rep;
}

std::string to_csv(const Report& report) {
    std::string out = "seed,framework,output_arm,correct,total_pulls";
    const std::size_t m = report.rows.empty() ? 0 : report.rows.front().arm_pulls.size();
    for (std::size_t i = 0; i < m; ++i) out += ",n_arm_" + std::to_string(i);
    out += "\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.seed) + "," + report.framework + "," +
               std::to_string(row.output_arm) + "," + (row.correct ? "1" : "0") + "," +
               std::to_string(row.total_pulls);
        for (const auto n : row.arm_pulls) out += "," + std::to_string(n);
        out += "\n";
    }
    return out;
}

std::string to_json(const Report& report) {
    nlohmann::json j;
    j["framework"] = report.framework;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : report.rows) {
        j["rows"].push_back({{"seed", row.seed},
                             {"output_arm", row.output_arm},
                             {"correct", row.correct},
                             {"total_pulls", row.total_pulls},
                             {"arm_pulls", row.arm_pulls},
                             {"capped", row.capped}});
    }
    j["aggregates"] = {{"error_rate", report.error_rate},
                       {"error_ci", {report.error_ci_low, report.error_ci_high}},
                       {"mean_pulls", report.mean_pulls},
                       {"median_pulls", report.median_pulls},
                       {"p95_pulls", report.p95_pulls},
                       {"racing_bound", report.racing_bound},
                       {"lucb_bound", report.lucb_bound}};
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Invariant suites

namespace {

struct Checker {
    double corruption;
    CheckResult result;

    void leq(const std::string& name, double lhs, double rhs, double tol = 0.0) {
        result.checks.emplace_back(name, lhs + corruption <= rhs + tol);
    }
    void close(const std::string& name, double a, double b, double tol) {
        result.checks.emplace_back(name, std::abs(a - b) + corruption <= tol);
    }
    void truthy(const std::string& name, bool ok) {
        result.checks.emplace_back(name, ok && corruption <= 0.0);
    }
};

std::vector<double> random_simplex(RngStream& rng, std::size_t n) {
    std::vector<double> p(n);
    double sum = 0.0;
    for (auto& v : p) {
        v = -std::log(rng.uniform_pos());
        sum += v;
    }
    for (auto& v : p) v /= sum;
    return p;
}

void check_metrics(Checker& ck) {
    RngStream rng(RandomSource{20260823, 1});
    double max_gap = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.next_u64() % 11;
        const auto p = random_simplex(rng, n);
        const auto q = random_simplex(rng, n);
        max_gap = std::max(max_gap, std::abs(tv_discrete(p, q) - tv_bruteforce(p, q)));
    }
    ck.close("metrics.tv_oracle_equivalence_1000", max_gap, 0.0, 1e-12);

    double tri_violation = 0.0, sym_violation = 0.0, ks_vs_tv = 0.0, mean_vs_tv = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng.next_u64() % 5;
        std::vector<double> support(n);
        for (std::size_t s = 0; s < n; ++s) support[s] = static_cast<double>(s) / double(n - 1);
        const ArmDistribution a{DiscreteFinite{support, random_simplex(rng, n)}};
        const ArmDistribution b{DiscreteFinite{support, random_simplex(rng, n)}};
        const ArmDistribution c{DiscreteFinite{support, random_simplex(rng, n)}};
        for (const auto kind :
             {DistanceKind::Mean, DistanceKind::KolmogorovSmirnov, DistanceKind::TotalVariation}) {
            const double ab = distance(kind, a, b);
            const double bc = distance(kind, b, c);
            const double ac = distance(kind, a, c);
            tri_violation = std::max(tri_violation, ac - (ab + bc));
            sym_violation = std::max(sym_violation, std::abs(ab - distance(kind, b, a)));
        }
        const double tv = distance(DistanceKind::TotalVariation, a, b);
        ks_vs_tv = std::max(ks_vs_tv, distance(DistanceKind::KolmogorovSmirnov, a, b) - tv);
        mean_vs_tv = std::max(mean_vs_tv, distance(DistanceKind::Mean, a, b) - tv);
    }
    ck.leq("metrics.triangle_inequality", tri_violation, 0.0, 1e-12);
    ck.close("metrics.symmetry", sym_violation, 0.0, 1e-12);
    ck.leq("metrics.ks_below_tv", ks_vs_tv, 0.0, 1e-12);
    ck.leq("metrics.mean_below_range_times_tv", mean_vs_tv, 0.0, 1e-12);
    ck.close("metrics.identity_of_indiscernibles",
             distance(DistanceKind::TotalVariation, make_uniform01(), make_uniform01()), 0.0,
             1e-9);
}

void check_estimation(Checker& ck) {
    RngStream rng(RandomSource{20260823, 2});

    double mass_gap = 0.0;
    bool widths_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng.next_u64() % 5000;
        const double cc = 0.25 + 2.0 * rng.uniform();
        std::vector<double> obs(n);
        for (auto& o : obs) o = rng.uniform();
        const auto pd = binned_density(obs, cc);
        mass_gap = std::max(mass_gap,
                            std::abs(total_mass(EstimatedDistribution{pd}) - 1.0));
        const double nn = static_cast<double>(n);
        widths_ok = widths_ok &&
                    std::sqrt(1.0 / (4.0 * nn * pd.bin_width)) >= cc * pd.bin_width / 4.0 &&
                    pd.bin_width >= std::cbrt(1.0 / (2.0 * cc * cc * nn)) - 1e-12;

        std::vector<double> uobs(n);
        const ArmDistribution lap = make_laplace(0.0, 1.0);
        for (auto& o : uobs) o = sample_one(lap, rng);
        const auto td = unbounded_density(uobs, 0.25, 0.5, 1.0, 0.05);
        mass_gap = std::max(mass_gap,
                            std::abs(total_mass(EstimatedDistribution{td}) - 1.0));
        widths_ok = widths_ok &&
                    std::sqrt(std::log(1.0 / 0.05) / (2.0 * nn)) >=
                        (2.0 * 0.5 / 1.0) * std::exp(-td.half_width) &&
                    std::sqrt(td.half_width / (nn * td.bin_width)) >=
                        0.25 * td.half_width * td.bin_width / 2.0;
    }
    ck.close("estimation.total_mass_one", mass_gap, 0.0, 1e-12);
    ck.truthy("estimation.bin_width_rules", widths_ok);

    // Concentration of the empirical pmf in TV, |S| = 4.
    const std::vector<double> probs{0.1, 0.2, 0.3, 0.4};
    const std::vector<double> support{0.0, 1.0, 2.0, 3.0};
    const ArmDistribution arm = make_categorical(probs);
    for (const auto& [n, delta] : std::vector<std::pair<std::size_t, double>>{
             {200, 0.1}, {1000, 0.05}}) {
        int violations = 0;
        const double eps = std::sqrt(std::log(1.0 / delta) / (2.0 * double(n))) +
                           std::sqrt(4.0 / (4.0 * double(n)));
        for (int trial = 0; trial < 2000; ++trial) {
            const auto obs = sample(arm, rng, n);
            const auto pmf = empirical_pmf(obs, support);
            if (tv_discrete(pmf.probs, probs) >= eps) ++violations;
        }
        ck.leq("estimation.tv_concentration_n" + std::to_string(n), violations / 2000.0, delta);
    }
}

void check_confidence(Checker& ck) {
    RngStream rng(RandomSource{20260823, 3});
    double worst = -1.0;
    for (int trial = 0; trial < 500; ++trial) {
        ConfidenceCase cs;
        const int which = static_cast<int>(rng.next_u64() % 7);
        cs.kind = static_cast<CaseKind>(which);
        cs.b = 0.5 + 1.5 * rng.uniform();
        cs.support_size = 2 + static_cast<int>(rng.next_u64() % 19);
        cs.beta = 0.5 + 4.5 * rng.uniform();
        cs.lambda = 0.3 + 1.2 * rng.uniform();
        cs.lipschitz = 0.1 + 1.9 * rng.uniform();
        cs.sigma_min2 = 0.5 + rng.uniform();
        cs.sigma_max2 = cs.sigma_min2 + 2.0 * rng.uniform();
        const double delta = 0.001 + 0.199 * rng.uniform();
        const double gap = 0.01 + 0.29 * rng.uniform();
        const auto n = sample_bound(cs, delta, gap);
        worst = std::max(worst, radius(cs, delta, n) - gap);
    }
    ck.leq("confidence.radius_at_sample_bound_500", worst, 0.0, 1e-12);

    bool mono = true;
    const ConfidenceCase hk{CaseKind::HoeffdingMean};
    for (std::uint64_t n = 1; n < 4096; n *= 2)
        mono = mono && radius(hk, 0.05, 2 * n) <= radius(hk, 0.05, n) &&
               dkw_band(0.05, 2 * n) <= dkw_band(0.05, n);
    mono = mono && sample_bound(hk, 0.05, 0.2) <= sample_bound(hk, 0.05, 0.1) &&
           sample_bound(hk, 0.1, 0.1) <= sample_bound(hk, 0.05, 0.1);
    ck.truthy("confidence.monotonicity", mono);

    ck.close("confidence.dkw_frozen_value", dkw_band(0.05, 100), 0.13581015157406195, 1e-12);

    const std::vector<double> g{0.4, 0.4};
    const std::uint64_t t = lucb_complexity_bound(hk, g, 0.1);
    const auto rhs_at = [&](std::uint64_t tt) {
        double s = 0.0;
        for (double gi : g)
            s += double(sample_bound(hk, 0.1 / (2.0 * 2.0 * double(tt) * double(tt)), gi / 4.0));
        return s;
    };
    ck.truthy("confidence.lucb_bound_minimality",
              double(t) > rhs_at(t) && (t == 1 || double(t - 1) <= rhs_at(t - 1)));
}

void check_rewards(Checker& ck) {
    RngStream rng(RandomSource{20260823, 4});
    double mean_gap = -1.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double mu = -2.0 + 4.0 * rng.uniform();
        const double muh = mu + (-0.5 + rng.uniform());
        const double s2 = 1.0 + 3.0 * rng.uniform();
        const double tv =
            tv_continuous(make_gaussian(mu, s2), make_gaussian(muh, s2)).value;
        mean_gap = std::max(mean_gap, tv - std::abs(mu - muh) / std::sqrt(2.0 * M_PI));
    }
    ck.leq("rewards.gaussian_mean_shift_tv_bound", mean_gap, 0.0, 1e-6);

    double var_gap = -1.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double smin2 = 0.5 + rng.uniform();
        const double smax2 = smin2 + 2.0 * rng.uniform();
        const double s1 = smin2 + (smax2 - smin2) * rng.uniform();
        const double s2 = smin2 + (smax2 - smin2) * rng.uniform();
        const double mu = -1.0 + 2.0 * rng.uniform();
        const double tv = tv_continuous(make_gaussian(mu, s1), make_gaussian(mu, s2)).value;
        var_gap = std::max(var_gap, tv - std::abs(s1 - s2) / (std::sqrt(2.0 * M_PI) * smin2));
    }
    ck.leq("rewards.gaussian_variance_shift_tv_bound", var_gap, 0.0, 1e-6);

    // Coverage of the distribution-free quantile interval.
    const ArmDistribution arm = make_gaussian(0.0, 1.0);
    const double truth = gaussian_quantile(0.5, 0.0, 1.0);
    int misses = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const auto obs = sample(arm, rng, 100);
        const auto [lo, hi] = quantile_ci(obs, 0.5, 0.05);
        if (truth < lo || truth > hi) ++misses;
    }
    ck.leq("rewards.quantile_ci_coverage", misses / 2000.0,
           0.05 + 3.0 * std::sqrt(0.05 * 0.95 / 2000.0));

    RewardSpec mean_spec{MeanReward{}, ConfidenceCase{CaseKind::HoeffdingMean}};
    ck.close("rewards.mean_of_point_mass",
             eval_exact(mean_spec, ArmDistribution{DiscreteFinite{{0.37}, {1.0}}}), 0.37, 1e-15);
}

void check_explorer(Checker& ck) {
    Problem prob;
    prob.arms = {make_bernoulli(0.9), make_bernoulli(0.1)};
    prob.reward = RewardSpec{MeanReward{}, ConfidenceCase{CaseKind::HoeffdingMean}};
    prob.delta = 0.1;

    const auto r1 = racing(prob, 7);
    const auto r2 = racing(prob, 7);
    bool deterministic = r1.output == r2.output && r1.total_pulls == r2.total_pulls &&
                         r1.counts == r2.counts;
    const auto l1 = lucb(prob, 7);
    const auto l2 = lucb(prob, 7);
    deterministic = deterministic && l1.output == l2.output && l1.total_pulls == l2.total_pulls;
    ck.truthy("explorer.bit_reproducibility", deterministic);

    bool shrinking = true;
    std::size_t prev = prob.arms.size();
    for (const auto& ph : r1.phases) {
        shrinking = shrinking && ph.surviving.size() <= prev;
        prev = ph.surviving.size();
    }
    ck.truthy("explorer.surviving_set_monotone", shrinking);
    ck.truthy("explorer.lucb_stop_certificate",
              l1.stop != StopReason::Converged || l1.cert_lower >= l1.cert_upper);

    int errors = 0;
    const int reps = 400;  // ceil(40 / delta)
    for (int r = 0; r < reps; ++r) {
        const std::uint64_t seed = mix_seed(99, static_cast<std::uint64_t>(r));
        if (racing(prob, seed).output != 0) ++errors;
        if (lucb(prob, seed).output != 0) ++errors;
    }
    ck.leq("explorer.error_rate_at_delta", errors / (2.0 * reps),
           prob.delta + 3.0 * std::sqrt(prob.delta * (1.0 - prob.delta) / (2.0 * reps)));
}

}  // namespace

CheckResult check(const std::string& suite, double corruption) {
    Checker ck{corruption, {}};
    bool known = false;
    const bool all = suite == "all";
    if (all || suite == "metrics") check_metrics(ck), known = true;
    if (all || suite == "estimation") check_estimation(ck), known = true;
    if (all || suite == "confidence") check_confidence(ck), known = true;
    if (all || suite == "rewards") check_rewards(ck), known = true;
    if (all || suite == "explorer") check_explorer(ck), known = true;
    if (!known) throw ConfigError("unknown check suite: " + suite);
    return ck.result;
}

SweepResult sweep(const ExperimentConfig& config, const std::string& param,
                  const std::vector<double>& values) {
    SweepResult out;
    for (const double v : values) {
        ExperimentConfig point = config;
        if (param == "delta") {
            if (v <= 0.0 || v >= 1.0) throw ConfigError("sweep: delta outside (0,1)");
            point.problem.delta = v;
        } else if (param == "gap") {
            if (v <= 0.0 || v >= 1.0) throw ConfigError("sweep: gap outside (0,1)");
            if (!std::holds_alternative<MeanReward>(config.problem.reward.kind))
                throw ConfigError("sweep: gap sweeps need a two-arm mean-reward problem");
            point.problem.arms = {make_bernoulli(0.5 + v / 2.0), make_bernoulli(0.5 - v / 2.0)};
        } else {
            throw ConfigError("sweep: unknown parameter '" + param + "' (use delta or gap)");
        }
        out.points.push_back(SweepPoint{param, v, run(point)});
    }
    if (param == "delta" && out.points.size() >= 2) {
        // Least squares of mean pulls on log(1/delta).
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(out.points.size());
        for (const auto& pt : out.points) {
            const double x = std::log(1.0 / pt.value);
            const double y = pt.report.mean_pulls;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        out.log_inv_delta_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return out;
}

BoundSummary bound(const ExperimentConfig& config) {
    BoundSummary out;
    out.gaps = gaps(config.problem);
    out.racing_bound =
        racing_complexity_bound(config.problem.reward.confidence, out.gaps, config.problem.delta);
    out.lucb_bound =
        lucb_complexity_bound(config.problem.reward.confidence, out.gaps, config.problem.delta);
    return out;
}

}  // namespace purex::bench
