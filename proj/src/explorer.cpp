#include "purex/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace purex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t default_cap(std::uint64_t bound) {
    return bound > std::numeric_limits<std::uint64_t>::max() / 10 ? std::numeric_limits<std::uint64_t>::max()
                                                                  : 10 * bound;
}

double clamp_level(double level) { return std::min(level, 0.5); }

// Per-run mutable state: one rng stream and observation buffer per arm. The
// quantile reward keeps the buffer sorted so interval lookups are cheap.
struct ArmState {
    RngStream rng;
    std::vector<double> obs;
    std::vector<double> sorted;
    double estimate = -kInf;
    std::pair<double, double> interval{-kInf, kInf};
};

struct Runner {
    const Problem& problem;
    std::vector<ArmState> arms;
    std::uint64_t total = 0;
    std::uint64_t cap = 0;
    bool is_quantile = false;
    double tau = 0.5;

    Runner(const Problem& p, std::uint64_t seed) : problem(p) {
        p.check();
        is_quantile = p.reward.is_quantile();
        if (is_quantile) tau = std::get<QuantileReward>(p.reward.kind).tau;
        arms.reserve(p.arms.size());
        for (std::size_t i = 0; i < p.arms.size(); ++i)
            arms.push_back(ArmState{RngStream(RandomSource{seed, i}), {}, {}, -kInf, {-kInf, kInf}});
    }

    // Draws until arm i holds `target` observations or the cap is hit.
    // Returns false when the cap stopped the top-up.
    bool top_up(std::size_t i, std::uint64_t target) {
        auto& a = arms[i];
        while (a.obs.size() < target) {
            if (total >= cap) return false;
            const double x = sample_one(problem.arms[i], a.rng);
            a.obs.push_back(x);
            if (is_quantile) a.sorted.insert(std::upper_bound(a.sorted.begin(), a.sorted.end(), x), x);
            ++total;
        }
        return true;
    }

    void refresh(std::size_t i, double level) {
        auto& a = arms[i];
        if (a.obs.empty()) return;
        // The fitted-Gaussian reward needs a variance, hence two observations;
        // until then the arm keeps its -inf placeholder estimate.
        if (std::holds_alternative<NegTVToFittedGaussian>(problem.reward.kind) && a.obs.size() < 2)
            return;
        if (is_quantile) {
            a.interval = quantile_ci(a.sorted, tau, level);
            a.estimate = empirical_quantile(a.sorted, tau);
        } else {
            a.estimate = estimate_reward(problem.reward, a.obs, level);
        }
    }

    std::vector<std::uint64_t> counts() const {
        std::vector<std::uint64_t> n;
        n.reserve(arms.size());
        for (const auto& a : arms) n.push_back(a.obs.size());
        return n;
    }

    std::size_t leader(const std::vector<std::size_t>& among) const {
        std::size_t best = among.front();
        for (std::size_t i : among)
            if (arms[i].estimate > arms[best].estimate) best = i;
        return best;
    }
};

}  // namespace

void Problem::check() const {
    if (arms.size() < 2) throw InvalidProblemError("problem: need at least two arms");
    if (delta <= 0.0 || delta >= 1.0) throw InvalidProblemError("problem: delta outside (0,1)");
    reward.check();
    gaps(*this);  // rejects a non-unique optimum
}

std::vector<double> gaps(const Problem& problem) {
    std::vector<double> h;
    h.reserve(problem.arms.size());
    for (const auto& arm : problem.arms) h.push_back(eval_exact(problem.reward, arm));
    std::size_t star = 0;
    for (std::size_t i = 1; i < h.size(); ++i)
        if (h[i] > h[star]) star = i;
    double runner_up = -kInf;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (i != star) runner_up = std::max(runner_up, h[i]);
    if (h[star] - runner_up <= 1e-9)
        throw InvalidProblemError("problem: the optimal arm is not unique");
    std::vector<double> out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        out[i] = (i == star) ? h[star] - runner_up : h[star] - h[i];
    return out;
}

std::size_t best_arm(const Problem& problem) {
    std::size_t star = 0;
    double best = -kInf;
    for (std::size_t i = 0; i < problem.arms.size(); ++i) {
        const double v = eval_exact(problem.reward, problem.arms[i]);
        if (v > best) {
            best = v;
            star = i;
        }
    }
    return star;
}

RunResult racing(const Problem& problem, std::uint64_t seed) {
    Runner st(problem, seed);
    const auto g = gaps(problem);
    st.cap = problem.budget_cap.value_or(
        default_cap(racing_complexity_bound(problem.reward.confidence, g, problem.delta)));

    RunResult out;
    std::vector<std::size_t> active(problem.arms.size());
    for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;

    bool capped = false;
    for (int k = 1; active.size() > 1 && !capped; ++k) {
        const double rad = std::ldexp(1.0, -k);
        const double level =
            clamp_level(problem.delta / (2.0 * static_cast<double>(active.size()) *
                                         static_cast<double>(k) * static_cast<double>(k)));
        const std::uint64_t need = sample_bound(problem.reward.confidence, level, rad);
        for (std::size_t i : active)
            if (!st.top_up(i, need)) {
                capped = true;
                break;
            }
        for (std::size_t i : active) st.refresh(i, level);
        if (capped) break;

        // Eliminate every arm provably below the leader at this radius.
        std::vector<std::size_t> next;
        if (st.is_quantile) {
            // Once the DKW band reaches tau or 1-tau the interval endpoints
            // degenerate to the observed extremes and carry no coverage, so
            // no elimination is sound yet.
            const double band = dkw_band(level, need);
            if (band >= st.tau || band >= 1.0 - st.tau) {
                next = active;
            } else {
                std::size_t top = active.front();
                for (std::size_t i : active)
                    if (st.arms[i].interval.first > st.arms[top].interval.first) top = i;
                const double floor = st.arms[top].interval.first;
                for (std::size_t j : active)
                    if (j == top || floor < st.arms[j].interval.second) next.push_back(j);
            }
        } else {
            const double top = st.arms[st.leader(active)].estimate;
            for (std::size_t j : active)
                if (top - 2.0 * rad < st.arms[j].estimate) next.push_back(j);
        }
        active = std::move(next);

        if (problem.record_trace) {
            RacingPhase ph;
            ph.k = k;
            ph.rad = rad;
            ph.surviving = active;
            for (std::size_t i : active) ph.estimates.push_back(st.arms[i].estimate);
            out.phases.push_back(std::move(ph));
        }
    }

    out.output = st.leader(active);
    out.total_pulls = st.total;
    out.counts = st.counts();
    out.stop = capped ? StopReason::BudgetCap : StopReason::Converged;
    return out;
}

RunResult lucb(const Problem& problem, std::uint64_t seed) {
    Runner st(problem, seed);
    const auto g = gaps(problem);
    const auto& cs = problem.reward.confidence;
    st.cap = problem.budget_cap.value_or(default_cap(lucb_complexity_bound(cs, g, problem.delta)));

    RunResult out;
    const std::size_t m = problem.arms.size();
    std::vector<std::size_t> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = i;

    std::uint64_t t = static_cast<std::uint64_t>(m);
    {
        const double level0 = clamp_level(problem.delta / (2.0 * static_cast<double>(m) *
                                                           static_cast<double>(t) *
                                                           static_cast<double>(t)));
        for (std::size_t i = 0; i < m; ++i) {
            if (!st.top_up(i, 1)) break;
            st.refresh(i, level0);
        }
    }

    bool capped = false;
    while (true) {
        if (st.total >= st.cap) {
            capped = true;
            break;
        }
        const double level = clamp_level(problem.delta / (2.0 * static_cast<double>(m) *
                                                          static_cast<double>(t) *
                                                          static_cast<double>(t)));

        std::vector<double> lower(m), upper(m), rad(m);
        if (st.is_quantile) {
            for (std::size_t i = 0; i < m; ++i) {
                st.arms[i].interval = quantile_ci(st.arms[i].sorted, st.tau, level);
                // A band at or beyond tau (resp. 1-tau) means the endpoint was
                // clamped to an observed extreme and bounds nothing.
                const double band = dkw_band(level, st.arms[i].obs.size());
                lower[i] = band >= st.tau ? -kInf : st.arms[i].interval.first;
                upper[i] = band >= 1.0 - st.tau ? kInf : st.arms[i].interval.second;
                rad[i] = upper[i] - lower[i];
            }
        } else {
            for (std::size_t i = 0; i < m; ++i) {
                if (st.arms[i].estimate == -kInf) {
                    // No estimate yet: the arm is maximally uncertain.
                    rad[i] = kInf;
                    lower[i] = -kInf;
                    upper[i] = kInf;
                    continue;
                }
                rad[i] = radius(cs, level, st.arms[i].obs.size());
                lower[i] = st.arms[i].estimate - rad[i];
                upper[i] = st.arms[i].estimate + rad[i];
            }
        }

        std::size_t i1 = 0;
        for (std::size_t i = 1; i < m; ++i)
            if (st.arms[i].estimate > st.arms[i1].estimate) i1 = i;
        std::size_t i2 = (i1 == 0) ? 1 : 0;
        for (std::size_t i = 0; i < m; ++i)
            if (i != i1 && upper[i] > upper[i2]) i2 = i;

        if (lower[i1] >= upper[i2]) {
            out.output = i1;
            out.cert_lower = lower[i1];
            out.cert_upper = upper[i2];
            break;
        }

        std::size_t pulled;
        if (std::isinf(rad[i1]) && std::isinf(rad[i2]))
            pulled = st.arms[i2].obs.size() < st.arms[i1].obs.size() ? i2 : i1;
        else
            pulled = (rad[i2] > rad[i1]) ? i2 : i1;
        if (!st.top_up(pulled, st.arms[pulled].obs.size() + 1)) {
            capped = true;
            break;
        }
        ++t;
        st.refresh(pulled, level);

        if (problem.record_trace) out.steps.push_back(LucbStep{t, i1, i2, pulled, rad});
    }

    if (capped) out.output = st.leader(all);
    out.total_pulls = st.total;
    out.counts = st.counts();
    out.stop = capped ? StopReason::BudgetCap : StopReason::Converged;
    return out;
}

}  // namespace purex
