#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "purex/rewards.hpp"
#include "purex/rng.hpp"

namespace purex {

struct Problem {
    std::vector<ArmDistribution> arms;
    RewardSpec reward;
    double delta = 0.1;
    std::optional<std::uint64_t> budget_cap;  // defaulted from the complexity bound
    bool record_trace = true;

    void check() const;  // throws std::invalid_argument on an invalid setup
};

struct InvalidProblemError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class StopReason { Converged, BudgetCap };

struct RacingPhase {
    int k = 0;
    double rad = 0.0;
    std::vector<std::size_t> surviving;  // at the end of the phase
    std::vector<double> estimates;       // indexed like surviving
};

struct LucbStep {
    std::uint64_t t = 0;
    std::size_t i1 = 0;
    std::size_t i2 = 0;
    std::size_t pulled = 0;
    std::vector<double> radii;
};

struct RunResult {
    std::size_t output = 0;
    std::uint64_t total_pulls = 0;
    std::vector<std::uint64_t> counts;
    StopReason stop = StopReason::Converged;
    std::vector<RacingPhase> phases;  // racing only
    std::vector<LucbStep> steps;      // lucb only
    // Stopping certificate of a converged lucb run: lower bound of the winner
    // against the best upper bound among the rest.
    double cert_lower = 0.0;
    double cert_upper = 0.0;
};

// Ground-truth gaps: the winner's gap to the runner-up, every other arm's gap
// to the winner. Throws InvalidProblemError when the optimum is not unique
// within 1e-9.
std::vector<double> gaps(const Problem& problem);
std::size_t best_arm(const Problem& problem);

// Successive elimination in phases of halving radius, reusing observations.
RunResult racing(const Problem& problem, std::uint64_t seed);

// Confidence-bound sampling of the empirical leader and its strongest
// challenger, one pull per step.
RunResult lucb(const Problem& problem, std::uint64_t seed);

}  // namespace purex
