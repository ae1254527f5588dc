#pragma once

#include <span>
#include <variant>

#include "purex/arms.hpp"
#include "purex/confidence.hpp"
#include "purex/estimation.hpp"
#include "purex/metrics.hpp"

namespace purex {

// The supported reward functionals. All except the quantile reward are
// Lipschitz in some distribution distance, with constant B carried by the
// confidence case; the quantile reward works through its own interval.

struct MeanReward {};

struct QuantileReward {
    double tau = 0.5;
};

struct NegDistanceToTarget {
    ArmDistribution target;
    DistanceKind distance = DistanceKind::TotalVariation;
};

struct NegTVToFittedGaussian {
    double sigma_min2 = 0.0;
    double sigma_max2 = 0.0;
};

using RewardKind =
    std::variant<MeanReward, QuantileReward, NegDistanceToTarget, NegTVToFittedGaussian>;

struct RewardSpec {
    RewardKind kind;
    ConfidenceCase confidence;

    // Throws std::invalid_argument on kind/case incompatibility.
    void check() const;
    bool is_quantile() const { return std::holds_alternative<QuantileReward>(kind); }
};

// Ground-truth reward of an exact arm (used for gaps and correctness flags).
double eval_exact(const RewardSpec& reward, const ArmDistribution& arm);

// Reward of an already-built estimate. The fitted-Gaussian kind cannot be
// evaluated from an estimate alone (it needs the raw moments), so it is
// rejected here; use estimate_reward.
double eval_estimate(const RewardSpec& reward, const EstimatedDistribution& est);

// Point estimate of the reward straight from observations, dispatching the
// estimation procedure the confidence case calls for. Not defined for the
// quantile reward (use quantile_ci).
double estimate_reward(const RewardSpec& reward, std::span<const double> obs, double delta);

// Frequencies over the distinct observed values, for cases without a
// declared support.
EmpiricalPmf empirical_pmf_like(std::span<const double> obs);

// Distribution-free tau-quantile interval: empirical (tau -+ eps)-quantiles
// with eps the DKW band, clamped to the observed extremes.
std::pair<double, double> quantile_ci(std::span<const double> obs, double tau, double delta);

// Moment-matched Gaussian with the variance clamped into the declared bracket.
ArmDistribution fit_gaussian(std::span<const double> obs, double sigma_min2, double sigma_max2);

// Negative TV between the tail-filled histogram estimate and the fitted
// Gaussian, the full estimation pipeline of the Gaussian-fit case.
double eval_gaussian_fit_reward(std::span<const double> obs, double lipschitz, double beta,
                                double lambda, double delta, double sigma_min2, double sigma_max2);

}  // namespace purex
