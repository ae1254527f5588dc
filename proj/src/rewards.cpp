#include "purex/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace purex {

namespace {

bool tv_family(CaseKind kind) {
    switch (kind) {
        case CaseKind::FiniteTV:
        case CaseKind::CountableTV:
        case CaseKind::BoundedContinuousTV:
        case CaseKind::UnboundedContinuousTV:
        case CaseKind::GaussianFitTV:
            return true;
        default:
            return false;
    }
}

}  // namespace

void RewardSpec::check() const {
    confidence.check();
    std::visit(
        [this](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, MeanReward>) {
                if (confidence.kind != CaseKind::HoeffdingMean)
                    throw std::invalid_argument(
                        "reward: the mean reward pairs with the Hoeffding mean case");
            } else if constexpr (std::is_same_v<T, QuantileReward>) {
                if (k.tau <= 0.0 || k.tau >= 1.0)
                    throw std::invalid_argument("reward: tau outside (0,1)");
            } else if constexpr (std::is_same_v<T, NegDistanceToTarget>) {
                if (k.distance == DistanceKind::TotalVariation && !tv_family(confidence.kind))
                    throw std::invalid_argument(
                        "reward: a TV target distance needs a TV-family case");
                if (k.distance == DistanceKind::KolmogorovSmirnov &&
                    confidence.kind != CaseKind::HoeffdingKS)
                    throw std::invalid_argument(
                        "reward: a KS target distance needs the KS case");
                if (k.distance == DistanceKind::Mean &&
                    confidence.kind != CaseKind::HoeffdingMean)
                    throw std::invalid_argument(
                        "reward: a mean target distance needs the Hoeffding mean case");
            } else if constexpr (std::is_same_v<T, NegTVToFittedGaussian>) {
                if (confidence.kind != CaseKind::GaussianFitTV)
                    throw std::invalid_argument(
                        "reward: the fitted-Gaussian reward needs the Gaussian-fit case");
                if (k.sigma_min2 <= 0.0 || k.sigma_max2 < k.sigma_min2)
                    throw std::invalid_argument("reward: invalid variance bracket");
            }
        },
        kind);
}

double eval_exact(const RewardSpec& reward, const ArmDistribution& arm) {
    return std::visit(
        [&arm](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, MeanReward>) {
                return mean(arm);
            } else if constexpr (std::is_same_v<T, QuantileReward>) {
                return true_quantile(arm, k.tau);
            } else if constexpr (std::is_same_v<T, NegDistanceToTarget>) {
                return -distance(k.distance, arm, k.target);
            } else {
                const ArmDistribution fitted =
                    make_gaussian(mean(arm), std::clamp(variance(arm), k.sigma_min2, k.sigma_max2));
                return -distance(DistanceKind::TotalVariation, arm, fitted);
            }
        },
        reward.kind);
}

double eval_estimate(const RewardSpec& reward, const EstimatedDistribution& est) {
    return std::visit(
        [&est](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, MeanReward>) {
                return mean(est);
            } else if constexpr (std::is_same_v<T, QuantileReward>) {
                if (const auto* pmf = std::get_if<EmpiricalPmf>(&est))
                    return quantile(*pmf, k.tau);
                throw std::invalid_argument(
                    "reward: quantile evaluation needs an empirical pmf estimate");
            } else if constexpr (std::is_same_v<T, NegDistanceToTarget>) {
                return -distance(k.distance, est, k.target);
            } else {
                throw std::invalid_argument(
                    "reward: the fitted-Gaussian reward needs raw observations");
            }
        },
        reward.kind);
}

double estimate_reward(const RewardSpec& reward, std::span<const double> obs, double delta) {
    if (obs.empty()) throw DataError("estimate_reward: no observations");
    if (const auto* g = std::get_if<NegTVToFittedGaussian>(&reward.kind)) {
        const auto& cs = reward.confidence;
        return eval_gaussian_fit_reward(obs, cs.lipschitz, cs.beta, cs.lambda, delta,
                                        g->sigma_min2, g->sigma_max2);
    }
    const auto& cs = reward.confidence;
    switch (cs.kind) {
        case CaseKind::HoeffdingMean: {
            const double sum = std::accumulate(obs.begin(), obs.end(), 0.0);
            return std::holds_alternative<MeanReward>(reward.kind)
                       ? sum / static_cast<double>(obs.size())
                       : eval_estimate(reward, EstimatedDistribution{empirical_pmf_like(obs)});
        }
        case CaseKind::HoeffdingKS: {
            return eval_estimate(reward, EstimatedDistribution{empirical_pmf_like(obs)});
        }
        case CaseKind::FiniteTV: {
            const auto* tgt = std::get_if<NegDistanceToTarget>(&reward.kind);
            if (tgt != nullptr) {
                if (const auto* df = std::get_if<DiscreteFinite>(&tgt->target))
                    return eval_estimate(
                        reward, EstimatedDistribution{empirical_pmf(obs, df->support)});
            }
            return eval_estimate(reward, EstimatedDistribution{empirical_pmf_like(obs)});
        }
        case CaseKind::CountableTV:
            return eval_estimate(reward, EstimatedDistribution{empirical_pmf_countable(obs)});
        case CaseKind::BoundedContinuousTV:
            return eval_estimate(reward,
                                 EstimatedDistribution{binned_density(obs, cs.lipschitz)});
        case CaseKind::UnboundedContinuousTV:
            return eval_estimate(reward, EstimatedDistribution{unbounded_density(
                                             obs, cs.lipschitz, cs.beta, cs.lambda, delta)});
        case CaseKind::GaussianFitTV:
            break;  // handled above
    }
    throw std::invalid_argument("estimate_reward: unsupported case");
}

EmpiricalPmf empirical_pmf_like(std::span<const double> obs) {
    // Frequencies over the distinct observed values, for cases that never
    // declared a support up front.
    std::vector<double> sorted(obs.begin(), obs.end());
    std::sort(sorted.begin(), sorted.end());
    EmpiricalPmf out;
    const double w = 1.0 / static_cast<double>(sorted.size());
    for (double o : sorted) {
        if (out.support.empty() || o - out.support.back() > 1e-12) {
            out.support.push_back(o);
            out.probs.push_back(w);
        } else {
            out.probs.back() += w;
        }
    }
    return out;
}

std::pair<double, double> quantile_ci(std::span<const double> obs, double tau, double delta) {
    if (obs.empty()) throw DataError("quantile_ci: no observations");
    std::vector<double> sorted(obs.begin(), obs.end());
    std::sort(sorted.begin(), sorted.end());
    const double eps = dkw_band(delta, sorted.size());
    const double lo_tau = tau - eps;
    const double hi_tau = tau + eps;
    const double lower = lo_tau <= 0.0 ? sorted.front() : empirical_quantile(sorted, lo_tau);
    const double upper = hi_tau >= 1.0 ? sorted.back() : empirical_quantile(sorted, hi_tau);
    return {lower, upper};
}

ArmDistribution fit_gaussian(std::span<const double> obs, double sigma_min2, double sigma_max2) {
    if (obs.size() < 2) throw DataError("fit_gaussian: need at least two observations");
    const double n = static_cast<double>(obs.size());
    const double mu = std::accumulate(obs.begin(), obs.end(), 0.0) / n;
    double ss = 0.0;
    for (double o : obs) ss += (o - mu) * (o - mu);
    const double var = std::clamp(ss / (n - 1.0), sigma_min2, sigma_max2);
    return make_gaussian(mu, var);
}

double eval_gaussian_fit_reward(std::span<const double> obs, double lipschitz, double beta,
                                double lambda, double delta, double sigma_min2,
                                double sigma_max2) {
    const auto est = unbounded_density(obs, lipschitz, beta, lambda, delta);
    const auto fitted = fit_gaussian(obs, sigma_min2, sigma_max2);
    return -tv_continuous(EstimatedDistribution{est}, fitted).value;
}

}  // namespace purex
