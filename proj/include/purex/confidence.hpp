#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace purex {

// The analyzed estimation regimes. Each carries the constants its
// sample-count and radius formulas need; B is the Lipschitz constant of the
// reward with respect to the underlying distance.
enum class CaseKind {
    HoeffdingMean,          // Lambda_m over [0,1]-bounded distributions
    HoeffdingKS,            // Lambda_K via the DKW inequality
    FiniteTV,               // TV, finite support S
    CountableTV,            // TV, support N with exponential pmf tail
    BoundedContinuousTV,    // TV, Lipschitz density on [0,1]
    UnboundedContinuousTV,  // TV, Lipschitz density with exponential tail
    GaussianFitTV,          // TV against the moment-matched Gaussian
};

struct ConfidenceCase {
    CaseKind kind = CaseKind::HoeffdingMean;
    double b = 1.0;            // Lipschitz constant of the reward
    int support_size = 0;      // |S| (FiniteTV)
    double beta = 0.0;         // tail envelope (CountableTV, Unbounded*, GaussianFit)
    double lambda = 0.0;
    double lipschitz = 0.0;    // density Lipschitz constant C (continuous cases)
    double sigma_min2 = 0.0;   // variance bracket (GaussianFitTV)
    double sigma_max2 = 0.0;

    void check() const;  // throws std::invalid_argument on missing constants
};

std::string case_name(CaseKind kind);

// Samples sufficient to estimate the reward within `gap` except with
// probability delta (the ceiling of the case's closed form).
std::uint64_t sample_bound(const ConfidenceCase& cs, double delta, double gap);

// Confidence radius achievable from n samples at failure probability delta.
double radius(const ConfidenceCase& cs, double delta, std::uint64_t n);

// Uniform empirical-cdf band: the epsilon with 2*exp(-2*n*eps^2) = delta.
double dkw_band(double delta, std::uint64_t n);

// Racing sample-complexity bound: sum_i n(delta / (2m log^2(8/gap_i)), gap_i/8).
std::uint64_t racing_complexity_bound(const ConfidenceCase& cs, std::span<const double> gaps,
                                      double delta);

// LUCB bound: smallest t with t > sum_i n(delta/(2m t^2), gap_i/4).
std::uint64_t lucb_complexity_bound(const ConfidenceCase& cs, std::span<const double> gaps,
                                    double delta);

}  // namespace purex
