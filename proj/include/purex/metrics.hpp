#pragma once

#include <span>
#include <stdexcept>

#include "purex/arms.hpp"
#include "purex/estimation.hpp"

namespace purex {

enum class DistanceKind { Mean, KolmogorovSmirnov, TotalVariation };

struct AlignmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SupportTooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature failed to converge; carries the best available estimate.
struct NumericError : std::runtime_error {
    NumericError(const std::string& what, double best_value, double best_error)
        : std::runtime_error(what), best(best_value), error(best_error) {}
    double best;
    double error;
};

struct TvResult {
    double value = 0.0;
    double error = 0.0;  // quadrature error estimate on the value
};

double mean_distance(const ArmDistribution& a, const ArmDistribution& b);
double mean_distance(const EstimatedDistribution& est, const ArmDistribution& target);

double ks_distance(const ArmDistribution& a, const ArmDistribution& b);
double ks_distance(const EstimatedDistribution& est, const ArmDistribution& target);

// Half-L1 total variation of aligned probability vectors.
double tv_discrete(std::span<const double> p, std::span<const double> q);

// Exact sup over all 2^|S| events; |S| <= 20.
double tv_bruteforce(std::span<const double> p, std::span<const double> q);

// TV between distributions with densities (piecewise-constant estimates
// qualify). Throws NumericError if the quadrature cap is hit.
TvResult tv_continuous(const EstimatedDistribution& est, const ArmDistribution& target);
TvResult tv_continuous(const ArmDistribution& a, const ArmDistribution& b);

// Dispatch over DistanceKind, usable for both exact/exact and estimate/exact
// pairs (TV picks the discrete or continuous route by the operands' shape).
double distance(DistanceKind kind, const ArmDistribution& a, const ArmDistribution& b);
double distance(DistanceKind kind, const EstimatedDistribution& est,
                const ArmDistribution& target);

}  // namespace purex
