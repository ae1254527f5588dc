#pragma once

#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace purex {

// Outputs of the three estimation procedures. The piecewise variants use
// power-of-two bin widths chosen by the halving/doubling rules below, so the
// discretization bias is balanced against the statistical error.

struct EmpiricalPmf {
    std::vector<double> support;
    std::vector<double> probs;
};

struct PiecewiseDensity {
    double bin_width = 0.5;            // ell, exact power of two
    std::vector<double> masses;        // masses[s] = x_s / n, bins covering [0,1]
    double density_at(double x) const;
};

struct TailedPiecewiseDensity {
    double half_width = 1.0;           // L, exact power of two
    double bin_width = 0.5;            // ell
    std::vector<double> masses;        // interior bins covering [-L, L]
    double left_tail_mass = 0.0;       // x_- / n
    double right_tail_mass = 0.0;      // x_+ / n
    double tail_rate = 1.0;            // lambda of the exponential tail fill
    double density_at(double x) const;
};

using EstimatedDistribution = std::variant<EmpiricalPmf, PiecewiseDensity, TailedPiecewiseDensity>;

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Empirical frequencies over a declared finite support. Observations outside
// the support raise DataError.
EmpiricalPmf empirical_pmf(std::span<const double> obs, std::span<const double> support);

// Countable case: support is {0, ..., max observed}, built from the data.
EmpiricalPmf empirical_pmf_countable(std::span<const double> obs);

// Adaptive histogram on [0,1]: halve ell while sqrt(1/(4n*ell)) < C*ell/4.
PiecewiseDensity binned_density(std::span<const double> obs, double lipschitz);

// Adaptive histogram on [-L, L] plus exponential tail fills: double L while
// sqrt(log(1/delta)/(2n)) < (2*beta/lambda)*exp(-lambda*L), then halve ell
// while sqrt(L/(n*ell)) < C*L*ell/2.
TailedPiecewiseDensity unbounded_density(std::span<const double> obs, double lipschitz,
                                         double beta, double lambda, double delta);

// The stationary bin parameters for a given sample size, without binning.
double bounded_bin_width(std::size_t n, double lipschitz);
std::pair<double, double> unbounded_bin_params(std::size_t n, double lipschitz, double beta,
                                               double lambda, double delta);  // (L, ell)

double total_mass(const EstimatedDistribution& est);
double mean(const EstimatedDistribution& est);
// inf{x : F_hat(x) >= tau} of the estimate's own cdf.
double quantile(const EmpiricalPmf& est, double tau);

// Empirical tau-quantile of raw observations (order-statistic form).
double empirical_quantile(std::span<const double> sorted_obs, double tau);

}  // namespace purex
