#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "purex/rng.hpp"

namespace purex {

// Ground-truth arm models. The continuous families carry the envelope
// constants the estimators and confidence formulas rely on:
//   lipschitz C:   |d(x) - d(y)| <= 2C|x - y|
//   (beta, lambda): d(z) <= beta * exp(-lambda * |z|)
// The constants are declared by whoever builds the distribution and checked
// by validate(); nothing recomputes them behind the caller's back.

struct DiscreteFinite {
    std::vector<double> support;  // strictly increasing labels
    std::vector<double> probs;
};

struct DiscreteCountable {
    std::function<double(int)> pmf;  // support is {0, 1, 2, ...}
    double beta = 0.0;
    double lambda = 0.0;
};

struct ContinuousBounded {
    std::function<double(double)> density;  // on [0, 1]
    double lipschitz = 0.0;                 // the constant C
    std::function<double(double)> cdf;      // optional closed forms; empty => numeric
    std::function<double(double)> quantile;
};

struct ContinuousUnbounded {
    std::function<double(double)> density;  // on R
    double lipschitz = 0.0;
    double beta = 0.0;
    double lambda = 0.0;
    std::function<double(double)> cdf;
    std::function<double(double)> quantile;
};

struct Gaussian {
    double mean = 0.0;
    double variance = 1.0;
};

using ArmDistribution =
    std::variant<DiscreteFinite, DiscreteCountable, ContinuousBounded, ContinuousUnbounded, Gaussian>;

struct VariantMismatchError : std::logic_error {
    using std::logic_error::logic_error;
};

// i.i.d. draws, deterministic given the stream. Inverse-CDF where a quantile
// closure (or closed form) exists, rejection against the declared envelope
// otherwise.
std::vector<double> sample(const ArmDistribution& dist, RngStream& rng, std::size_t n);
double sample_one(const ArmDistribution& dist, RngStream& rng);

// density() is defined for the continuous variants only and throws
// VariantMismatchError on discrete ones.
double density(const ArmDistribution& dist, double x);
double cdf(const ArmDistribution& dist, double x);
double true_quantile(const ArmDistribution& dist, double tau);

double mean(const ArmDistribution& dist);
double variance(const ArmDistribution& dist);

// Effective integration window [lo, hi] outside of which the density mass is
// negligible (< ~1e-17 per side).
std::pair<double, double> density_window(const ArmDistribution& dist);

struct ValidationIssue {
    std::string assumption;  // which declared invariant failed
    double witness = 0.0;    // the probing point that exposed it
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Checks the declared constants and normalization on a deterministic probe
// grid. Reports violations; never throws.
ValidationReport validate(const ArmDistribution& dist, int probe_points = 1024);

// Named presets reachable from the harness config.
ArmDistribution make_bernoulli(double p);
ArmDistribution make_categorical(std::vector<double> probs);
ArmDistribution make_geometric(double q);  // pmf (1-q) q^z on N
ArmDistribution make_uniform01();
ArmDistribution make_triangular(double mode);                  // on [0,1]
ArmDistribution make_polynomial(std::vector<double> coeffs);   // density sum c_k x^k on [0,1], normalized
ArmDistribution make_gaussian(double mu, double sigma2);
ArmDistribution make_laplace(double mu, double b);
ArmDistribution make_gaussian_mixture(std::vector<double> weights, std::vector<double> means,
                                      std::vector<double> variances);

double gaussian_cdf(double x, double mu, double sigma2);
double gaussian_quantile(double tau, double mu, double sigma2);
double gaussian_density(double x, double mu, double sigma2);

}  // namespace purex
