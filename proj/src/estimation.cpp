#include "purex/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace purex {

namespace {

// Bin index for x in [lo, lo + r*ell] with the first bin closed at lo and all
// others left-open right-closed.
std::size_t bin_index(double x, double lo, double ell, std::size_t r) {
    if (x <= lo + ell) return 0;
    const auto s = static_cast<std::size_t>(std::ceil((x - lo) / ell)) - 1;
    return std::min(s, r - 1);
}

}  // namespace

double PiecewiseDensity::density_at(double x) const {
    if (x < 0.0 || x > 1.0) return 0.0;
    const std::size_t r = masses.size();
    return masses[bin_index(x, 0.0, bin_width, r)] / bin_width;
}

double TailedPiecewiseDensity::density_at(double x) const {
    if (x < -half_width)
        return left_tail_mass * tail_rate * std::exp(tail_rate * (x + half_width));
    if (x > half_width)
        return right_tail_mass * tail_rate * std::exp(-tail_rate * (x - half_width));
    return masses[bin_index(x, -half_width, bin_width, masses.size())] / bin_width;
}

EmpiricalPmf empirical_pmf(std::span<const double> obs, std::span<const double> support) {
    if (obs.empty()) throw DataError("empirical_pmf: no observations");
    EmpiricalPmf out;
    out.support.assign(support.begin(), support.end());
    out.probs.assign(support.size(), 0.0);
    const double w = 1.0 / static_cast<double>(obs.size());
    for (double o : obs) {
        const auto it = std::lower_bound(out.support.begin(), out.support.end(), o - 1e-12);
        if (it == out.support.end() || std::abs(*it - o) > 1e-9)
            throw DataError("empirical_pmf: observation outside the declared support");
        out.probs[static_cast<std::size_t>(it - out.support.begin())] += w;
    }
    return out;
}

EmpiricalPmf empirical_pmf_countable(std::span<const double> obs) {
    if (obs.empty()) throw DataError("empirical_pmf_countable: no observations");
    int top = 0;
    for (double o : obs) {
        const double r = std::round(o);
        if (r < -0.5 || std::abs(o - r) > 1e-9)
            throw DataError("empirical_pmf_countable: observation is not a natural number");
        top = std::max(top, static_cast<int>(r));
    }
    EmpiricalPmf out;
    out.support.resize(static_cast<std::size_t>(top) + 1);
    out.probs.assign(out.support.size(), 0.0);
    for (std::size_t z = 0; z < out.support.size(); ++z) out.support[z] = static_cast<double>(z);
    const double w = 1.0 / static_cast<double>(obs.size());
    for (double o : obs) out.probs[static_cast<std::size_t>(std::round(o))] += w;
    return out;
}

double bounded_bin_width(std::size_t n, double lipschitz) {
    double ell = 0.5;
    const double nn = static_cast<double>(n);
    while (std::sqrt(1.0 / (4.0 * nn * ell)) < lipschitz * ell / 4.0) ell /= 2.0;
    return ell;
}

PiecewiseDensity binned_density(std::span<const double> obs, double lipschitz) {
    if (obs.empty()) throw DataError("binned_density: no observations");
    if (lipschitz <= 0.0) throw std::invalid_argument("binned_density: C must be positive");
    PiecewiseDensity out;
    out.bin_width = bounded_bin_width(obs.size(), lipschitz);
    const auto r = static_cast<std::size_t>(std::llround(1.0 / out.bin_width));
    out.masses.assign(r, 0.0);
    const double w = 1.0 / static_cast<double>(obs.size());
    for (double o : obs) {
        if (o < 0.0 || o > 1.0)
            throw DataError("binned_density: observation outside [0,1]");
        out.masses[bin_index(o, 0.0, out.bin_width, r)] += w;
    }
    return out;
}

std::pair<double, double> unbounded_bin_params(std::size_t n, double lipschitz, double beta,
                                               double lambda, double delta) {
    const double nn = static_cast<double>(n);
    const double stat = std::sqrt(std::log(1.0 / delta) / (2.0 * nn));
    double half = 1.0;
    while (stat < (2.0 * beta / lambda) * std::exp(-lambda * half)) half *= 2.0;
    double ell = 0.5;
    while (std::sqrt(half / (nn * ell)) < lipschitz * half * ell / 2.0) ell /= 2.0;
    return {half, ell};
}

TailedPiecewiseDensity unbounded_density(std::span<const double> obs, double lipschitz,
                                         double beta, double lambda, double delta) {
    if (obs.empty()) throw DataError("unbounded_density: no observations");
    if (lipschitz <= 0.0 || beta <= 0.0 || lambda <= 0.0)
        throw std::invalid_argument("unbounded_density: constants must be positive");
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("unbounded_density: delta outside (0,1)");
    TailedPiecewiseDensity out;
    std::tie(out.half_width, out.bin_width) =
        unbounded_bin_params(obs.size(), lipschitz, beta, lambda, delta);
    out.tail_rate = lambda;
    const auto r = static_cast<std::size_t>(std::llround(2.0 * out.half_width / out.bin_width));
    out.masses.assign(r, 0.0);
    const double w = 1.0 / static_cast<double>(obs.size());
    for (double o : obs) {
        if (o < -out.half_width)
            out.left_tail_mass += w;
        else if (o > out.half_width)
            out.right_tail_mass += w;
        else
            out.masses[bin_index(o, -out.half_width, out.bin_width, r)] += w;
    }
    return out;
}

double total_mass(const EstimatedDistribution& est) {
    return std::visit(
        [](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, EmpiricalPmf>) {
                return std::accumulate(e.probs.begin(), e.probs.end(), 0.0);
            } else if constexpr (std::is_same_v<T, PiecewiseDensity>) {
                return std::accumulate(e.masses.begin(), e.masses.end(), 0.0);
            } else {
                return std::accumulate(e.masses.begin(), e.masses.end(), 0.0) + e.left_tail_mass +
                       e.right_tail_mass;
            }
        },
        est);
}

double mean(const EstimatedDistribution& est) {
    return std::visit(
        [](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, EmpiricalPmf>) {
                return std::inner_product(e.support.begin(), e.support.end(), e.probs.begin(),
                                          0.0);
            } else if constexpr (std::is_same_v<T, PiecewiseDensity>) {
                double m = 0.0;
                for (std::size_t s = 0; s < e.masses.size(); ++s)
                    m += e.masses[s] * (s + 0.5) * e.bin_width;
                return m;
            } else {
                double m = 0.0;
                for (std::size_t s = 0; s < e.masses.size(); ++s)
                    m += e.masses[s] * (-e.half_width + (s + 0.5) * e.bin_width);
                m += e.right_tail_mass * (e.half_width + 1.0 / e.tail_rate);
                m -= e.left_tail_mass * (e.half_width + 1.0 / e.tail_rate);
                return m;
            }
        },
        est);
}

double quantile(const EmpiricalPmf& est, double tau) {
    double cum = 0.0;
    for (std::size_t s = 0; s < est.support.size(); ++s) {
        cum += est.probs[s];
        if (cum >= tau - 1e-15) return est.support[s];
    }
    return est.support.back();
}

double empirical_quantile(std::span<const double> sorted_obs, double tau) {
    if (sorted_obs.empty()) throw DataError("empirical_quantile: no observations");
    if (tau <= 0.0) return sorted_obs.front();
    if (tau >= 1.0) return sorted_obs.back();
    const auto n = static_cast<double>(sorted_obs.size());
    auto rank = static_cast<std::size_t>(std::ceil(tau * n - 1e-12));
    rank = std::clamp<std::size_t>(rank, 1, sorted_obs.size());
    return sorted_obs[rank - 1];
}

}  // namespace purex
