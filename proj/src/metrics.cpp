#include "purex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "purex/quadrature.hpp"

namespace purex {

namespace {

bool is_discrete(const ArmDistribution& d) {
    return std::holds_alternative<DiscreteFinite>(d) ||
           std::holds_alternative<DiscreteCountable>(d);
}

// A distribution-with-density viewed for quadrature: an evaluable density,
// the window carrying all but negligible mass, and the points where the
// density is allowed to jump.
struct DensityProfile {
    std::function<double(double)> density;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> breakpoints;  // interior discontinuities
};

DensityProfile profile_of(const ArmDistribution& d) {
    DensityProfile p;
    std::tie(p.lo, p.hi) = density_window(d);
    p.density = [&d](double x) { return density(d, x); };
    return p;
}

DensityProfile profile_of(const EstimatedDistribution& est) {
    DensityProfile p;
    if (const auto* pw = std::get_if<PiecewiseDensity>(&est)) {
        p.lo = 0.0;
        p.hi = 1.0;
        for (std::size_t s = 1; s < pw->masses.size(); ++s)
            p.breakpoints.push_back(s * pw->bin_width);
        p.density = [pw](double x) { return pw->density_at(x); };
    } else if (const auto* tp = std::get_if<TailedPiecewiseDensity>(&est)) {
        const double reach = 40.0 / tp->tail_rate;  // tail mass beyond is < 1e-17
        p.lo = -tp->half_width - reach;
        p.hi = tp->half_width + reach;
        for (std::size_t s = 0; s <= tp->masses.size(); ++s)
            p.breakpoints.push_back(-tp->half_width + s * tp->bin_width);
        p.density = [tp](double x) { return tp->density_at(x); };
    } else {
        throw AlignmentError("tv_continuous: empirical pmf has no density");
    }
    return p;
}

TvResult tv_between_profiles(const DensityProfile& a, const DensityProfile& b) {
    const double lo = std::min(a.lo, b.lo);
    const double hi = std::max(a.hi, b.hi);
    std::vector<double> cuts{lo, hi};
    for (double x : a.breakpoints)
        if (x > lo && x < hi) cuts.push_back(x);
    for (double x : b.breakpoints)
        if (x > lo && x < hi) cuts.push_back(x);
    // Also split at the window edges of either side so each segment is smooth.
    for (double x : {a.lo, a.hi, b.lo, b.hi})
        if (x > lo && x < hi) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto integrand = [&a, &b](double x) { return std::abs(a.density(x) - b.density(x)); };
    const double seg_tol = std::min(1e-8, 1e-7 / static_cast<double>(cuts.size()));
    TvResult out;
    bool converged = true;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto q = integrate(integrand, cuts[i], cuts[i + 1], seg_tol);
        out.value += q.value;
        out.error += q.error;
        converged = converged && q.converged;
    }
    out.value *= 0.5;
    out.error *= 0.5;
    if (!converged)
        throw NumericError("tv_continuous: quadrature did not converge", out.value, out.error);
    return out;
}

// All labels where either cdf jumps, for discrete distributions.
std::vector<double> jump_points(const ArmDistribution& d) {
    if (const auto* df = std::get_if<DiscreteFinite>(&d)) return df->support;
    if (const auto* dc = std::get_if<DiscreteCountable>(&d)) {
        const auto hi = static_cast<int>(density_window(d).second);
        std::vector<double> pts(static_cast<std::size_t>(hi) + 1);
        for (int z = 0; z <= hi; ++z) pts[static_cast<std::size_t>(z)] = z;
        return pts;
    }
    return {};
}

// Aligned probability vectors over the union of two discrete supports.
std::pair<std::vector<double>, std::vector<double>> align_discrete(const ArmDistribution& a,
                                                                   const ArmDistribution& b) {
    const auto prob_at = [](const ArmDistribution& d, double x) -> double {
        if (const auto* df = std::get_if<DiscreteFinite>(&d)) {
            for (std::size_t s = 0; s < df->support.size(); ++s)
                if (std::abs(df->support[s] - x) < 1e-9) return df->probs[s];
            return 0.0;
        }
        const auto& dc = std::get<DiscreteCountable>(d);
        const double r = std::round(x);
        if (r < -0.5 || std::abs(x - r) > 1e-9) return 0.0;
        return dc.pmf(static_cast<int>(r));
    };
    std::set<double> support;
    for (double x : jump_points(a)) support.insert(x);
    for (double x : jump_points(b)) support.insert(x);
    std::vector<double> p, q;
    for (double x : support) {
        p.push_back(prob_at(a, x));
        q.push_back(prob_at(b, x));
    }
    return {std::move(p), std::move(q)};
}

double ks_over_points(const std::function<double(double)>& fa,
                      const std::function<double(double)>& fb,
                      const std::vector<double>& points) {
    double sup = 0.0;
    for (double x : points) {
        sup = std::max(sup, std::abs(fa(x) - fb(x)));
        // Left limits matter at jumps of either cdf.
        const double eps = 1e-9 * std::max(1.0, std::abs(x));
        sup = std::max(sup, std::abs(fa(x - eps) - fb(x - eps)));
    }
    return sup;
}

std::vector<double> ks_grid(double lo, double hi, const std::vector<double>& extra) {
    std::vector<double> pts = extra;
    constexpr int kGrid = 2048;
    for (int i = 0; i <= kGrid; ++i) pts.push_back(lo + (hi - lo) * i / kGrid);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace

double mean_distance(const ArmDistribution& a, const ArmDistribution& b) {
    return std::abs(mean(a) - mean(b));
}

double mean_distance(const EstimatedDistribution& est, const ArmDistribution& target) {
    return std::abs(mean(est) - mean(target));
}

double ks_distance(const ArmDistribution& a, const ArmDistribution& b) {
    const auto [alo, ahi] = density_window(a);
    const auto [blo, bhi] = density_window(b);
    std::vector<double> extra = jump_points(a);
    const auto jb = jump_points(b);
    extra.insert(extra.end(), jb.begin(), jb.end());
    const auto pts = ks_grid(std::min(alo, blo), std::max(ahi, bhi), extra);
    return ks_over_points([&a](double x) { return cdf(a, x); },
                          [&b](double x) { return cdf(b, x); }, pts);
}

double ks_distance(const EstimatedDistribution& est, const ArmDistribution& target) {
    // Estimate cdf: step function for pmfs, piecewise linear for histograms.
    std::function<double(double)> est_cdf;
    std::vector<double> extra = jump_points(target);
    double lo, hi;
    std::tie(lo, hi) = density_window(target);
    if (const auto* pmf = std::get_if<EmpiricalPmf>(&est)) {
        extra.insert(extra.end(), pmf->support.begin(), pmf->support.end());
        est_cdf = [pmf](double x) {
            double cum = 0.0;
            for (std::size_t s = 0; s < pmf->support.size() && pmf->support[s] <= x; ++s)
                cum += pmf->probs[s];
            return cum;
        };
    } else {
        const auto prof = profile_of(est);
        lo = std::min(lo, prof.lo);
        hi = std::max(hi, prof.hi);
        extra.insert(extra.end(), prof.breakpoints.begin(), prof.breakpoints.end());
        est_cdf = [est](double x) {
            return std::visit(
                [x](const auto& e) -> double {
                    using T = std::decay_t<decltype(e)>;
                    if constexpr (std::is_same_v<T, PiecewiseDensity>) {
                        if (x <= 0.0) return 0.0;
                        if (x >= 1.0) return 1.0;
                        double cum = 0.0;
                        const auto full = static_cast<std::size_t>(x / e.bin_width);
                        for (std::size_t s = 0; s < full; ++s) cum += e.masses[s];
                        if (full < e.masses.size())
                            cum += e.masses[full] * (x - full * e.bin_width) / e.bin_width;
                        return cum;
                    } else if constexpr (std::is_same_v<T, TailedPiecewiseDensity>) {
                        if (x < -e.half_width)
                            return e.left_tail_mass * std::exp(e.tail_rate * (x + e.half_width));
                        if (x > e.half_width) {
                            double tail =
                                e.right_tail_mass * std::exp(-e.tail_rate * (x - e.half_width));
                            return 1.0 - tail;
                        }
                        double cum = e.left_tail_mass;
                        const auto full =
                            static_cast<std::size_t>((x + e.half_width) / e.bin_width);
                        for (std::size_t s = 0; s < std::min(full, e.masses.size()); ++s)
                            cum += e.masses[s];
                        if (full < e.masses.size())
                            cum += e.masses[full] *
                                   (x + e.half_width - full * e.bin_width) / e.bin_width;
                        return cum;
                    } else {
                        return 0.0;  // unreachable
                    }
                },
                est);
        };
    }
    const auto pts = ks_grid(lo, hi, extra);
    return ks_over_points(est_cdf, [&target](double x) { return cdf(target, x); }, pts);
}

double tv_discrete(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw AlignmentError("tv_discrete: probability vectors have different supports");
    double sum = 0.0;
    for (std::size_t s = 0; s < p.size(); ++s) sum += std::abs(p[s] - q[s]);
    return 0.5 * sum;
}

double tv_bruteforce(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw AlignmentError("tv_bruteforce: probability vectors have different supports");
    if (p.size() > 20) throw SupportTooLargeError("tv_bruteforce: support larger than 20");
    const auto n = static_cast<unsigned>(p.size());
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double diff = 0.0;
        for (unsigned s = 0; s < n; ++s)
            if (mask & (1u << s)) diff += p[s] - q[s];
        best = std::max(best, std::abs(diff));
    }
    return best;
}

TvResult tv_continuous(const EstimatedDistribution& est, const ArmDistribution& target) {
    return tv_between_profiles(profile_of(est), profile_of(target));
}

TvResult tv_continuous(const ArmDistribution& a, const ArmDistribution& b) {
    if (is_discrete(a) || is_discrete(b))
        throw VariantMismatchError("tv_continuous: discrete operand");
    return tv_between_profiles(profile_of(a), profile_of(b));
}

double distance(DistanceKind kind, const ArmDistribution& a, const ArmDistribution& b) {
    switch (kind) {
        case DistanceKind::Mean:
            return mean_distance(a, b);
        case DistanceKind::KolmogorovSmirnov:
            return ks_distance(a, b);
        case DistanceKind::TotalVariation:
            break;
    }
    if (is_discrete(a) != is_discrete(b))
        throw AlignmentError("tv: cannot mix discrete and continuous distributions");
    if (is_discrete(a)) {
        const auto [p, q] = align_discrete(a, b);
        return tv_discrete(p, q);
    }
    return tv_continuous(a, b).value;
}

double distance(DistanceKind kind, const EstimatedDistribution& est,
                const ArmDistribution& target) {
    switch (kind) {
        case DistanceKind::Mean:
            return mean_distance(est, target);
        case DistanceKind::KolmogorovSmirnov:
            return ks_distance(est, target);
        case DistanceKind::TotalVariation:
            break;
    }
    if (const auto* pmf = std::get_if<EmpiricalPmf>(&est)) {
        if (!is_discrete(target))
            throw AlignmentError("tv: empirical pmf against a continuous target");
        // Align the estimate with the target over the union support.
        DiscreteFinite as_finite{pmf->support, pmf->probs};
        const auto [p, q] = align_discrete(ArmDistribution{as_finite}, target);
        return tv_discrete(p, q);
    }
    if (is_discrete(target))
        throw AlignmentError("tv: density estimate against a discrete target");
    return tv_continuous(est, target).value;
}

}  // namespace purex
