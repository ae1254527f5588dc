#include "purex/confidence.hpp"

#include <cmath>
#include <limits>

namespace purex {

namespace {

// Logs with arguments clamped to >= e: several radius terms carry log(c*n)
// factors that are undefined or negative at tiny n.
double safe_log(double arg) { return std::log(std::max(arg, M_E)); }

std::uint64_t ceil_count(double x) {
    if (!(x >= 0.0)) return 1;
    if (x >= 9.2e18) return std::numeric_limits<std::uint64_t>::max() / 4;
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(x - 1e-9)));
}

// The sigma-dependent factor of the Gaussian-fit case:
// sqrt(2) + sqrt(smax^2/pi) + sqrt(4 smax^4 / (pi smin^4)).
double gaussian_fit_factor(const ConfidenceCase& cs) {
    return std::sqrt(2.0) + std::sqrt(cs.sigma_max2 / M_PI) +
           std::sqrt(4.0 * cs.sigma_max2 * cs.sigma_max2 /
                     (M_PI * cs.sigma_min2 * cs.sigma_min2));
}

}  // namespace

void ConfidenceCase::check() const {
    if (b <= 0.0) throw std::invalid_argument("confidence case: B must be positive");
    switch (kind) {
        case CaseKind::HoeffdingMean:
        case CaseKind::HoeffdingKS:
            return;
        case CaseKind::FiniteTV:
            if (support_size < 1)
                throw std::invalid_argument("FiniteTV: support size missing");
            return;
        case CaseKind::CountableTV:
            if (beta <= 0.0 || lambda <= 0.0)
                throw std::invalid_argument("CountableTV: tail constants missing");
            return;
        case CaseKind::BoundedContinuousTV:
            if (lipschitz <= 0.0)
                throw std::invalid_argument("BoundedContinuousTV: C missing");
            return;
        case CaseKind::UnboundedContinuousTV:
            if (lipschitz <= 0.0 || beta <= 0.0 || lambda <= 0.0)
                throw std::invalid_argument("UnboundedContinuousTV: constants missing");
            return;
        case CaseKind::GaussianFitTV:
            if (lipschitz <= 0.0 || beta <= 0.0 || lambda <= 0.0)
                throw std::invalid_argument("GaussianFitTV: constants missing");
            if (sigma_min2 <= 0.0 || sigma_max2 < sigma_min2)
                throw std::invalid_argument("GaussianFitTV: invalid variance bracket");
            return;
    }
    throw std::invalid_argument("confidence case: unknown kind");
}

std::string case_name(CaseKind kind) {
    switch (kind) {
        case CaseKind::HoeffdingMean: return "hoeffding_mean";
        case CaseKind::HoeffdingKS: return "hoeffding_ks";
        case CaseKind::FiniteTV: return "finite_tv";
        case CaseKind::CountableTV: return "countable_tv";
        case CaseKind::BoundedContinuousTV: return "bounded_continuous_tv";
        case CaseKind::UnboundedContinuousTV: return "unbounded_continuous_tv";
        case CaseKind::GaussianFitTV: return "gaussian_fit_tv";
    }
    return "unknown";
}

std::uint64_t sample_bound(const ConfidenceCase& cs, double delta, double gap) {
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("sample_bound: delta");
    if (gap <= 0.0) throw std::invalid_argument("sample_bound: gap must be positive");
    const double b = cs.b;
    const double g2 = gap * gap;
    switch (cs.kind) {
        case CaseKind::HoeffdingMean:
        case CaseKind::HoeffdingKS:
            return ceil_count(b * b / (2.0 * g2) * std::log(2.0 / delta));
        case CaseKind::FiniteTV:
            return ceil_count(b * b / g2 * (std::log(1.0 / delta) + cs.support_size / 2.0));
        case CaseKind::CountableTV: {
            const double k = 1.0 - std::exp(-cs.lambda);
            const double n1 = 32.0 * b * b * std::log(1.0 / delta) / g2;
            const double n2 = 16.0 * b * b / (cs.lambda * g2) *
                              safe_log(16.0 * b * b * cs.beta * cs.beta * cs.lambda / (k * k * g2));
            return ceil_count(n1 + n2);
        }
        case CaseKind::BoundedContinuousTV: {
            const double n1 = 2.0 * b * b * std::log(1.0 / delta) / g2;
            const double n2 = 8.0 * std::sqrt(2.0) * b * b * b * cs.lipschitz / (g2 * gap);
            return ceil_count(n1 + n2);
        }
        case CaseKind::UnboundedContinuousTV: {
            const double n1 = 8.0 * b * b * std::log(1.0 / delta) / g2;
            const double lg = safe_log(1024.0 * cs.beta * cs.beta * b * b * b * cs.lipschitz /
                                       (std::pow(cs.lambda, 4) * g2 * gap));
            const double n2 = 128.0 * b * b * b * cs.lipschitz /
                              (cs.lambda * cs.lambda * g2 * gap) * lg * lg;
            return ceil_count(n1 + n2);
        }
        case CaseKind::GaussianFitTV: {
            const double f = gaussian_fit_factor(cs);
            const double n1 = 4.0 * b * b * std::log(4.0 / delta) / g2 * f * f;
            const double lg = safe_log(1024.0 * cs.beta * cs.beta * b * b * b * cs.lipschitz /
                                       (std::pow(cs.lambda, 4) * g2 * gap));
            const double n2 = 128.0 * b * b * b * cs.lipschitz /
                              (cs.lambda * cs.lambda * g2 * gap) * lg * lg;
            return ceil_count(n1 + n2);
        }
    }
    throw std::invalid_argument("sample_bound: unknown case");
}

double radius(const ConfidenceCase& cs, double delta, std::uint64_t n) {
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("radius: delta");
    if (n < 1) throw std::invalid_argument("radius: n must be >= 1");
    const double b = cs.b;
    const double nn = static_cast<double>(n);
    switch (cs.kind) {
        case CaseKind::HoeffdingMean:
        case CaseKind::HoeffdingKS:
            return b * std::sqrt(std::log(2.0 / delta) / (2.0 * nn));
        case CaseKind::FiniteTV:
            return b * std::sqrt(std::log(1.0 / delta) / (2.0 * nn)) +
                   b * std::sqrt(cs.support_size / (4.0 * nn));
        case CaseKind::CountableTV: {
            const double k = 1.0 - std::exp(-cs.lambda);
            const double tail = safe_log(2.0 * cs.beta * cs.beta * cs.lambda * nn / (k * k));
            return 2.0 * b * std::sqrt(2.0 * std::log(1.0 / delta) / nn) +
                   b * std::sqrt(2.0 / (cs.lambda * nn) * tail);
        }
        case CaseKind::BoundedContinuousTV:
            return b * std::sqrt(std::log(1.0 / delta) / (2.0 * nn)) +
                   b * std::cbrt(std::sqrt(2.0) * cs.lipschitz / nn);
        case CaseKind::UnboundedContinuousTV: {
            const double lg =
                safe_log((cs.beta / cs.lambda) * std::sqrt(8.0 * nn / std::log(1.0 / delta)));
            return b * std::sqrt(2.0 * std::log(1.0 / delta) / nn) +
                   b * std::cbrt(8.0 * std::sqrt(2.0) * cs.lipschitz * lg * lg /
                                 (nn * cs.lambda * cs.lambda));
        }
        case CaseKind::GaussianFitTV: {
            const double l4 = std::log(4.0 / delta);
            const double lg = safe_log((cs.beta / cs.lambda) * std::sqrt(8.0 * nn / l4));
            return b * (std::sqrt(2.0 * l4 / nn) +
                        std::cbrt(8.0 * std::sqrt(2.0) * cs.lipschitz * lg * lg /
                                  (nn * cs.lambda * cs.lambda)) +
                        std::sqrt(cs.sigma_max2 * l4 / (M_PI * nn)) +
                        std::sqrt(4.0 * cs.sigma_max2 * cs.sigma_max2 * l4 /
                                  (M_PI * cs.sigma_min2 * cs.sigma_min2 * nn)));
        }
    }
    throw std::invalid_argument("radius: unknown case");
}

double dkw_band(double delta, std::uint64_t n) {
    if (delta <= 0.0 || delta >= 2.0) throw std::invalid_argument("dkw_band: delta");
    if (n < 1) throw std::invalid_argument("dkw_band: n must be >= 1");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

std::uint64_t racing_complexity_bound(const ConfidenceCase& cs, std::span<const double> gaps,
                                      double delta) {
    const auto m = static_cast<double>(gaps.size());
    std::uint64_t total = 0;
    for (double gap : gaps) {
        if (gap <= 0.0) throw std::invalid_argument("racing bound: gaps must be positive");
        const double lg = std::log(8.0 / gap);
        const double level = std::min(delta / (2.0 * m * lg * lg), 0.999);
        total += sample_bound(cs, level, gap / 8.0);
    }
    return total;
}

std::uint64_t lucb_complexity_bound(const ConfidenceCase& cs, std::span<const double> gaps,
                                    double delta) {
    const auto m = static_cast<double>(gaps.size());
    const auto rhs = [&](std::uint64_t t) -> double {
        const double level = delta / (2.0 * m * static_cast<double>(t) * static_cast<double>(t));
        double sum = 0.0;
        for (double gap : gaps) {
            if (gap <= 0.0) throw std::invalid_argument("lucb bound: gaps must be positive");
            sum += static_cast<double>(sample_bound(cs, level, gap / 4.0));
        }
        return sum;
    };
    const auto holds = [&](std::uint64_t t) { return static_cast<double>(t) > rhs(t); };

    std::uint64_t hi = 1;
    while (!holds(hi)) {
        if (hi > (std::uint64_t{1} << 62))
            throw std::runtime_error("lucb bound: fixed point not found");
        hi *= 2;
    }
    std::uint64_t lo = hi / 2;  // holds(lo) is false (or lo == 0)
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (holds(mid) ? hi : lo) = mid;
    }
    while (hi > 1 && holds(hi - 1)) --hi;  // guard against non-monotone corners
    return hi;
}

}  // namespace purex
