#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "purex/arms.hpp"
#include "purex/estimation.hpp"
#include "purex/metrics.hpp"

using namespace purex;

TEST_CASE("empirical pmf over a declared support") {
    const std::vector<double> obs{0.0, 0.0, 1.0};
    const std::vector<double> support{0.0, 1.0, 2.0};
    const auto pmf = empirical_pmf(obs, support);
    CHECK(pmf.probs[0] == doctest::Approx(2.0 / 3.0));
    CHECK(pmf.probs[1] == doctest::Approx(1.0 / 3.0));
    CHECK(pmf.probs[2] == doctest::Approx(0.0));

    CHECK_THROWS_AS(empirical_pmf(std::vector<double>{5.0}, support), DataError);
    CHECK_THROWS_AS(empirical_pmf(std::vector<double>{}, support), DataError);
}

TEST_CASE("empirical pmf concentrates") {
    RngStream rng(RandomSource{21, 0});
    const auto obs = sample(make_bernoulli(0.3), rng, 100000);
    const auto pmf = empirical_pmf(obs, std::vector<double>{0.0, 1.0});
    CHECK(std::abs(pmf.probs[1] - 0.3) < 0.01);
}

TEST_CASE("countable empirical pmf covers zero through the maximum") {
    const auto pmf = empirical_pmf_countable(std::vector<double>{0.0, 3.0, 3.0});
    REQUIRE(pmf.support.size() == 4);
    CHECK(pmf.probs[0] == doctest::Approx(1.0 / 3.0));
    CHECK(pmf.probs[3] == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(empirical_pmf_countable(std::vector<double>{-1.0}), DataError);
    CHECK_THROWS_AS(empirical_pmf_countable(std::vector<double>{0.5}), DataError);
}

TEST_CASE("bounded bin width fixed points") {
    CHECK(bounded_bin_width(1, 1.0) == doctest::Approx(0.5));
    CHECK(bounded_bin_width(1000000, 1.0) == doctest::Approx(std::ldexp(1.0, -6)));
    // Lower bound and stop condition at random sizes.
    for (const std::size_t n : {1ul, 10ul, 500ul, 33333ul, 2000000ul}) {
        for (const double cc : {0.3, 1.0, 2.5}) {
            const double ell = bounded_bin_width(n, cc);
            const double nn = static_cast<double>(n);
            CHECK(std::sqrt(1.0 / (4.0 * nn * ell)) >= cc * ell / 4.0);
            // The doubling lower bound only binds once a halving happened.
            if (ell < 0.5) CHECK(ell >= std::cbrt(1.0 / (2.0 * cc * cc * nn)) - 1e-12);
            CHECK(std::ldexp(1.0, static_cast<int>(std::lround(std::log2(ell)))) ==
                  doctest::Approx(ell));  // exact power of two
        }
    }
}

TEST_CASE("binned density on degenerate data") {
    const std::vector<double> obs(50, 0.0);
    const auto pd = binned_density(obs, 1.0);
    CHECK(total_mass(EstimatedDistribution{pd}) == doctest::Approx(1.0));
    CHECK(pd.density_at(0.0) == doctest::Approx(1.0 / pd.bin_width));
    CHECK(pd.density_at(0.9) == doctest::Approx(0.0));
    CHECK_THROWS_AS(binned_density(std::vector<double>{1.5}, 1.0), DataError);
}

TEST_CASE("bin boundaries are first-closed then left-open") {
    const std::vector<double> obs{0.0, 0.5, 0.5000001, 1.0};
    const auto pd = binned_density(obs, 1.0);  // n=4 keeps ell = 1/2
    REQUIRE(pd.bin_width == doctest::Approx(0.5));
    CHECK(pd.masses[0] == doctest::Approx(0.5));   // 0.0 and 0.5
    CHECK(pd.masses[1] == doctest::Approx(0.5));   // 0.5000001 and 1.0
}

TEST_CASE("unbounded bin parameter fixed points") {
    const auto [half, ell] = unbounded_bin_params(100, 1.0, 1.0, 1.0, 0.1);
    CHECK(half == doctest::Approx(4.0));
    const double nn = 100.0;
    CHECK(std::sqrt(std::log(1.0 / 0.1) / (2.0 * nn)) >= 2.0 * std::exp(-half));
    CHECK(std::sqrt(half / (nn * ell)) >= half * ell / 2.0);
    // Closed-form cap on the window growth.
    const double cap = 2.0 * std::log(1.0 * std::sqrt(8.0 * nn / std::log(1.0 / 0.1)));
    CHECK(half <= 2.0 * std::max(cap, 1.0));
}

TEST_CASE("unbounded density on a single observation") {
    const auto td = unbounded_density(std::vector<double>{0.0}, 1.0, 1.0, 1.0, 0.1);
    CHECK(td.left_tail_mass == doctest::Approx(0.0));
    CHECK(td.right_tail_mass == doctest::Approx(0.0));
    CHECK(total_mass(EstimatedDistribution{td}) == doctest::Approx(1.0));
}

TEST_CASE("unbounded density estimate approaches the truth") {
    const ArmDistribution lap = make_laplace(0.0, 1.0);
    RngStream rng(RandomSource{22, 0});
    const auto obs = sample(lap, rng, 100000);
    const auto td = unbounded_density(obs, 0.25, 0.5, 1.0, 0.05);
    CHECK(total_mass(EstimatedDistribution{td}) == doctest::Approx(1.0));
    const double tv = tv_continuous(EstimatedDistribution{td}, lap).value;
    CHECK(tv < 0.05);  // well inside the theoretical radius at n = 1e5
}

TEST_CASE("estimate means and quantiles") {
    const auto pmf = empirical_pmf_countable(std::vector<double>{0.0, 1.0, 1.0});
    CHECK(mean(EstimatedDistribution{pmf}) == doctest::Approx(2.0 / 3.0));
    CHECK(quantile(pmf, 0.5) == doctest::Approx(1.0));

    const std::vector<double> sorted{1.0, 2.0, 3.0};
    CHECK(empirical_quantile(sorted, 0.5) == doctest::Approx(2.0));
    CHECK(empirical_quantile(sorted, 0.01) == doctest::Approx(1.0));
    CHECK(empirical_quantile(sorted, 0.99) == doctest::Approx(3.0));
    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, 0.5), DataError);
}

TEST_CASE("estimators are pure functions of the data") {
    RngStream rng(RandomSource{23, 0});
    const auto obs = sample(make_laplace(0.0, 1.0), rng, 2000);
    const auto a = unbounded_density(obs, 0.25, 0.5, 1.0, 0.05);
    const auto b = unbounded_density(obs, 0.25, 0.5, 1.0, 0.05);
    CHECK(a.masses == b.masses);
    CHECK(a.half_width == b.half_width);
    CHECK(a.bin_width == b.bin_width);
}
