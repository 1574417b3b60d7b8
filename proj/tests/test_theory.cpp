#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "snrlab/normal.hpp"
#include "snrlab/rng.hpp"
#include "snrlab/stats.hpp"
#include "snrlab/theory.hpp"

using namespace snrlab;

namespace {

// Plain Monte Carlo of E (eta(u + e, chi1) / (1 + chi2) - u)^2.
MeanSe soft_risk_mc(double u, const SoftRiskParams& sp, std::size_t draws, std::uint64_t seed) {
    RngStream rng(seed, 0);
    std::vector<double> e(draws), loss(draws);
    rng.fill_normals(e);
    for (std::size_t i = 0; i < draws; ++i) {
        const double x = u + sp.noise_sd * e[i];
        const double eta = x > sp.chi1 ? x - sp.chi1 : (x < -sp.chi1 ? x + sp.chi1 : 0.0);
        const double d = eta / (1.0 + sp.chi2) - u;
        loss[i] = d * d;
    }
    return mean_se(loss);
}

}  // namespace

TEST_CASE("minimax_first_order examples") {
    const ParamSpace high(25, 10.0, 1.0);
    CHECK(minimax_first_order(1000, high, classify_regime(1000, high)) == doctest::Approx(2.0 * 25 * std::log(40.0)));
    CHECK(minimax_first_order(1000, high, classify_regime(1000, high)) == doctest::Approx(184.44).epsilon(1e-4));
    const ParamSpace low(10, 1.0, 5.0);
    CHECK(minimax_first_order(1000, low, classify_regime(1000, low)) == 10.0);
    CHECK(minimax_first_order(50, low, classify_regime(50, low)) == 10.0);
    const ParamSpace higher(25, 20.0, 1.0);
    CHECK(minimax_first_order(1000, higher, classify_regime(1000, higher)) ==
          minimax_first_order(1000, high, classify_regime(1000, high)));
}

TEST_CASE("ridge second order examples") {
    const FormulaValue v = ridge_second_order_risk(1000, ParamSpace(10, 0.5, 1.0));
    CHECK(v.value == doctest::Approx(2.49375));
    CHECK(v.valid);
    const FormulaValue tiny = ridge_second_order_risk(1000, ParamSpace(10, 1e-4, 1.0));
    CHECK(tiny.value / (10 * 1e-8) == doctest::Approx(1.0));
    CHECK_FALSE(ridge_second_order_risk(10, ParamSpace(10, 2.0, 1.0)).valid);
    for (double tau : {0.1, 0.3, 0.7})
        CHECK(ridge_second_order_risk(1000, ParamSpace(10, tau, 1.0)).value < 10 * tau * tau);
}

TEST_CASE("enet second order examples") {
    const EnetBounds b = enet_second_order_bounds(1000, ParamSpace(10, 1.0, 1.0));
    CHECK(b.lower.value == doctest::Approx(10.0 * (1.0 - 0.005 * std::numbers::e)));
    CHECK(b.lower.value == doctest::Approx(9.8641).epsilon(1e-4));
    CHECK(b.upper.value == doctest::Approx(9.7831).epsilon(1e-4));
    const EnetBounds wide = enet_second_order_bounds(10'000'000, ParamSpace(10, 1.0, 1.0));
    CHECK(wide.lower.value == doctest::Approx(10.0).epsilon(1e-5));
    CHECK(wide.upper.value == doctest::Approx(10.0).epsilon(1e-5));
    for (double mu : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const EnetBounds m = enet_second_order_bounds(100000, ParamSpace(10, mu, 1.0));
        const bool upper_bigger = 10 * mu * mu - m.upper.value > 10 * mu * mu - m.lower.value;
        CHECK(upper_bigger == (mu < 4.0 / std::sqrt(2.0 * std::numbers::pi)));
    }
    CHECK_FALSE(enet_second_order_bounds(20, ParamSpace(10, 3.0, 1.0)).upper.valid);
}

TEST_CASE("enet correction exceeds ridge correction exactly when the coefficients say so") {
    for (int i = 1; i <= 60; ++i) {
        const double mu = 0.05 * i;
        const ParamSpace space(10, mu, 1.0);
        const double enet_corr = 10 * mu * mu - enet_second_order_bounds(1'000'000, space).upper.value;
        const double ridge_corr = 10 * mu * mu - ridge_second_order_risk(1'000'000, space).value;
        const bool predicted = std::exp(mu * mu) > std::sqrt(2.0 * std::numbers::pi) * mu * mu * mu / 2.0;
        CHECK((enet_corr > ridge_corr) == predicted);
    }
}

TEST_CASE("theory curve is sorted and normalized") {
    const RiskCurve c = theory_curve(RiskFormula::ZeroEstimator, 1000, 10, 1.0, {2.0, 0.5, 1.0});
    REQUIRE(c.points.size() == 3);
    CHECK(c.points[0].first == 0.5);
    CHECK(c.points[2].first == 2.0);
    for (const auto& [x, r] : c.points) CHECK(r == 1.0);
    const RiskCurve r = theory_curve(RiskFormula::RidgeSecondOrder, 1000, 10, 1.0, {1.0, 4.0});
    CHECK(r.points[1].second == doctest::Approx(1.0 - 10.0 / (1000 * 16.0)));
}

TEST_CASE("soft_risk examples") {
    for (double u : {0.0, 0.7, 3.0, -2.0}) CHECK(soft_risk(u, {0.0, 0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-15));
    const double expect = 2.0 * (2.0 * normal_sf(1.0) - normal_pdf(1.0));
    CHECK(soft_risk(0.0, {1.0, 0.0, 1.0}) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(soft_risk(0.0, {1.0, 0.0, 1.0}) == doctest::Approx(0.15068).epsilon(1e-4));
    const MeanSe mc = soft_risk_mc(10.0, {1.0, 0.0, 1.0}, 1'000'000, 3);
    CHECK(std::abs(soft_risk(10.0, {1.0, 0.0, 1.0}) - mc.mean) <= 4.0 * mc.se);
}

TEST_CASE("soft_risk against Monte Carlo on a small grid") {
    std::uint64_t seed = 100;
    for (double u : {0.0, 1.0, 4.0})
        for (double c1 : {0.3, 2.0})
            for (double c2 : {0.0, 1.5})
                for (double s : {0.5, 1.0}) {
                    const SoftRiskParams sp{c1, c2, s};
                    const MeanSe mc = soft_risk_mc(u, sp, 200'000, ++seed);
                    CHECK(std::abs(soft_risk(u, sp) - mc.mean) <= 4.0 * mc.se);
                }
}

TEST_CASE("soft_risk symmetry and monotonicity") {
    for (double c1 : {0.0, 0.5, 1.0, 2.0, 4.0})
        for (double c2 : {0.0, 0.5, 3.0}) {
            const SoftRiskParams sp{c1, c2, 1.0};
            double prev = soft_risk(0.0, sp);
            for (int i = 1; i <= 50; ++i) {
                const double v = soft_risk(0.1 * i, sp);
                CHECK(v >= prev);
                CHECK(soft_risk(-0.1 * i, sp) == v);
                prev = v;
            }
        }
}

TEST_CASE("soft_risk rejects invalid parameters") {
    CHECK_THROWS_AS(soft_risk(1.0, {-0.1, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(soft_risk(1.0, {1.0, -1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(soft_risk(1.0, {1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("worst pair risk") {
    const SoftRiskParams sp{1.0, 0.5, 1.0};
    for (double c : {0.3, 1.0, 2.5, 5.0}) {
        const double w = worst_pair_risk(c, sp);
        CHECK(w == 2.0 * soft_risk(c / std::numbers::sqrt2, sp));
        for (int a = 0; a < 32; ++a) {
            const double th = 2.0 * std::numbers::pi * a / 32.0;
            CHECK(soft_risk(c * std::cos(th), sp) + soft_risk(c * std::sin(th), sp) <= w + 1e-10);
        }
    }
    CHECK(worst_pair_risk(1e-9, sp) == doctest::Approx(2.0 * soft_risk(0.0, sp)));
    CHECK_THROWS_AS(worst_pair_risk(0.0, sp), std::invalid_argument);
}

TEST_CASE("gauss legendre integrates polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre(10, x, w);
    for (int deg = 0; deg <= 19; ++deg) {
        double sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * std::pow(x[i], deg);
        const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
        CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
    }
    CHECK_THROWS_AS(gauss_legendre(0, x, w), std::invalid_argument);
}

TEST_CASE("mixture soft risk") {
    // Identity estimator: g = E sigma_theta^2 = s^2, up to the quantile truncation.
    for (double u : {0.0, 2.0}) CHECK(mixture_soft_risk(u, {0.0, 0.0, 1.3}, 50) == doctest::Approx(1.69).epsilon(1e-6));
    CHECK(mixture_soft_risk(0.0, {0.0, 0.0, 1.0}, 3) == doctest::Approx(1.0).epsilon(1e-6));
    for (double u : {0.0, 0.5, 2.0, 5.0})
        for (double c1 : {0.5, 2.0})
            for (double c2 : {0.0, 1.0}) {
                const SoftRiskParams sp{c1, c2, 1.0};
                CHECK(std::abs(mixture_soft_risk(u, sp, 100, 64) - mixture_soft_risk(u, sp, 100, 128)) <= 1e-8);
                CHECK(std::abs(mixture_soft_risk(u, sp, 10000) - soft_risk(u, sp)) <= 1e-2);
            }
    CHECK_THROWS_AS(mixture_soft_risk(0.0, {1.0, 0.0, 1.0}, 2), std::invalid_argument);
}

TEST_CASE("mixture soft risk matches Monte Carlo over the scale") {
    const SoftRiskParams sp{1.2, 0.4, 1.0};
    const std::size_t n = 20, draws = 200'000;
    RngStream rng(55, 0);
    std::vector<double> z(n), loss(draws);
    for (std::size_t i = 0; i < draws; ++i) {
        rng.fill_normals(z);
        double v = 0.0;
        for (double t : z) v += t * t;
        const double s = std::sqrt(v / n);
        loss[i] = soft_risk(0.8, {sp.chi1, sp.chi2, s});
    }
    const MeanSe mc = mean_se(loss);
    CHECK(std::abs(mixture_soft_risk(0.8, sp, n) - mc.mean) <= 4.0 * mc.se);
}

TEST_CASE("gaussian tail bounds") {
    const auto [lo0, up0] = gaussian_tail_bounds(1.0, 0);
    CHECK(up0 == doctest::Approx(0.24197).epsilon(1e-4));
    CHECK(normal_sf(1.0) == doctest::Approx(0.15866).epsilon(1e-4));
    CHECK(normal_sf(1.0) <= up0);
    for (double x : {0.5, 1.0, 2.0, 3.5, 6.0, 10.0})
        for (unsigned k : {0u, 1u, 2u, 3u}) {
            const auto [lo, up] = gaussian_tail_bounds(x, k);
            CHECK(lo <= normal_sf(x));
            CHECK(normal_sf(x) <= up);
        }
    const auto [lo6, up6] = gaussian_tail_bounds(6.0, 0);
    CHECK(up6 / lo6 <= 1.1);
    CHECK_THROWS_AS(gaussian_tail_bounds(0.0, 0), std::invalid_argument);
}

TEST_CASE("normal functions") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(normal_sf(-1.0) == doctest::Approx(normal_cdf(1.0)).epsilon(1e-15));
    CHECK(normal_sf(8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-12));
    CHECK(normal_cdf(-8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-12));
    CHECK(normal_pdf(0.0) == kInvSqrt2Pi);
}
