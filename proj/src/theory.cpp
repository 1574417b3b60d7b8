#include "snrlab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "snrlab/normal.hpp"

namespace snrlab {

std::string_view formula_name(RiskFormula f) {
    switch (f) {
        case RiskFormula::FirstOrderI: return "first-order-low";
        case RiskFormula::FirstOrderII: return "first-order-medium";
        case RiskFormula::FirstOrderIII: return "first-order-high";
        case RiskFormula::RidgeSecondOrder: return "ridge-second-order";
        case RiskFormula::EnetLower: return "enet-lower";
        case RiskFormula::EnetUpper: return "enet-upper";
        case RiskFormula::ZeroEstimator: return "zero";
    }
    return "unknown";
}

namespace {

void require_p_above_k(std::size_t p, const ParamSpace& space, const char* what) {
    if (p <= space.k)
        throw std::invalid_argument(std::string(what) + ": requires p > k");
}

double signal_energy(const ParamSpace& s) { return static_cast<double>(s.k) * s.tau * s.tau; }

}  // namespace

double minimax_first_order(std::size_t p, const ParamSpace& space, const SnrRegime& regime) {
    require_p_above_k(p, space, "minimax_first_order");
    if (regime.label == RegimeLabel::High)
        return 2.0 * space.sigma * space.sigma * static_cast<double>(space.k) *
               std::log(static_cast<double>(p) / static_cast<double>(space.k));
    return signal_energy(space);
}

FormulaValue ridge_second_order_risk(std::size_t p, const ParamSpace& space) {
    if (p == 0 || !(space.sigma > 0.0)) throw std::invalid_argument("ridge_second_order_risk: needs p > 0, sigma > 0");
    const double e = signal_energy(space);
    const double correction = e / (static_cast<double>(p) * space.sigma * space.sigma);
    return {e * (1.0 - correction), correction < 1.0};
}

EnetBounds enet_second_order_bounds(std::size_t p, const ParamSpace& space) {
    require_p_above_k(p, space, "enet_second_order_bounds");
    if (!(space.sigma > 0.0)) throw std::invalid_argument("enet_second_order_bounds: sigma must be > 0");
    const double e = signal_energy(space);
    const double mu = space.mu();
    const double ratio = static_cast<double>(space.k) / static_cast<double>(p);
    const double growth = std::exp(mu * mu);
    const double lower_c = 0.5 * ratio * growth;
    const double upper_c = 2.0 * kInvSqrt2Pi * ratio * growth / mu;
    return {{e * (1.0 - lower_c), lower_c < 1.0}, {e * (1.0 - upper_c), upper_c < 1.0}};
}

FormulaValue evaluate_formula(RiskFormula formula, std::size_t p, const ParamSpace& space) {
    switch (formula) {
        case RiskFormula::FirstOrderI:
        case RiskFormula::FirstOrderII:
            return {minimax_first_order(p, space, {0.0, RegimeLabel::Low}), true};
        case RiskFormula::FirstOrderIII:
            return {minimax_first_order(p, space, {0.0, RegimeLabel::High}), true};
        case RiskFormula::RidgeSecondOrder: return ridge_second_order_risk(p, space);
        case RiskFormula::EnetLower: return enet_second_order_bounds(p, space).lower;
        case RiskFormula::EnetUpper: return enet_second_order_bounds(p, space).upper;
        case RiskFormula::ZeroEstimator: return {signal_energy(space), true};
    }
    throw std::logic_error("evaluate_formula: unknown formula");
}

RiskCurve theory_curve(RiskFormula formula, std::size_t p, std::size_t k, double tau,
                       std::vector<double> inv_snr_grid) {
    std::sort(inv_snr_grid.begin(), inv_snr_grid.end());
    RiskCurve curve;
    curve.formula = formula;
    for (double inv : inv_snr_grid) {
        const ParamSpace space(k, tau, tau * inv);
        const FormulaValue v = evaluate_formula(formula, p, space);
        curve.points.emplace_back(inv, v.value / signal_energy(space));
        curve.valid.push_back(v.valid);
    }
    return curve;
}

void SoftRiskParams::validate() const {
    if (!(chi1 >= 0.0) || !std::isfinite(chi1)) throw std::invalid_argument("SoftRiskParams: chi1 must be >= 0");
    if (!(1.0 + chi2 > 0.0) || !std::isfinite(chi2))
        throw std::invalid_argument("SoftRiskParams: 1 + chi2 must be > 0");
    if (!(noise_sd > 0.0) || !std::isfinite(noise_sd))
        throw std::invalid_argument("SoftRiskParams: noise_sd must be > 0");
}

double soft_risk(double u, const SoftRiskParams& params) {
    params.validate();
    const double a = 1.0 / (1.0 + params.chi2);
    const double t = params.chi1;
    const double s = params.noise_sd;
    u = std::abs(u);
    if (t == 0.0) return a * a * s * s + (1.0 - a) * (1.0 - a) * u * u;

    // e above t - u: estimate a (u + e - t).
    const double c_hi = (a - 1.0) * u - a * t;
    const double al_hi = (t - u) / s;
    const double q_hi = normal_sf(al_hi);
    const double f_hi = normal_pdf(al_hi);
    const double upper = a * a * s * s * (al_hi * f_hi + q_hi) + 2.0 * a * s * c_hi * f_hi + c_hi * c_hi * q_hi;

    // e below -t - u: estimate a (u + e + t).
    const double c_lo = (a - 1.0) * u + a * t;
    const double al_lo = (t + u) / s;
    const double q_lo = normal_sf(al_lo);
    const double f_lo = normal_pdf(al_lo);
    const double lower = a * a * s * s * (al_lo * f_lo + q_lo) - 2.0 * a * s * c_lo * f_lo + c_lo * c_lo * q_lo;

    // Dead zone: estimate 0.
    const double middle = u * u * std::max(normal_cdf(al_hi) - q_lo, 0.0);
    return upper + lower + middle;
}

double worst_pair_risk(double c, const SoftRiskParams& params) {
    if (!(c > 0.0)) throw std::invalid_argument("worst_pair_risk: c must be > 0");
    return 2.0 * soft_risk(c / std::numbers::sqrt2, params);
}

std::pair<double, double> gaussian_tail_bounds(double x, unsigned order) {
    if (!(x > 0.0)) throw std::invalid_argument("gaussian_tail_bounds: x must be > 0");
    const double inv2 = 1.0 / (x * x);
    const double lead = normal_pdf(x) / x;
    // Partial sums of sum_j (-1)^j (2j-1)!! x^{-2j}.
    double term = 1.0;
    double sum = 1.0;
    double even = 1.0;
    const unsigned top = 2 * order + 1;
    for (unsigned j = 1; j <= top; ++j) {
        term *= -static_cast<double>(2 * j - 1) * inv2;
        sum += term;
        if (j == 2 * order) even = sum;
    }
    return {lead * sum, lead * even};
}

namespace {

// (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
    double p0 = 1.0, p1 = x;
    for (std::size_t j = 2; j <= n; ++j) {
        const auto jd = static_cast<double>(j);
        const double pj = ((2.0 * jd - 1.0) * x * p1 - (jd - 1.0) * p0) / jd;
        p0 = p1;
        p1 = pj;
    }
    if (n == 1) p0 = 1.0;
    return {p1, static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

void gauss_legendre(std::size_t count, std::vector<double>& nodes, std::vector<double>& weights) {
    if (count == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
    nodes.assign(count, 0.0);
    weights.assign(count, 0.0);
    const auto m = static_cast<double>(count);
    for (std::size_t i = 0; i < (count + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(count, x);
            const double step = p / dp;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        const double dp = legendre(count, x).second;
        nodes[i] = -x;
        nodes[count - 1 - i] = x;
        weights[i] = weights[count - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

double mixture_soft_risk(double u, const SoftRiskParams& params, std::size_t n, std::size_t quad_nodes) {
    params.validate();
    if (n < 3) throw std::invalid_argument("mixture_soft_risk: n must be >= 3");
    if (quad_nodes == 0) throw std::invalid_argument("mixture_soft_risk: quad_nodes must be >= 1");

    const double dof = static_cast<double>(n);
    const boost::math::chi_squared_distribution<double> chi2(dof);
    const double lo = std::log(boost::math::quantile(chi2, 1e-8));
    const double hi = std::log(boost::math::quantile(boost::math::complement(chi2, 1e-8)));

    std::vector<double> x, w;
    gauss_legendre(quad_nodes, x, w);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    const double log_norm = 0.5 * dof * std::log(2.0) + std::lgamma(0.5 * dof);

    std::vector<double> logf(quad_nodes);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < quad_nodes; ++i) {
        const double t = mid + half * x[i];
        // Density of log V for V ~ chi^2_n.
        logf[i] = 0.5 * dof * t - 0.5 * std::exp(t) - log_norm;
        peak = std::max(peak, logf[i]);
    }
    double mass = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < quad_nodes; ++i) {
        const double t = mid + half * x[i];
        const double weight = w[i] * std::exp(logf[i] - peak);
        SoftRiskParams local = params;
        local.noise_sd = params.noise_sd * std::sqrt(std::exp(t) / dof);
        mass += weight;
        acc += weight * soft_risk(u, local);
    }
    return acc / mass;
}

}  // namespace snrlab
