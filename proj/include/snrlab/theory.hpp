#pragma once

// Risk formulas for the sparse, signal-limited parameter set and the
// one-dimensional soft-thresholding risk functions.
//
// The asymptotic formulas drop their o(1) terms. Each carries a `valid`
// flag that is false when the dropped correction term reaches 1, where the
// leading-order expression no longer means anything.

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "snrlab/model.hpp"

namespace snrlab {

enum class RiskFormula {
    FirstOrderI,
    FirstOrderII,
    FirstOrderIII,
    RidgeSecondOrder,
    EnetLower,
    EnetUpper,
    ZeroEstimator
};

std::string_view formula_name(RiskFormula f);

struct FormulaValue {
    double value = 0.0;
    bool valid = true;
};

struct RiskCurve {
    RiskFormula formula = RiskFormula::ZeroEstimator;
    /// (inv_snr, risk / (k tau^2)), sorted by inv_snr.
    std::vector<std::pair<double, double>> points;
    std::vector<bool> valid;
};

/// k tau^2 in the Low and Medium regimes, 2 sigma^2 k log(p/k) in High.
double minimax_first_order(std::size_t p, const ParamSpace& space, const SnrRegime& regime);

/// k tau^2 (1 - k tau^2 / (p sigma^2)).
FormulaValue ridge_second_order_risk(std::size_t p, const ParamSpace& space);

struct EnetBounds {
    FormulaValue lower;
    FormulaValue upper;
};

/// lower = k tau^2 (1 - (k/p) e^{mu^2} / 2),
/// upper = k tau^2 (1 - 2/sqrt(2 pi) (k/p) e^{mu^2} / mu).
EnetBounds enet_second_order_bounds(std::size_t p, const ParamSpace& space);

/// Value of one formula; ZeroEstimator is k tau^2.
FormulaValue evaluate_formula(RiskFormula formula, std::size_t p, const ParamSpace& space);

/// Curve of risk / (k tau^2) over sigma = tau * inv_snr.
RiskCurve theory_curve(RiskFormula formula, std::size_t p, std::size_t k, double tau,
                       std::vector<double> inv_snr_grid);

// ---- soft thresholding risk -------------------------------------------------

struct SoftRiskParams {
    double chi1 = 0.0;      // threshold
    double chi2 = 0.0;      // shrinkage: estimate is eta(., chi1) / (1 + chi2)
    double noise_sd = 1.0;

    /// Throws std::invalid_argument unless chi1 >= 0, 1 + chi2 > 0, noise_sd > 0.
    void validate() const;
};

/// r(u) = E (eta(u + e, chi1) / (1 + chi2) - u)^2 with e ~ N(0, noise_sd^2),
/// in closed form.
double soft_risk(double u, const SoftRiskParams& params);

/// g(u) = E[ r(u; chi1, chi2) at noise level sigma_theta ] where
/// sigma_theta^2 = noise_sd^2 V / n and V ~ chi^2_n, i.e. the scale of
/// sqrt(c) ||theta|| with theta ~ N(0, I_n / n). Gauss-Legendre quadrature in
/// log V between the 1e-8 and 1 - 1e-8 quantiles.
double mixture_soft_risk(double u, const SoftRiskParams& params, std::size_t n,
                         std::size_t quad_nodes = 64);

/// max over x^2 + y^2 = c^2 of r(x) + r(y), which is 2 r(c / sqrt 2).
double worst_pair_risk(double c, const SoftRiskParams& params);

/// (Phi~_{2k+1}(x), Phi~_{2k}(x)) with
/// Phi~_l(x) = phi(x)/x sum_{j=0}^{l} (-1)^j (2j-1)!! x^{-2j}.
std::pair<double, double> gaussian_tail_bounds(double x, unsigned order);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(std::size_t count, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace snrlab
