#pragma once

// Estimators for sparse linear regression.
//
// Penalty convention: every fitter that takes a `lambda` expects the
// canonical weight of the half-scaled objective
//
//   ridge:  1/2 ||y - Xb||^2 + lambda/2 ||b||_2^2   ((X'X + lambda I) b = X'y)
//   lasso:  1/2 ||y - Xb||^2 + lambda   ||b||_1
//
// A sum-of-squares objective  sum_i (y_i - x_i'b)^2 + L pen(b)  maps to the
// canonical one through to_canonical_lambda(). The elastic-net estimator is
// the exception: it keeps its own objective ||X'y - b||^2 + lambda||b||_1 +
// gamma||b||^2, whose minimizer is eta(X'y, lambda/2) / (1 + gamma).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snrlab/errors.hpp"
#include "snrlab/model.hpp"

namespace snrlab {

enum class Family { Ridge, Lasso, ElasticNet, BestSubset, Zero };
enum class Provenance { PaperFormula, OracleGrid, UserFixed };
enum class Certificate { Exact, BranchAndBoundOptimal, HeuristicOnly };

std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view name);
std::string_view provenance_name(Provenance p);
std::string_view certificate_name(Certificate c);

struct Tuning {
    Family family = Family::Zero;
    double lambda = 0.0;
    double gamma = 0.0;
    std::size_t k = 0;
    Provenance provenance = Provenance::UserFixed;

    /// Throws std::invalid_argument when the invariants for `family` fail
    /// (lambda >= 0, 1 + gamma > 0 for ElasticNet, 1 <= k <= p for BestSubset).
    void validate(std::size_t p) const;
};

struct Estimate {
    Vector coefficients;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
    double kkt_residual = 0.0;
    Certificate certificate = Certificate::Exact;

    // Lasso: objective after every sweep. Best subset: selected support,
    // search nodes, supports skipped as numerically singular.
    std::vector<double> objective_trace;
    std::vector<std::size_t> support;
    std::uint64_t nodes = 0;
    std::uint64_t skipped_supports = 0;
};

/// Converts a penalty weight from the sum-of-squares convention to the
/// canonical half-scaled one: lasso lambda/2, ridge unchanged.
double to_canonical_lambda(Family family, double sum_of_squares_lambda);

// ---- soft thresholding ---------------------------------------------------

/// sign(u) * max(|u| - chi, 0).
inline double soft_threshold(double u, double chi) {
    if (u > chi) return u - chi;
    if (u < -chi) return u + chi;
    return 0.0;
}

Vector soft_threshold(const Vector& u, double chi);

// ---- ridge ----------------------------------------------------------------

/// Closed-form ridge. Uses the primal system when n >= p and the dual
/// X'(XX' + lambda I)^{-1} y when p > n. lambda = 0 needs full column rank.
Estimate ridge_fit(const DesignMatrix& X, const Vector& y, double lambda);
Estimate ridge_fit_primal(const DesignMatrix& X, const Vector& y, double lambda);
Estimate ridge_fit_dual(const DesignMatrix& X, const Vector& y, double lambda);

/// lambda = p sigma^2 / (k tau^2).
Tuning ridge_default_lambda(std::size_t p, const ParamSpace& space);

/// Eigendecomposition of the smaller Gram matrix, for evaluating many
/// ridge penalties on one dataset.
class RidgeSpectral {
public:
    RidgeSpectral(const DesignMatrix& X, const Vector& y);
    Vector coefficients(double lambda) const;

private:
    bool dual_;
    Matrix basis_;       // eigenvectors of X'X (primal) or XX' (dual)
    Vector eigenvalues_;
    Vector projected_;   // basis' X'y (primal) or basis' y (dual)
    Matrix xt_basis_;    // X' basis (dual only)
};

// ---- lasso ----------------------------------------------------------------

struct LassoOptions {
    double tol = 1e-9;
    std::size_t max_iter = 100000;
    /// Record the objective after every sweep.
    bool trace = false;
};

/// Cyclic coordinate descent with an active-set inner loop. Converged means
/// the KKT residual is at most tol; otherwise converged = false and the
/// last iterate is returned.
Estimate lasso_fit(const DesignMatrix& X, const Vector& y, double lambda,
                   const LassoOptions& options = {}, const Vector* warm_start = nullptr);

inline Estimate lasso_fit(const DesignMatrix& X, const Vector& y, double lambda, double tol,
                          std::size_t max_iter) {
    return lasso_fit(X, y, lambda, LassoOptions{tol, max_iter, false});
}

/// Warm-started fits for each lambda (any order; solved from largest down).
std::vector<Estimate> lasso_path(const DesignMatrix& X, const Vector& y,
                                 std::span<const double> lambdas, const LassoOptions& options = {});

/// max_j dist(X_j'(y - Xb), lambda * subdifferential of |b_j|).
double lasso_kkt_residual(const DesignMatrix& X, const Vector& y, const Vector& beta, double lambda);
double lasso_objective(const DesignMatrix& X, const Vector& y, const Vector& beta, double lambda);

/// lambda = (1 + epsilon) sigma sqrt(2 log(p/k)).
Tuning lasso_default_lambda(std::size_t p, std::size_t k, double sigma, double epsilon = 0.0);

// ---- elastic net ------------------------------------------------------------

Estimate enet_fit(const DesignMatrix& X, const Vector& y, double lambda, double gamma);
/// Same estimator given X'y directly.
Estimate enet_from_correlations(const Vector& xty, double lambda, double gamma);
double enet_objective(const Vector& xty, const Vector& b, double lambda, double gamma);

/// lambda = 4 tau, gamma = p sigma^2 / (2 k tau^2) exp(-3 tau^2 / (2 sigma^2)) - 1.
/// Throws RegimeMismatch when gamma <= 0.
Tuning enet_default_tuning(std::size_t p, const ParamSpace& space);

// ---- best subset ------------------------------------------------------------

enum class BssMode { Exhaustive, BranchAndBound };

inline constexpr std::uint64_t kDefaultBssNodeBudget = 1'000'000;

/// Least squares over the best support of size k. Exhaustive throws
/// BudgetExceeded if C(p, k) > budget. BranchAndBound stops after `budget`
/// search nodes and then reports Certificate::HeuristicOnly.
/// Supports whose Gram matrix is numerically singular are skipped and
/// counted; ties go to the lexicographically smallest support.
Estimate bss_fit(const DesignMatrix& X, const Vector& y, std::size_t k,
                 BssMode mode = BssMode::BranchAndBound,
                 std::uint64_t budget = kDefaultBssNodeBudget);

/// C(p, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t p, std::uint64_t k);

// ---- zero -------------------------------------------------------------------

Estimate zero_fit(std::size_t p);

// ---- dispatch and tuning ----------------------------------------------------

struct FitOptions {
    LassoOptions lasso;
    BssMode bss_mode = BssMode::BranchAndBound;
    std::uint64_t bss_budget = kDefaultBssNodeBudget;
};

Estimate fit(const DesignMatrix& X, const Vector& y, const Tuning& tuning,
             const FitOptions& options = {});

/// ||b - beta||^2 / ||beta||^2, or the unscaled loss when beta = 0.
double scaled_loss(const Vector& estimate, const SignalVector& beta);

struct RiskTable {
    std::vector<Tuning> grid;
    std::vector<double> mean_scaled_loss;   // NaN where the grid point failed
    std::vector<bool> usable;
};

/// Mean scaled loss of every grid point over `datasets`.
RiskTable oracle_risk_table(Family family, std::span<const Dataset> datasets,
                            std::span<const Tuning> grid, const FitOptions& options = {});

/// Grid point with the smallest mean scaled loss; ties go to the smaller
/// lambda, then the smaller gamma. Throws if no grid point is usable.
Tuning oracle_tune(Family family, std::span<const Dataset> datasets, std::span<const Tuning> grid,
                   const FitOptions& options = {});

}  // namespace snrlab
