#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "snrlab/estimators.hpp"
#include "snrlab/stats.hpp"

namespace snrlab {

std::string_view family_name(Family f) {
    switch (f) {
        case Family::Ridge: return "ridge";
        case Family::Lasso: return "lasso";
        case Family::ElasticNet: return "enet";
        case Family::BestSubset: return "best-subset";
        case Family::Zero: return "zero";
    }
    return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
    for (Family f : {Family::Ridge, Family::Lasso, Family::ElasticNet, Family::BestSubset, Family::Zero})
        if (family_name(f) == name) return f;
    if (name == "elastic-net" || name == "elasticnet") return Family::ElasticNet;
    if (name == "bss") return Family::BestSubset;
    return std::nullopt;
}

std::string_view provenance_name(Provenance p) {
    switch (p) {
        case Provenance::PaperFormula: return "paper-formula";
        case Provenance::OracleGrid: return "oracle-grid";
        case Provenance::UserFixed: return "user-fixed";
    }
    return "unknown";
}

std::string_view certificate_name(Certificate c) {
    switch (c) {
        case Certificate::Exact: return "exact";
        case Certificate::BranchAndBoundOptimal: return "branch-and-bound-optimal";
        case Certificate::HeuristicOnly: return "heuristic-only";
    }
    return "unknown";
}

double to_canonical_lambda(Family family, double sum_of_squares_lambda) {
    if (family == Family::Lasso) return 0.5 * sum_of_squares_lambda;
    return sum_of_squares_lambda;
}

void Tuning::validate(std::size_t p) const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("Tuning: lambda must be finite and >= 0");
    if (family == Family::ElasticNet && !(1.0 + gamma > 0.0))
        throw std::invalid_argument("Tuning: elastic net needs 1 + gamma > 0");
    if (family == Family::BestSubset && (k == 0 || k > p))
        throw std::invalid_argument("Tuning: best subset needs 1 <= k <= p");
}

Estimate fit(const DesignMatrix& X, const Vector& y, const Tuning& tuning, const FitOptions& options) {
    const auto p = static_cast<std::size_t>(X.cols());
    tuning.validate(p);
    switch (tuning.family) {
        case Family::Ridge: return ridge_fit(X, y, tuning.lambda);
        case Family::Lasso: return lasso_fit(X, y, tuning.lambda, options.lasso);
        case Family::ElasticNet: return enet_fit(X, y, tuning.lambda, tuning.gamma);
        case Family::BestSubset: return bss_fit(X, y, tuning.k, options.bss_mode, options.bss_budget);
        case Family::Zero: return zero_fit(p);
    }
    throw std::logic_error("fit: unknown family");
}

double scaled_loss(const Vector& estimate, const SignalVector& beta) {
    if (static_cast<std::size_t>(estimate.size()) != beta.p)
        throw std::invalid_argument("scaled_loss: dimension mismatch");
    const double loss = (estimate - beta.dense()).squaredNorm();
    const double norm2 = beta.squared_norm();
    return norm2 > 0.0 ? loss / norm2 : loss;
}

namespace {

// Losses of every grid point on one dataset; NaN marks a failed fit.
std::vector<double> grid_losses(Family family, const Dataset& d, std::span<const Tuning> grid,
                                const FitOptions& options) {
    std::vector<double> out(grid.size(), std::numeric_limits<double>::quiet_NaN());
    auto guarded = [&](std::size_t i, auto&& body) {
        try {
            grid[i].validate(d.p());
            out[i] = scaled_loss(body(), d.beta);
        } catch (const std::exception&) {
        }
    };
    switch (family) {
        case Family::Ridge: {
            const RidgeSpectral spectral(d.X, d.y);
            for (std::size_t i = 0; i < grid.size(); ++i)
                guarded(i, [&] {
                    if (grid[i].lambda == 0.0) return ridge_fit(d.X, d.y, 0.0).coefficients;
                    return spectral.coefficients(grid[i].lambda);
                });
            break;
        }
        case Family::Lasso: {
            std::vector<double> lambdas;
            std::vector<std::size_t> where;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (grid[i].lambda > 0.0) {
                    lambdas.push_back(grid[i].lambda);
                    where.push_back(i);
                }
            }
            const auto path = lasso_path(d.X, d.y, lambdas, options.lasso);
            for (std::size_t j = 0; j < path.size(); ++j)
                out[where[j]] = scaled_loss(path[j].coefficients, d.beta);
            break;
        }
        case Family::ElasticNet: {
            const Vector xty = d.X.transpose() * d.y;
            for (std::size_t i = 0; i < grid.size(); ++i)
                guarded(i, [&] { return enet_from_correlations(xty, grid[i].lambda, grid[i].gamma).coefficients; });
            break;
        }
        default:
            for (std::size_t i = 0; i < grid.size(); ++i)
                guarded(i, [&] {
                    Estimate e = fit(d.X, d.y, grid[i], options);
                    if (e.certificate == Certificate::HeuristicOnly)
                        throw BudgetExceeded("oracle_tune: uncertified best subset fit");
                    return e.coefficients;
                });
    }
    return out;
}

}  // namespace

RiskTable oracle_risk_table(Family family, std::span<const Dataset> datasets, std::span<const Tuning> grid,
                            const FitOptions& options) {
    if (grid.empty()) throw std::invalid_argument("oracle_tune: empty grid");
    if (datasets.empty()) throw std::invalid_argument("oracle_tune: no datasets");
    for (const Dataset& d : datasets)
        if (d.n() != datasets[0].n() || d.p() != datasets[0].p())
            throw std::invalid_argument("oracle_tune: datasets differ in shape");

    const auto count = static_cast<std::int64_t>(datasets.size());
    std::vector<std::vector<double>> losses(datasets.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i)
        losses[static_cast<std::size_t>(i)] =
            grid_losses(family, datasets[static_cast<std::size_t>(i)], grid, options);

    RiskTable table;
    table.grid.assign(grid.begin(), grid.end());
    table.mean_scaled_loss.resize(grid.size());
    table.usable.resize(grid.size());
    std::vector<double> column(datasets.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        bool ok = true;
        for (std::size_t i = 0; i < datasets.size(); ++i) {
            column[i] = losses[i][g];
            ok = ok && std::isfinite(column[i]);
        }
        table.usable[g] = ok;
        table.mean_scaled_loss[g] =
            ok ? pairwise_sum(column) / static_cast<double>(column.size()) : std::numeric_limits<double>::quiet_NaN();
    }
    return table;
}

Tuning oracle_tune(Family family, std::span<const Dataset> datasets, std::span<const Tuning> grid,
                   const FitOptions& options) {
    const RiskTable table = oracle_risk_table(family, datasets, grid, options);
    std::size_t best = grid.size();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (!table.usable[g]) continue;
        if (best == grid.size()) {
            best = g;
            continue;
        }
        const double a = table.mean_scaled_loss[g];
        const double b = table.mean_scaled_loss[best];
        const Tuning& tg = grid[g];
        const Tuning& tb = grid[best];
        if (a < b || (a == b && (tg.lambda < tb.lambda || (tg.lambda == tb.lambda && tg.gamma < tb.gamma))))
            best = g;
    }
    if (best == grid.size()) throw std::runtime_error("oracle_tune: every grid point failed");
    Tuning t = grid[best];
    t.family = family;
    t.provenance = Provenance::OracleGrid;
    return t;
}

}  // namespace snrlab
