#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "snrlab/estimators.hpp"

namespace snrlab {

double lasso_objective(const DesignMatrix& X, const Vector& y, const Vector& beta, double lambda) {
    return 0.5 * (y - X * beta).squaredNorm() + lambda * beta.lpNorm<1>();
}

namespace {

double kkt_from_gradient(const Vector& grad, const Vector& beta, double lambda) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        const double g = grad(j);
        double r;
        if (beta(j) > 0.0)
            r = std::abs(g - lambda);
        else if (beta(j) < 0.0)
            r = std::abs(g + lambda);
        else
            r = std::max(std::abs(g) - lambda, 0.0);
        worst = std::max(worst, r);
    }
    return worst;
}

class CoordinateDescent {
public:
    CoordinateDescent(const DesignMatrix& X, const Vector& y)
        : X_(X), y_(y), col_sq_(X.colwise().squaredNorm().transpose()) {}

    Estimate solve(double lambda, const LassoOptions& opt, const Vector* warm) {
        const Eigen::Index p = X_.cols();
        Vector beta = warm ? *warm : Vector::Zero(p);
        if (beta.size() != p) throw std::invalid_argument("lasso_fit: warm start has wrong length");
        Vector resid = y_ - X_ * beta;

        Estimate est;
        std::size_t sweeps = 0;
        bool converged = false;
        double kkt = 0.0;
        std::vector<Eigen::Index> active;

        auto objective = [&] { return 0.5 * resid.squaredNorm() + lambda * beta.lpNorm<1>(); };

        while (sweeps < opt.max_iter) {
            // Full cyclic sweep.
            for (Eigen::Index j = 0; j < p; ++j) update(j, lambda, beta, resid);
            ++sweeps;
            if (opt.trace) est.objective_trace.push_back(objective());

            kkt = kkt_from_gradient(X_.transpose() * resid, beta, lambda);
            if (kkt <= opt.tol) {
                converged = true;
                break;
            }

            // Active-set passes until the active coordinates settle.
            active.clear();
            for (Eigen::Index j = 0; j < p; ++j)
                if (beta(j) != 0.0) active.push_back(j);
            while (!active.empty() && sweeps < opt.max_iter) {
                double max_step = 0.0;
                for (Eigen::Index j : active)
                    max_step = std::max(max_step, update(j, lambda, beta, resid));
                ++sweeps;
                if (opt.trace) est.objective_trace.push_back(objective());
                if (max_step <= 0.1 * opt.tol) break;
            }
        }
        if (!converged) kkt = kkt_from_gradient(X_.transpose() * resid, beta, lambda);

        est.objective = objective();
        est.coefficients = std::move(beta);
        est.iterations = sweeps;
        est.converged = converged;
        est.kkt_residual = kkt;
        est.certificate = Certificate::Exact;
        return est;
    }

private:
    // Exact minimization in coordinate j. Returns |change| * ||X_j||, the
    // movement of the fitted values.
    double update(Eigen::Index j, double lambda, Vector& beta, Vector& resid) const {
        const double norm2 = col_sq_(j);
        if (norm2 == 0.0) {
            beta(j) = 0.0;
            return 0.0;
        }
        const double old = beta(j);
        const double rho = X_.col(j).dot(resid) + norm2 * old;
        const double fresh = soft_threshold(rho, lambda) / norm2;
        const double delta = fresh - old;
        if (delta != 0.0) {
            resid.noalias() -= delta * X_.col(j);
            beta(j) = fresh;
        }
        return std::abs(delta) * std::sqrt(norm2);
    }

    const DesignMatrix& X_;
    const Vector& y_;
    Vector col_sq_;
};

void check_lasso_args(const DesignMatrix& X, const Vector& y, double lambda, const LassoOptions& opt) {
    if (y.size() != X.rows()) throw std::invalid_argument("lasso_fit: y length does not match X rows");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lasso_fit: lambda must be finite and > 0");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("lasso_fit: tol must be > 0");
    if (opt.max_iter == 0) throw std::invalid_argument("lasso_fit: max_iter must be >= 1");
}

}  // namespace

double lasso_kkt_residual(const DesignMatrix& X, const Vector& y, const Vector& beta, double lambda) {
    return kkt_from_gradient(X.transpose() * (y - X * beta), beta, lambda);
}

Estimate lasso_fit(const DesignMatrix& X, const Vector& y, double lambda, const LassoOptions& options,
                   const Vector* warm_start) {
    check_lasso_args(X, y, lambda, options);
    return CoordinateDescent(X, y).solve(lambda, options, warm_start);
}

std::vector<Estimate> lasso_path(const DesignMatrix& X, const Vector& y, std::span<const double> lambdas,
                                 const LassoOptions& options) {
    for (double l : lambdas) check_lasso_args(X, y, l, options);
    std::vector<std::size_t> order(lambdas.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return lambdas[a] > lambdas[b]; });

    CoordinateDescent cd(X, y);
    std::vector<Estimate> out(lambdas.size());
    const Vector* warm = nullptr;
    for (std::size_t idx : order) {
        out[idx] = cd.solve(lambdas[idx], options, warm);
        warm = &out[idx].coefficients;
    }
    return out;
}

Tuning lasso_default_lambda(std::size_t p, std::size_t k, double sigma, double epsilon) {
    if (p <= k)
        throw std::invalid_argument("lasso_default_lambda: requires p > k (p = " + std::to_string(p) +
                                    ", k = " + std::to_string(k) + ")");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("lasso_default_lambda: epsilon must be >= 0");
    Tuning t;
    t.family = Family::Lasso;
    t.lambda = (1.0 + epsilon) * sigma *
               std::sqrt(2.0 * std::log(static_cast<double>(p) / static_cast<double>(k)));
    t.provenance = Provenance::PaperFormula;
    return t;
}

}  // namespace snrlab
