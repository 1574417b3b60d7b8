#include <cmath>
#include <string>

#include "snrlab/estimators.hpp"

namespace snrlab {

Vector soft_threshold(const Vector& u, double chi) {
    if (!(chi >= 0.0)) throw std::invalid_argument("soft_threshold: chi must be >= 0");
    return u.unaryExpr([chi](double v) { return soft_threshold(v, chi); });
}

double enet_objective(const Vector& xty, const Vector& b, double lambda, double gamma) {
    return (xty - b).squaredNorm() + lambda * b.lpNorm<1>() + gamma * b.squaredNorm();
}

Estimate enet_from_correlations(const Vector& xty, double lambda, double gamma) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("enet_fit: lambda must be finite and >= 0");
    if (!(1.0 + gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("enet_fit: requires 1 + gamma > 0, got gamma = " +
                                    std::to_string(gamma));
    Estimate e;
    e.coefficients = soft_threshold(xty, 0.5 * lambda) / (1.0 + gamma);
    e.objective = enet_objective(xty, e.coefficients, lambda, gamma);
    e.iterations = 0;
    e.converged = true;
    e.certificate = Certificate::Exact;
    return e;
}

Estimate enet_fit(const DesignMatrix& X, const Vector& y, double lambda, double gamma) {
    if (y.size() != X.rows()) throw std::invalid_argument("enet_fit: y length does not match X rows");
    return enet_from_correlations(X.transpose() * y, lambda, gamma);
}

Tuning enet_default_tuning(std::size_t p, const ParamSpace& space) {
    if (!(space.sigma > 0.0)) throw RegimeMismatch("enet_default_tuning: sigma must be > 0");
    const double mu2 = space.mu() * space.mu();
    Tuning t;
    t.family = Family::ElasticNet;
    t.lambda = 4.0 * space.tau;
    t.gamma = static_cast<double>(p) / (2.0 * static_cast<double>(space.k) * mu2) *
                  std::exp(-1.5 * mu2) -
              1.0;
    t.provenance = Provenance::PaperFormula;
    if (!(t.gamma > 0.0))
        throw RegimeMismatch("enet_default_tuning: gamma = " + std::to_string(t.gamma) +
                             " <= 0 for p = " + std::to_string(p) + ", k = " +
                             std::to_string(space.k) + ", mu = " + std::to_string(space.mu()));
    return t;
}

Estimate zero_fit(std::size_t p) {
    Estimate e;
    e.coefficients = Vector::Zero(static_cast<Eigen::Index>(p));
    e.objective = 0.0;
    e.certificate = Certificate::Exact;
    return e;
}

}  // namespace snrlab
