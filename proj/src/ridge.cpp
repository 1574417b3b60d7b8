#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "snrlab/estimators.hpp"

namespace snrlab {

namespace {

double ridge_objective(const DesignMatrix& X, const Vector& y, const Vector& b, double lambda) {
    return 0.5 * (y - X * b).squaredNorm() + 0.5 * lambda * b.squaredNorm();
}

void check_ridge_args(const DesignMatrix& X, const Vector& y, double lambda) {
    if (y.size() != X.rows())
        throw std::invalid_argument("ridge_fit: y has length " + std::to_string(y.size()) +
                                    ", X has " + std::to_string(X.rows()) + " rows");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("ridge_fit: lambda must be finite and >= 0");
}

// Cholesky of a symmetric positive (semi)definite system, rejecting
// numerically singular factors.
Eigen::LLT<Matrix> checked_cholesky(const Matrix& A, const char* what) {
    Eigen::LLT<Matrix> llt(A);
    if (llt.info() != Eigen::Success)
        throw SingularSystem(std::string(what) + ": system is not positive definite");
    const Vector d = llt.matrixL().toDenseMatrix().diagonal();
    const double max_diag = A.diagonal().maxCoeff();
    if (d.array().square().minCoeff() <= 1e-13 * max_diag)
        throw SingularSystem(std::string(what) + ": system is numerically singular");
    return llt;
}

Estimate finish(const DesignMatrix& X, const Vector& y, double lambda, Vector b) {
    Estimate e;
    e.objective = ridge_objective(X, y, b, lambda);
    e.coefficients = std::move(b);
    e.iterations = 0;
    e.converged = true;
    e.certificate = Certificate::Exact;
    return e;
}

}  // namespace

Estimate ridge_fit_primal(const DesignMatrix& X, const Vector& y, double lambda) {
    check_ridge_args(X, y, lambda);
    Matrix A = X.transpose() * X;
    A.diagonal().array() += lambda;
    const auto llt = checked_cholesky(A, "ridge_fit (primal)");
    return finish(X, y, lambda, llt.solve(X.transpose() * y));
}

Estimate ridge_fit_dual(const DesignMatrix& X, const Vector& y, double lambda) {
    check_ridge_args(X, y, lambda);
    if (lambda == 0.0 && X.cols() > X.rows())
        throw SingularSystem("ridge_fit: lambda = 0 needs full column rank, but p > n");
    Matrix K = X * X.transpose();
    K.diagonal().array() += lambda;
    const auto llt = checked_cholesky(K, "ridge_fit (dual)");
    return finish(X, y, lambda, X.transpose() * llt.solve(y));
}

Estimate ridge_fit(const DesignMatrix& X, const Vector& y, double lambda) {
    if (X.cols() > X.rows()) return ridge_fit_dual(X, y, lambda);
    return ridge_fit_primal(X, y, lambda);
}

Tuning ridge_default_lambda(std::size_t p, const ParamSpace& space) {
    Tuning t;
    t.family = Family::Ridge;
    t.lambda = static_cast<double>(p) * space.sigma * space.sigma /
               (static_cast<double>(space.k) * space.tau * space.tau);
    t.provenance = Provenance::PaperFormula;
    return t;
}

RidgeSpectral::RidgeSpectral(const DesignMatrix& X, const Vector& y) : dual_(X.cols() > X.rows()) {
    if (dual_) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(X * X.transpose());
        basis_ = eig.eigenvectors();
        eigenvalues_ = eig.eigenvalues().cwiseMax(0.0);
        projected_ = basis_.transpose() * y;
        xt_basis_ = X.transpose() * basis_;
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(X.transpose() * X);
        basis_ = eig.eigenvectors();
        eigenvalues_ = eig.eigenvalues().cwiseMax(0.0);
        projected_ = basis_.transpose() * (X.transpose() * y);
    }
}

Vector RidgeSpectral::coefficients(double lambda) const {
    const Vector scaled = projected_.array() / (eigenvalues_.array() + lambda);
    if (dual_) return xt_basis_ * scaled;
    return basis_ * scaled;
}

}  // namespace snrlab
