#include "snrlab/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "snrlab/stats.hpp"

namespace snrlab {

namespace {

double logsumexp(const std::vector<double>& v) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double x : v) peak = std::max(peak, x);
    if (!std::isfinite(peak)) return peak;
    std::vector<double> terms(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) terms[i] = std::exp(v[i] - peak);
    return peak + std::log(pairwise_sum(terms));
}

}  // namespace

void SpikePriorConfig::validate() const {
    if (m == 0) throw std::invalid_argument("SpikePriorConfig: m must be >= 1");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("SpikePriorConfig: lambda must be > 0");
}

SignalVector block_prior_sample(std::size_t p, std::size_t k, double lambda, bool symmetric, RngStream& rng) {
    if (k == 0 || k > p)
        throw std::invalid_argument("block_prior_sample: need 1 <= k <= p, got k = " + std::to_string(k) +
                                    ", p = " + std::to_string(p));
    if (!(lambda > 0.0)) throw std::invalid_argument("block_prior_sample: lambda must be > 0");
    const std::size_t m = p / k;
    SignalVector beta;
    beta.p = p;
    for (std::size_t b = 0; b < k; ++b) {
        const std::size_t start = b * m;
        const std::size_t size = b + 1 == k ? p - start : m;
        beta.support.push_back(start + static_cast<std::size_t>(rng.next_below(size)));
        double v = lambda;
        if (symmetric && (rng.next_u64() >> 63)) v = -v;
        beta.values.push_back(v);
    }
    return beta;
}

PosteriorDiagnostics spike_posterior(const Vector& y, const DesignMatrix& X, double lambda, bool symmetric) {
    if (y.size() != X.rows()) throw std::invalid_argument("spike_posterior: y length does not match X rows");
    if (X.cols() == 0) throw std::invalid_argument("spike_posterior: X has no columns");
    if (!(lambda > 0.0)) throw std::invalid_argument("spike_posterior: lambda must be > 0");
    const Eigen::Index m = X.cols();
    const Vector xty = X.transpose() * y;
    const Vector sq = X.colwise().squaredNorm().transpose();

    std::vector<double> plus(static_cast<std::size_t>(m)), minus;
    for (Eigen::Index i = 0; i < m; ++i)
        plus[static_cast<std::size_t>(i)] = lambda * xty(i) - 0.5 * lambda * lambda * sq(i);
    if (symmetric) {
        minus.resize(plus.size());
        for (Eigen::Index i = 0; i < m; ++i)
            minus[static_cast<std::size_t>(i)] = -lambda * xty(i) - 0.5 * lambda * lambda * sq(i);
    }
    std::vector<double> all = plus;
    all.insert(all.end(), minus.begin(), minus.end());
    const double log_total = logsumexp(all);

    PosteriorDiagnostics out;
    out.p.resize(m);
    out.mean.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const double wp = std::exp(plus[s] - log_total);
        const double wm = symmetric ? std::exp(minus[s] - log_total) : 0.0;
        out.p(i) = wp + wm;
        out.mean(i) = lambda * (wp - wm);
    }
    out.A = std::numeric_limits<double>::quiet_NaN();
    out.logB = std::numeric_limits<double>::quiet_NaN();
    return out;
}

AbValues ab_diagnostics(const DesignMatrix& X, const Vector& z, double lambda) {
    if (z.size() != X.rows()) throw std::invalid_argument("ab_diagnostics: z length does not match X rows");
    if (X.cols() < 2) throw std::invalid_argument("ab_diagnostics: need at least two columns");
    if (!(lambda > 0.0)) throw std::invalid_argument("ab_diagnostics: lambda must be > 0");
    const auto n = static_cast<double>(X.rows());
    const Eigen::Index m = X.cols();
    const Vector y = lambda * X.col(0) + z;
    const double l2 = lambda * lambda;

    const double log_d = std::log(static_cast<double>(m - 1)) - 0.5 * n * std::log1p(l2 / n) +
                         l2 * y.squaredNorm() / (2.0 * (n + l2));

    std::vector<double> null_terms(static_cast<std::size_t>(m - 1));
    for (Eigen::Index i = 1; i < m; ++i)
        null_terms[static_cast<std::size_t>(i - 1)] = lambda * X.col(i).dot(y) - 0.5 * l2 * X.col(i).squaredNorm();

    const double log_w1 = 0.5 * l2 * X.col(0).squaredNorm() + lambda * X.col(0).dot(z);
    return {std::exp(logsumexp(null_terms) - log_d), log_d - log_w1};
}

PosteriorDiagnostics posterior_diagnostics(const DesignMatrix& X, const Vector& z, double lambda) {
    PosteriorDiagnostics d = spike_posterior(lambda * X.col(0) + z, X, lambda, false);
    const AbValues ab = ab_diagnostics(X, z, lambda);
    d.A = ab.A;
    d.logB = ab.logB;
    return d;
}

std::vector<SpikeTrial> spike_diagnostics_mc(std::size_t n, std::size_t m, double lambda, std::size_t trials,
                                             const RngStream& rng) {
    if (n == 0 || m < 2) throw std::invalid_argument("spike_diagnostics_mc: need n >= 1, m >= 2");
    std::vector<SpikeTrial> out(trials);
    const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t t = 0; t < count; ++t) {
        RngStream local = rng.split(static_cast<std::uint64_t>(t));
        RngStream design_rng = local.split(1);
        RngStream noise_rng = local.split(3);
        const DesignMatrix X = gen_design(n, m, design_rng);
        Vector z(static_cast<Eigen::Index>(n));
        noise_rng.fill_normals(std::span<double>(z.data(), n));
        const PosteriorDiagnostics d = posterior_diagnostics(X, z, lambda);
        out[static_cast<std::size_t>(t)] = {d.p(0), d.A, d.logB};
    }
    return out;
}

BayesRisk bayes_risk_mc(const SpikePriorConfig& config, std::size_t n, std::size_t trials, const RngStream& rng) {
    config.validate();
    if (trials < 2) throw std::invalid_argument("bayes_risk_mc: trials must be >= 2");
    if (n == 0) throw std::invalid_argument("bayes_risk_mc: n must be >= 1");
    std::vector<double> loss(trials);
    const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t t = 0; t < count; ++t) {
        RngStream local = rng.split(static_cast<std::uint64_t>(t));
        RngStream prior_rng = local.split(2);
        RngStream design_rng = local.split(1);
        RngStream noise_rng = local.split(3);
        const SignalVector beta = block_prior_sample(config.m, 1, config.lambda, config.symmetric, prior_rng);
        const DesignMatrix X = gen_design(n, config.m, design_rng);
        const Vector y = gen_response(X, beta, 1.0, noise_rng);
        const PosteriorDiagnostics d = spike_posterior(y, X, config.lambda, config.symmetric);
        loss[static_cast<std::size_t>(t)] = (d.mean - beta.dense()).squaredNorm();
    }
    const MeanSe ms = mean_se(loss);
    return {ms.mean, ms.se};
}

}  // namespace snrlab
