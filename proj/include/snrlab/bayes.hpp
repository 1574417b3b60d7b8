#pragma once

// Spike and block priors, the exact posterior of the single-spike prior and
// the normalized factors A, B behind its collapse below sqrt(2 log m).

#include <cstdint>
#include <vector>

#include "snrlab/model.hpp"
#include "snrlab/rng.hpp"

namespace snrlab {

struct SpikePriorConfig {
    std::size_t m = 1;
    double lambda = 1.0;
    bool symmetric = false;

    void validate() const;
};

struct PosteriorDiagnostics {
    Vector p;            // posterior probability that coordinate i carries the spike
    Vector mean;         // posterior mean of beta
    double A = 0.0;      // NaN unless computed by posterior_diagnostics
    double logB = 0.0;   // NaN unless computed by posterior_diagnostics
};

/// One spike of height lambda (random sign if `symmetric`) per block.
/// Blocks have size p / k; the last block absorbs the remainder.
SignalVector block_prior_sample(std::size_t p, std::size_t k, double lambda, bool symmetric, RngStream& rng);

/// Posterior over the spike location given y = X beta + z with beta =
/// lambda e_I (or +-lambda e_I) and I uniform:
///   w_i = exp(lambda X_i'y - lambda^2 ||X_i||^2 / 2)
/// plus exp(-lambda X_i'y - lambda^2 ||X_i||^2 / 2) for the symmetric prior.
PosteriorDiagnostics spike_posterior(const Vector& y, const DesignMatrix& X, double lambda, bool symmetric);

struct AbValues {
    double A = 0.0;
    double logB = 0.0;
};

/// With y = lambda X_1 + z and
///   D = (m - 1)(1 + lambda^2/n)^{-n/2} exp(lambda^2 ||y||^2 / (2(n + lambda^2))),
/// A = sum_{i>=2} exp(lambda X_i'y - lambda^2 ||X_i||^2/2) / D and
/// B = D / exp(lambda^2 ||X_1||^2/2 + lambda X_1'z), so p_1 = 1 / (1 + A B).
/// D is the expectation of the sum over the null columns given y.
AbValues ab_diagnostics(const DesignMatrix& X, const Vector& z, double lambda);

/// spike_posterior and ab_diagnostics for y = lambda X_1 + z.
PosteriorDiagnostics posterior_diagnostics(const DesignMatrix& X, const Vector& z, double lambda);

struct SpikeTrial {
    double p1 = 0.0;
    double A = 0.0;
    double logB = 0.0;
};

/// `trials` independent draws of (X, z) with n rows and m columns, spike on
/// column 0. Trial t uses rng.split(t).
std::vector<SpikeTrial> spike_diagnostics_mc(std::size_t n, std::size_t m, double lambda, std::size_t trials,
                                             const RngStream& rng);

struct BayesRisk {
    double risk = 0.0;
    double se = 0.0;
};

/// Monte Carlo risk of the posterior mean under the spike prior, noise sd 1.
BayesRisk bayes_risk_mc(const SpikePriorConfig& config, std::size_t n, std::size_t trials, const RngStream& rng);

}  // namespace snrlab
