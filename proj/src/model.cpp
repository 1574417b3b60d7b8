#include "snrlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace snrlab {

double SignalVector::squared_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
}

Vector SignalVector::dense() const {
    Vector beta = Vector::Zero(static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < support.size(); ++i)
        beta(static_cast<Eigen::Index>(support[i])) = values[i];
    return beta;
}

SignalVector SignalVector::from_dense(const Vector& beta) {
    SignalVector s;
    s.p = static_cast<std::size_t>(beta.size());
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
        if (beta(i) != 0.0) {
            s.support.push_back(static_cast<std::size_t>(i));
            s.values.push_back(beta(i));
        }
    }
    return s;
}

ParamSpace::ParamSpace(std::size_t k_, double tau_, double sigma_) : k(k_), tau(tau_), sigma(sigma_) {
    if (k == 0) throw std::invalid_argument("ParamSpace: k must be >= 1");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("ParamSpace: tau must be > 0");
    // sigma = 0 is the noiseless limit; it is accepted so harness sweeps can
    // include it, while the formulas that divide by sigma check it themselves.
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("ParamSpace: sigma must be >= 0");
}

bool ParamSpace::contains(const SignalVector& beta) const {
    std::size_t nnz = 0;
    for (double v : beta.values)
        if (v != 0.0) ++nnz;
    const double bound = static_cast<double>(k) * tau * tau;
    return nnz <= k && beta.squared_norm() <= bound * (1.0 + 1e-12);
}

std::string_view regime_name(RegimeLabel label) {
    switch (label) {
        case RegimeLabel::Low: return "low";
        case RegimeLabel::Medium: return "medium";
        case RegimeLabel::High: return "high";
    }
    return "unknown";
}

DesignMatrix gen_design(std::size_t n, std::size_t p, RngStream& rng, std::size_t entry_budget) {
    if (n == 0 || p == 0) throw std::invalid_argument("gen_design: n and p must be >= 1");
    if (n > entry_budget / p)
        throw std::length_error("gen_design: n*p = " + std::to_string(n) + "*" + std::to_string(p) +
                                " exceeds the entry budget " + std::to_string(entry_budget));

    DesignMatrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const std::uint64_t first = rng.position();
    const auto total = static_cast<std::int64_t>(n * p);
    const std::int64_t blocks = (total + 3) / 4;
    const auto cols = static_cast<std::int64_t>(p);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
        const auto z = block_normals(rng.block(first + static_cast<std::uint64_t>(b)));
        for (std::int64_t s = 0; s < 4; ++s) {
            const std::int64_t t = 4 * b + s;
            if (t >= total) break;
            X(t / cols, t % cols) = scale * z[static_cast<std::size_t>(s)];
        }
    }
    rng.skip_blocks(static_cast<std::uint64_t>(blocks));
    return X;
}

DesignMatrix gen_design_serial(std::size_t n, std::size_t p, RngStream& rng, std::size_t entry_budget) {
    if (n == 0 || p == 0) throw std::invalid_argument("gen_design: n and p must be >= 1");
    if (n > entry_budget / p)
        throw std::length_error("gen_design: n*p exceeds the entry budget");
    DesignMatrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const std::uint64_t first = rng.position();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = scale * rng.normal_at(first, i * p + j);
    rng.skip_blocks((n * p + 3) / 4);
    return X;
}

std::vector<std::size_t> sample_subset(std::size_t p, std::size_t k, RngStream& rng) {
    if (k > p) throw std::invalid_argument("sample_subset: k > p");
    // Floyd: for j = p-k .. p-1 draw t in [0, j]; insert t, or j if t is taken.
    std::unordered_set<std::size_t> chosen;
    chosen.reserve(k * 2);
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t j = p - k; j < p; ++j) {
        const auto t = static_cast<std::size_t>(rng.next_below(j + 1));
        const std::size_t pick = chosen.contains(t) ? j : t;
        chosen.insert(pick);
        out.push_back(pick);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SignalVector gen_signal(std::size_t p, const ParamSpace& space, RngStream& rng, bool random_signs) {
    if (space.k > p)
        throw std::invalid_argument("gen_signal: k = " + std::to_string(space.k) + " exceeds p = " +
                                    std::to_string(p));
    SignalVector beta;
    beta.p = p;
    beta.support = sample_subset(p, space.k, rng);
    beta.values.assign(space.k, space.tau);
    if (random_signs) {
        for (double& v : beta.values)
            if (rng.next_u64() >> 63) v = -v;
    }
    return beta;
}

Vector gen_response(const DesignMatrix& X, const SignalVector& beta, double sigma, RngStream& rng) {
    if (beta.p != static_cast<std::size_t>(X.cols()))
        throw std::invalid_argument("gen_response: beta has dimension " + std::to_string(beta.p) +
                                    " but X has " + std::to_string(X.cols()) + " columns");
    if (!(sigma >= 0.0)) throw std::invalid_argument("gen_response: sigma must be >= 0");
    Vector y = Vector::Zero(X.rows());
    for (std::size_t i = 0; i < beta.support.size(); ++i)
        y += beta.values[i] * X.col(static_cast<Eigen::Index>(beta.support[i]));
    Vector z(X.rows());
    rng.fill_normals(std::span<double>(z.data(), static_cast<std::size_t>(z.size())));
    if (sigma != 0.0) y += sigma * z;
    return y;
}

Dataset gen_dataset(std::size_t n, std::size_t p, const ParamSpace& space, const RngStream& rng,
                    bool random_signs) {
    RngStream design_rng = rng.split(1);
    RngStream signal_rng = rng.split(2);
    RngStream noise_rng = rng.split(3);
    Dataset d;
    d.X = gen_design(n, p, design_rng);
    d.beta = gen_signal(p, space, signal_rng, random_signs);
    d.y = gen_response(d.X, d.beta, space.sigma, noise_rng);
    d.sigma = space.sigma;
    d.seed = rng.master_seed();
    d.stream_id = rng.stream_id();
    return d;
}

SnrRegime classify_regime(std::size_t p, const ParamSpace& space) {
    if (p <= space.k)
        throw std::invalid_argument("classify_regime: requires p > k (p = " + std::to_string(p) +
                                    ", k = " + std::to_string(space.k) + ")");
    if (!(space.sigma > 0.0)) throw std::invalid_argument("classify_regime: sigma must be > 0");
    const double mu = space.mu();
    SnrRegime r;
    r.rho = mu / std::sqrt(std::log(static_cast<double>(p) / static_cast<double>(space.k)));
    if (mu <= kLowSnrMuCutoff)
        r.label = RegimeLabel::Low;
    else if (r.rho >= kHighSnrRhoCutoff)
        r.label = RegimeLabel::High;
    else
        r.label = RegimeLabel::Medium;
    return r;
}

}  // namespace snrlab
