#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "snrlab/rng.hpp"

namespace snrlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense n x p design. Entry (i, j) is the (i*p + j)-th normal of the stream.
using DesignMatrix = Matrix;

/// Sparse coefficient vector: sorted support plus the values on it.
struct SignalVector {
    std::size_t p = 0;
    std::vector<std::size_t> support;
    std::vector<double> values;

    std::size_t nnz() const { return support.size(); }
    double squared_norm() const;
    Vector dense() const;
    static SignalVector from_dense(const Vector& beta);
};

/// (k, tau) of the sparse, signal-limited parameter set, together with the
/// noise level sigma.
struct ParamSpace {
    std::size_t k = 1;
    double tau = 1.0;
    double sigma = 1.0;

    ParamSpace() = default;
    ParamSpace(std::size_t k, double tau, double sigma);

    double mu() const { return tau / sigma; }
    double eps(std::size_t p) const { return static_cast<double>(k) / static_cast<double>(p); }
    /// ||beta||_0 <= k and ||beta||_2^2 <= k tau^2 (squared-norm check relative 1e-12).
    bool contains(const SignalVector& beta) const;
};

struct Dataset {
    DesignMatrix X;
    Vector y;
    SignalVector beta;
    double sigma = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
    std::size_t p() const { return static_cast<std::size_t>(X.cols()); }
};

enum class RegimeLabel { Low, Medium, High };

std::string_view regime_name(RegimeLabel label);

struct SnrRegime {
    double rho = 0.0;
    RegimeLabel label = RegimeLabel::Low;
};

/// Cutoffs for classify_regime. Advisory only; estimators never read them.
inline constexpr double kLowSnrMuCutoff = 0.5;
inline constexpr double kHighSnrRhoCutoff = 1.5;

/// Largest n*p accepted by gen_design (about 2 GB of doubles).
inline constexpr std::size_t kDesignEntryBudget = 250'000'000;

DesignMatrix gen_design(std::size_t n, std::size_t p, RngStream& rng,
                        std::size_t entry_budget = kDesignEntryBudget);

/// Single-threaded reference for gen_design; bit-identical output.
DesignMatrix gen_design_serial(std::size_t n, std::size_t p, RngStream& rng,
                               std::size_t entry_budget = kDesignEntryBudget);

/// Uniform k-subset of [0, p) carrying tau on every index. With
/// `random_signs` each value is +-tau with equal probability.
SignalVector gen_signal(std::size_t p, const ParamSpace& space, RngStream& rng,
                        bool random_signs = false);

Vector gen_response(const DesignMatrix& X, const SignalVector& beta, double sigma, RngStream& rng);

/// Draws X, beta and y from three independent substreams of `rng`.
Dataset gen_dataset(std::size_t n, std::size_t p, const ParamSpace& space, const RngStream& rng,
                    bool random_signs = false);

SnrRegime classify_regime(std::size_t p, const ParamSpace& space);

/// Uniform k-subset of [0, p), sorted. Floyd's algorithm.
std::vector<std::size_t> sample_subset(std::size_t p, std::size_t k, RngStream& rng);

}  // namespace snrlab
