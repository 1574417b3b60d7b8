#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace snrlab {

/// Pairwise (cascade) summation. The result depends only on the order of
/// `x`, so reductions over per-trial arrays are thread-count independent.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;       // 0 when count < 2
    std::size_t count = 0;
};

/// Sample mean and standard error sd / sqrt(count), both through pairwise sums.
MeanSe mean_se(std::span<const double> x);

/// Straight left-to-right two-pass reference for mean_se.
MeanSe mean_se_naive(std::span<const double> x);

/// Median (average of the middle pair for even sizes). Copies its input.
double median(std::span<const double> x);

}  // namespace snrlab
