#include "snrlab/normal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "snrlab/stats.hpp"

namespace snrlab {

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double normal_sf(double x) { return 0.5 * std::erfc(x * M_SQRT1_2); }

MeanSe mean_se(std::span<const double> x) {
    MeanSe r;
    r.count = x.size();
    if (x.empty()) return r;
    r.mean = pairwise_sum(x) / static_cast<double>(x.size());
    if (x.size() < 2) return r;
    std::vector<double> dev(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) dev[i] = (x[i] - r.mean) * (x[i] - r.mean);
    const double var = pairwise_sum(dev) / static_cast<double>(x.size() - 1);
    r.se = std::sqrt(var / static_cast<double>(x.size()));
    return r;
}

MeanSe mean_se_naive(std::span<const double> x) {
    MeanSe r;
    r.count = x.size();
    if (x.empty()) return r;
    double s = 0.0;
    for (double v : x) s += v;
    r.mean = s / static_cast<double>(x.size());
    if (x.size() < 2) return r;
    double ss = 0.0;
    for (double v : x) ss += (v - r.mean) * (v - r.mean);
    r.se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
    return r;
}

double median(std::span<const double> x) {
    if (x.empty()) return std::nan("");
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace snrlab
