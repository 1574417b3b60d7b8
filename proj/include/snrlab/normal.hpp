#pragma once

namespace snrlab {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double normal_pdf(double x);
/// Phi(x) = erfc(-x / sqrt 2) / 2, accurate in the lower tail.
double normal_cdf(double x);
/// 1 - Phi(x) = erfc(x / sqrt 2) / 2, accurate in the upper tail.
double normal_sf(double x);

}  // namespace snrlab
