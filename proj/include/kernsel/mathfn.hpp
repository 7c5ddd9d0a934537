#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace kernsel {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;  // sqrt(2*pi)
inline constexpr double kSqrtPi = 1.77245385090551602730;   // sqrt(pi)

// Density of N(mean, var) at x.
inline double normal_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return std::exp(-d * d / (2.0 * var)) / (kSqrt2Pi * std::sqrt(var));
}

// Standard normal density.
inline double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / kSqrt2Pi;
}

// Median of a copy of v; even-sized vectors average the two middle elements.
inline double median(std::vector<double> v) {
    const std::size_t m = v.size();
    if (m == 0) return 0.0;
    std::sort(v.begin(), v.end());
    if (m % 2 == 1) return v[m / 2];
    return 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace kernsel
