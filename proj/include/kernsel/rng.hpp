#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace kernsel {

// SplitMix64 (Steele/Lea/Flood; Vigna's fixed-increment variant).
// 64-bit state advanced by the golden-gamma constant, output mixed through
// two xor-multiply rounds. Passes BigCrush; one value per 64-bit state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += UINT64_C(0x9E3779B97F4A7C15));
        z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
        return z ^ (z >> 31);
    }

    // Uniform draw on the open interval (0,1): the top 53 bits are offset by
    // half an ulp so neither endpoint is attainable (safe under quantile maps).
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Derives the per-replication seed from a master seed.
//
// The stream seed is the SplitMix64 output for state master + (i+1)*gamma
// with gamma = 0x9E3779B97F4A7C15, i.e. the (i+1)-th raw output of a
// SplitMix64 seeded with `master`. gamma is odd, so i -> master + (i+1)*gamma
// is a bijection mod 2^64, and the output mix is invertible: derive_seed is
// injective in the replication index for any fixed master.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication_index) {
    std::uint64_t z = master + (replication_index + 1) * UINT64_C(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
}

// Standard normal quantile (inverse CDF) by Peter Acklam's rational
// approximation (2003). Relative error below 1.15e-9 over (0,1); uses only
// +,-,*,/, sqrt and log so results are reproducible across platforms.
// Central region |p-1/2| <= 0.47575 uses a degree-(5,5) rational in
// r = (p-1/2)^2; each tail uses a degree-(5,5) rational in sqrt(-2 log q).
inline double normal_quantile(double p) {
    static constexpr double a[6] = {
        -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
        1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {
        -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
        6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[6] = {
        -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
        -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00};
    static constexpr double d[4] = {
        7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
        3.754408661907416e+00};

    constexpr double p_low = 0.02425;
    constexpr double p_high = 1.0 - p_low;

    if (!(p > 0.0 && p < 1.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > p_high) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace kernsel
