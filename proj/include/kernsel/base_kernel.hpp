#pragma once

#include <cmath>

#include "kernsel/errors.hpp"
#include "kernsel/mathfn.hpp"

namespace kernsel {

// Two-bump Gaussian base kernel
//
//   K_a(x) = ( exp(-(x-a)^2/2) + exp(-(x+a)^2/2) ) / (2 sqrt(2 pi)),  a >= 0.
//
// a = 0 is the classical Gaussian kernel. K_a is symmetric, nonnegative and
// integrates to 1, so |K_a|_1 = 1. Closed forms:
//   K_a(0)    = exp(-a^2/2) / sqrt(2 pi)
//   |K_a|^2   = (1 + exp(-a^2)) / (4 sqrt(pi))
//   (K_a * K_a)(u) = [ N(u; -2a, 2) + 2 N(u; 0, 2) + N(u; 2a, 2) ] / 4
// where N(.; m, v) is the normal density with mean m and variance v.
class BaseKernel {
public:
    explicit BaseKernel(double a) : a_(a) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw ConfigError("base kernel parameter a must be finite and >= 0");
        }
    }

    // The Gaussian kernel is the a=0 member of the family.
    static BaseKernel gaussian() { return BaseKernel(0.0); }

    double a() const { return a_; }

    double operator()(double x) const {
        // evaluated at |x| so k(x,y) = k(y,x) holds bitwise, not just in value
        const double ax = std::abs(x);
        const double dm = ax - a_;
        const double dp = ax + a_;
        return (std::exp(-0.5 * dm * dm) + std::exp(-0.5 * dp * dp)) / (2.0 * kSqrt2Pi);
    }

    double at_zero() const { return std::exp(-0.5 * a_ * a_) / kSqrt2Pi; }

    double l2_norm_sq() const { return (1.0 + std::exp(-a_ * a_)) / (4.0 * kSqrtPi); }

    double l1_norm() const { return 1.0; }

    // sup_x K_a(x), located numerically: coarse scan of [0, a+2] followed by
    // ternary refinement around the best grid point. K_a can have a local max
    // at 0 and another near a, so the scan comes first.
    double sup_norm() const {
        const double hi = a_ + 2.0;
        const int grid = 4096;
        double best_x = 0.0;
        double best = (*this)(0.0);
        for (int i = 1; i <= grid; ++i) {
            const double x = hi * static_cast<double>(i) / grid;
            const double v = (*this)(x);
            if (v > best) {
                best = v;
                best_x = x;
            }
        }
        double lo = std::max(0.0, best_x - hi / grid);
        double up = std::min(hi, best_x + hi / grid);
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + (up - lo) / 3.0;
            const double m2 = up - (up - lo) / 3.0;
            if ((*this)(m1) < (*this)(m2)) {
                lo = m1;
            } else {
                up = m2;
            }
            if (up - lo < 1e-14) break;
        }
        return (*this)(0.5 * (lo + up));
    }

    // Self-convolution (K_a * K_a)(u), the three-component Gaussian mixture;
    // evaluated at |u| for bitwise symmetry.
    double self_convolution(double u) const {
        const double au = std::abs(u);
        return 0.25 * (normal_pdf(au, -2.0 * a_, 2.0) + 2.0 * normal_pdf(au, 0.0, 2.0) +
                       normal_pdf(au, 2.0 * a_, 2.0));
    }

    // Radius beyond which K_a is below 1e-16 of its peak (both bumps are more
    // than 9 sigma out).
    double support_radius() const { return a_ + 9.0; }

private:
    double a_;
};

}  // namespace kernsel
