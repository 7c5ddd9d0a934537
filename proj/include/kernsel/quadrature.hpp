#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "kernsel/errors.hpp"

namespace kernsel {

struct QuadratureOptions {
    double abs_tol = 1e-8;
    int max_depth = 44;
    // Upper bound on the width of the initial panels. Bisection refines
    // panels it can see are wrong; a feature much narrower than the node
    // spacing can hide between nodes, so integrands with a known fine scale
    // (a bandwidth, a basis frequency) should cap the panel width near it.
    // 0 means no cap.
    double max_panel_width = 0.0;
};

namespace detail {

struct GaussLegendre64 {
    std::array<double, 32> node;    // positive abscissae on [-1,1]
    std::array<double, 32> weight;  // matching weights
};

// Nodes/weights of the 64-point Gauss-Legendre rule, computed once by Newton
// iteration on P_64 (the usual three-term recurrence). Converges to machine
// precision in a handful of steps from the Chebyshev initial guess.
inline const GaussLegendre64& gl64() {
    static const GaussLegendre64 table = [] {
        GaussLegendre64 t{};
        constexpr int n = 64;
        constexpr double pi = 3.14159265358979323846;
        for (int i = 0; i < n / 2; ++i) {
            double z = std::cos(pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
                }
                pp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            t.node[i] = z;
            t.weight[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
        return t;
    }();
    return table;
}

template <typename F>
double gl64_panel(F&& f, double a, double b) {
    const auto& t = gl64();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 32; ++i) {
        const double dx = half * t.node[i];
        sum += t.weight[i] * (f(mid + dx) + f(mid - dx));
    }
    return half * sum;
}

template <typename F>
double adapt(F&& f, double a, double b, double whole, double tol, int depth,
             int max_depth, double& err_acc) {
    const double mid = 0.5 * (a + b);
    const double left = gl64_panel(f, a, mid);
    const double right = gl64_panel(f, mid, b);
    const double err = std::abs(left + right - whole);
    if (err <= tol || depth >= max_depth) {
        err_acc += err;
        return left + right;
    }
    return adapt(f, a, mid, left, 0.5 * tol, depth + 1, max_depth, err_acc) +
           adapt(f, mid, b, right, 0.5 * tol, depth + 1, max_depth, err_acc);
}

}  // namespace detail

// Adaptive composite Gauss-Legendre integration of f over [a,b]: 64 nodes per
// panel, initial panels split at the supplied breakpoints (jump or kink
// locations) and capped at max_panel_width, then bisected until each local
// estimate is stable within its share of the absolute tolerance. Throws
// QuadratureError when the accumulated error estimate stays above the
// tolerance at the depth limit.
template <typename F>
double integrate(F&& f, double a, double b, std::span<const double> breakpoints,
                 QuadratureOptions opt = {}) {
    if (!(a < b)) return 0.0;
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breakpoints) {
        if (c > a && c < b) cuts.push_back(c);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    if (opt.max_panel_width > 0.0) {
        std::vector<double> refined;
        refined.reserve(cuts.size());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            refined.push_back(cuts[i]);
            const double width = cuts[i + 1] - cuts[i];
            const int pieces =
                std::min(8192, static_cast<int>(std::ceil(width / opt.max_panel_width)));
            for (int j = 1; j < pieces; ++j) {
                refined.push_back(cuts[i] + width * j / pieces);
            }
        }
        refined.push_back(cuts.back());
        cuts = std::move(refined);
    }

    const double panel_tol = opt.abs_tol / static_cast<double>(cuts.size() - 1);
    double total = 0.0;
    double err_acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (!(lo < hi)) continue;
        const double whole = detail::gl64_panel(f, lo, hi);
        total += detail::adapt(f, lo, hi, whole, panel_tol, 0, opt.max_depth, err_acc);
    }
    if (err_acc > 10.0 * opt.abs_tol) {
        throw QuadratureError("adaptive quadrature did not converge");
    }
    return total;
}

template <typename F>
double integrate(F&& f, double a, double b, QuadratureOptions opt = {}) {
    return integrate(f, a, b, std::span<const double>{}, opt);
}

// Closed interval carrying a function's effective support.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval hull(const Interval& o) const {
        return {std::min(lo, o.lo), std::max(hi, o.hi)};
    }
};

}  // namespace kernsel
