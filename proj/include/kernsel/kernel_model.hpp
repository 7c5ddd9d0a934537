#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kernsel/base_kernel.hpp"
#include "kernsel/basis.hpp"
#include "kernsel/errors.hpp"
#include "kernsel/quadrature.hpp"

namespace kernsel {

// One kernel k(x,y) of the selection family. Three variants:
//
//   Projection          k_S(x,y) = sum_i phi_i(x) phi_i(y)
//   Parzen              k_{K,h}(x,y) = K((x-y)/h) / h
//   WeightedProjection  k_w(x,y) = sum_i w_i phi_i(x) phi_i(y), w_i in [0,1]
//
// Basis kernels live on [0,1] and reject evaluation outside it; Parzen
// kernels live on the whole real line.
class KernelModel {
public:
    struct Projection {
        BasisSpec basis;
    };
    struct Parzen {
        BaseKernel base;
        double bandwidth;
    };
    struct WeightedProjection {
        BasisSpec basis;
        std::vector<double> weights;
    };

    using Variant = std::variant<Projection, Parzen, WeightedProjection>;

    static KernelModel projection(BasisSpec basis) {
        validate(basis);
        return KernelModel(Projection{std::move(basis)});
    }

    static KernelModel parzen(BaseKernel base, double bandwidth) {
        if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
            throw ConfigError("Parzen bandwidth must be finite and > 0");
        }
        return KernelModel(Parzen{base, bandwidth});
    }

    static KernelModel weighted_projection(BasisSpec basis, std::vector<double> weights) {
        validate(basis);
        if (static_cast<int>(weights.size()) != basis_size(basis)) {
            throw ConfigError("weight vector length must equal basis size");
        }
        for (double w : weights) {
            if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("weights must lie in [0,1]");
        }
        return KernelModel(WeightedProjection{std::move(basis), std::move(weights)});
    }

    // Paired-weight kernel on the Fourier system: weights expand to
    // (w0, tau_1, tau_1, ...).
    static KernelModel weighted_projection(const FourierPaired& f) {
        validate(f);
        return weighted_projection(BasisSpec{f}, expanded_weights(f));
    }

    const Variant& variant() const { return v_; }
    bool is_parzen() const { return std::holds_alternative<Parzen>(v_); }
    bool is_projection() const { return std::holds_alternative<Projection>(v_); }
    bool is_weighted() const { return std::holds_alternative<WeightedProjection>(v_); }

    const Parzen& as_parzen() const { return std::get<Parzen>(v_); }
    const Projection& as_projection() const { return std::get<Projection>(v_); }
    const WeightedProjection& as_weighted() const { return std::get<WeightedProjection>(v_); }

    // Basis kernels are defined on [0,1].
    bool unit_domain() const { return !is_parzen(); }

    const BasisSpec* basis() const {
        if (const auto* p = std::get_if<Projection>(&v_)) return &p->basis;
        if (const auto* w = std::get_if<WeightedProjection>(&v_)) return &w->basis;
        return nullptr;
    }

    void check_domain(double x) const {
        if (!std::isfinite(x)) throw DomainError("kernel evaluated at non-finite point");
        if (unit_domain() && (x < 0.0 || x > 1.0)) {
            throw DomainError("basis kernel evaluated outside [0,1]");
        }
    }

    std::string describe() const {
        if (const auto* p = std::get_if<Parzen>(&v_)) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "parzen a=%g h=%.12g", p->base.a(), p->bandwidth);
            return buf;
        }
        if (const auto* pr = std::get_if<Projection>(&v_)) return kernsel::describe(pr->basis);
        return "weighted " + kernsel::describe(as_weighted().basis);
    }

private:
    explicit KernelModel(Variant v) : v_(std::move(v)) {}

    Variant v_;
};

namespace detail {

inline double projection_eval(const BasisSpec& basis, const std::vector<double>* weights,
                              double x, double y, bool square_weights) {
    if (const auto* h = std::get_if<RegularHistogram>(&basis)) {
        if (histogram_bin(*h, x) != histogram_bin(*h, y)) return 0.0;
        const double d = static_cast<double>(h->dim);
        if (!weights) return d;
        double w = (*weights)[static_cast<std::size_t>(histogram_bin(*h, x))];
        if (square_weights) w *= w;
        return d * w;
    }
    const auto& f = std::get<FourierPaired>(basis);
    double sum = 0.0;
    for (int i = 0; i < f.p; ++i) {
        double w = weights ? (*weights)[static_cast<std::size_t>(i)] : 1.0;
        if (square_weights) w *= w;
        if (w == 0.0) continue;
        // grouping the phi product first keeps the sum bitwise symmetric
        sum += w * (basis_eval(f, i, x) * basis_eval(f, i, y));
    }
    return sum;
}

}  // namespace detail

// k(x,y).
inline double kernel_eval(const KernelModel& k, double x, double y) {
    k.check_domain(x);
    k.check_domain(y);
    if (k.is_parzen()) {
        const auto& p = k.as_parzen();
        return p.base((x - y) / p.bandwidth) / p.bandwidth;
    }
    if (k.is_projection()) {
        return detail::projection_eval(k.as_projection().basis, nullptr, x, y, false);
    }
    const auto& w = k.as_weighted();
    return detail::projection_eval(w.basis, &w.weights, x, y, false);
}

// chi_k(x) = k(x,x).
inline double chi_eval(const KernelModel& k, double x) {
    k.check_domain(x);
    if (k.is_parzen()) {
        const auto& p = k.as_parzen();
        return p.base.at_zero() / p.bandwidth;
    }
    if (k.is_projection()) {
        return detail::projection_eval(k.as_projection().basis, nullptr, x, x, false);
    }
    const auto& w = k.as_weighted();
    return detail::projection_eval(w.basis, &w.weights, x, x, false);
}

// A_k(x,y) = int k(x,z) k(z,y) dmu(z). Closed forms: projection kernels are
// idempotent (A = k); weighted kernels square their weights; Parzen kernels
// reduce to the base kernel's self-convolution.
inline double a_eval(const KernelModel& k, double x, double y) {
    k.check_domain(x);
    k.check_domain(y);
    if (k.is_parzen()) {
        const auto& p = k.as_parzen();
        return p.base.self_convolution((x - y) / p.bandwidth) / p.bandwidth;
    }
    if (k.is_projection()) {
        return detail::projection_eval(k.as_projection().basis, nullptr, x, y, false);
    }
    const auto& w = k.as_weighted();
    return detail::projection_eval(w.basis, &w.weights, x, y, true);
}

// Theta_k(x) = A_k(x,x). The Parzen value is (K*K)(0)/h, computed through the
// same self-convolution as a_eval so the diagonal identity holds bitwise; it
// equals |K|^2/h.
inline double theta_eval(const KernelModel& k, double x) {
    k.check_domain(x);
    if (k.is_parzen()) {
        const auto& p = k.as_parzen();
        return p.base.self_convolution(0.0) / p.bandwidth;
    }
    if (k.is_projection()) {
        return detail::projection_eval(k.as_projection().basis, nullptr, x, x, false);
    }
    const auto& w = k.as_weighted();
    return detail::projection_eval(w.basis, &w.weights, x, x, true);
}

namespace detail {

// chi and Theta of a weighted Fourier kernel are constant in x exactly when
// the cos/sin weights are paired; for weighted histograms, when all bin
// weights coincide. Returns sum_i g(w_i) phi_i(x)^2 when constant.
template <typename G>
inline std::optional<double> constant_weighted_diag(const BasisSpec& basis,
                                                    const std::vector<double>& weights,
                                                    G&& g) {
    if (const auto* h = std::get_if<RegularHistogram>(&basis)) {
        for (double w : weights) {
            if (w != weights[0]) return std::nullopt;
        }
        return static_cast<double>(h->dim) * g(weights[0]);
    }
    const auto& f = std::get<FourierPaired>(basis);
    double sum = g(weights[0]);
    for (int j = 1; j <= f.p / 2; ++j) {
        if (weights[static_cast<std::size_t>(2 * j - 1)] !=
            weights[static_cast<std::size_t>(2 * j)]) {
            return std::nullopt;
        }
        sum += 2.0 * g(weights[static_cast<std::size_t>(2 * j)]);
    }
    return sum;
}

}  // namespace detail

// The constant value of chi_k when chi_k does not depend on x (Parzen,
// projection kernels on either basis, paired-weight Fourier kernels).
inline std::optional<double> constant_chi(const KernelModel& k) {
    if (k.is_parzen()) {
        const auto& p = k.as_parzen();
        return p.base.at_zero() / p.bandwidth;
    }
    if (k.is_projection()) {
        // sum phi_i^2 is D for histograms and p for the Fourier system
        return static_cast<double>(basis_size(k.as_projection().basis));
    }
    const auto& w = k.as_weighted();
    return detail::constant_weighted_diag(w.basis, w.weights, [](double wi) { return wi; });
}

// The constant value of Theta_k when it exists (same cases as constant_chi).
inline std::optional<double> constant_theta(const KernelModel& k) {
    if (k.is_parzen()) {
        const auto& p = k.as_parzen();
        return p.base.self_convolution(0.0) / p.bandwidth;
    }
    if (k.is_projection()) {
        return static_cast<double>(basis_size(k.as_projection().basis));
    }
    const auto& w = k.as_weighted();
    return detail::constant_weighted_diag(w.basis, w.weights,
                                          [](double wi) { return wi * wi; });
}

// A_k(x,y) by numeric integration of z -> k(x,z) k(z,y); cross-check path for
// the closed forms above.
inline double a_eval_quadrature(const KernelModel& k, double x, double y,
                                QuadratureOptions opt = {}) {
    k.check_domain(x);
    k.check_domain(y);
    if (k.is_parzen()) {
        const auto& p = k.as_parzen();
        const double r = p.base.support_radius() * p.bandwidth;
        const double lo = std::min(x, y) - r;
        const double hi = std::max(x, y) + r;
        if (opt.max_panel_width == 0.0) opt.max_panel_width = 8.0 * p.bandwidth;
        return integrate([&](double z) { return kernel_eval(k, x, z) * kernel_eval(k, z, y); },
                         lo, hi, opt);
    }
    const auto cuts = basis_breakpoints(*k.basis());
    return integrate([&](double z) { return kernel_eval(k, x, z) * kernel_eval(k, z, y); },
                     0.0, 1.0, std::span<const double>(cuts), opt);
}

}  // namespace kernsel
