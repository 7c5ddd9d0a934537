#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kernsel/densities.hpp"
#include "kernsel/errors.hpp"
#include "kernsel/kernel_model.hpp"

namespace kernsel {

// Family-wide boundedness constant Gamma with the two suprema it must
// dominate: sup |k(x,y)| and sup_x Theta_k(x), both over the family.
// condition_holds records whether both are <= gamma * n.
struct GammaReport {
    double gamma = 1.0;
    bool condition_holds = false;
    double sup_kernel_bound = 0.0;
    double sup_theta_bound = 0.0;
};

// Smallest admissible concentration constant Upsilon for the family against a
// known density, with the named sub-bounds entering the maximum.
struct UpsilonReport {
    double upsilon_lower = 0.0;
    std::vector<std::pair<std::string, double>> components;
};

namespace detail {

inline void check_homogeneous(std::span<const KernelModel> family) {
    if (family.empty()) throw ConfigError("kernel family must be non-empty");
    const std::size_t first = family.front().variant().index();
    for (const auto& k : family) {
        if (k.variant().index() != first) {
            throw ConfigError("kernel family mixes variants; split it per variant");
        }
    }
}

}  // namespace detail

// Gamma for a homogeneous family of size |K| and sample size n:
//   projection:           1 v (max_S sup_x chi_S(x)) / n
//   Parzen:               1, admissible iff h >= |K|_inf |K|_1 / n throughout
//   weighted projection:  1 v (sup_x sum_i phi_i(x)^2) / n  (unweighted sum)
inline GammaReport gamma_bound(std::span<const KernelModel> family, int n) {
    detail::check_homogeneous(family);
    if (n < 1) throw ConfigError("sample size must be >= 1");
    GammaReport rep;

    if (family.front().is_parzen()) {
        rep.gamma = 1.0;
        bool ok = true;
        for (const auto& k : family) {
            const auto& p = k.as_parzen();
            const double sup_k = p.base.sup_norm() / p.bandwidth;
            const double sup_theta = p.base.l2_norm_sq() / p.bandwidth;
            rep.sup_kernel_bound = std::max(rep.sup_kernel_bound, sup_k);
            rep.sup_theta_bound = std::max(rep.sup_theta_bound, sup_theta);
            ok = ok && p.bandwidth >= p.base.sup_norm() * p.base.l1_norm() / n;
        }
        rep.condition_holds = ok;
        return rep;
    }

    // Both basis variants: sup_x sum phi_i^2 is the basis size, and by
    // Cauchy-Schwarz it also bounds |k| and Theta (weights are in [0,1]).
    double sup_phi = 0.0;
    for (const auto& k : family) {
        sup_phi = std::max(sup_phi, sup_sum_sq(*k.basis()));
    }
    rep.sup_kernel_bound = sup_phi;
    rep.sup_theta_bound = sup_phi;
    rep.gamma = std::max(1.0, sup_phi / n);
    rep.condition_holds = true;  // gamma is chosen to dominate both bounds
    return rep;
}

// Admissible lower bound for Upsilon (oracle mode; needs |s|_inf):
//   projection / weighted:  Gamma (1 + |s|_inf)
//   Parzen:                 max_K { K(0)/|K|^2  v  1 + 2 |s|_inf |K|_1^2 }
inline UpsilonReport upsilon_bound(std::span<const KernelModel> family,
                                   const KnownDensity& density, int n) {
    detail::check_homogeneous(family);
    const double s_inf = density.sup_norm();
    if (!std::isfinite(s_inf)) throw ConfigError("density with unbounded sup norm is unsupported");
    UpsilonReport rep;

    if (family.front().is_parzen()) {
        double k0_over_l2 = 0.0;
        double bernstein_term = 0.0;
        for (const auto& k : family) {
            const auto& base = k.as_parzen().base;
            k0_over_l2 = std::max(k0_over_l2, base.at_zero() / base.l2_norm_sq());
            const double l1 = base.l1_norm();
            bernstein_term = std::max(bernstein_term, 1.0 + 2.0 * s_inf * l1 * l1);
        }
        rep.upsilon_lower = std::max(k0_over_l2, bernstein_term);
        rep.components = {{"K0_over_l2norm_sq", k0_over_l2},
                          {"one_plus_2supnorm_l1sq", bernstein_term}};
        return rep;
    }

    const double gamma = gamma_bound(family, n).gamma;
    rep.upsilon_lower = gamma * (1.0 + s_inf);
    rep.components = {{"gamma", gamma}, {"one_plus_supnorm", 1.0 + s_inf}};
    return rep;
}

}  // namespace kernsel
