#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "kernsel/criterion.hpp"
#include "kernsel/densities.hpp"
#include "kernsel/errors.hpp"
#include "kernsel/kernel_model.hpp"
#include "kernsel/mathfn.hpp"
#include "kernsel/quadrature.hpp"
#include "kernsel/sample.hpp"

namespace kernsel {

namespace detail {

inline void check_oracle_pair(const KernelModel& k, const KnownDensity& s) {
    if (k.unit_domain() && !s.unit_domain()) {
        throw ConfigError("density on the real line cannot drive a kernel on [0,1]");
    }
}

// Quadrature options matched to the kernel's fine scale: integrands built
// from a Parzen kernel vary at the bandwidth, Fourier ones at the top
// frequency. Histogram discontinuities are handled by breakpoints instead.
inline QuadratureOptions quad_options_for(const KernelModel& k, double abs_tol = 1e-8) {
    QuadratureOptions opt;
    opt.abs_tol = abs_tol;
    if (k.is_parzen()) {
        opt.max_panel_width = 8.0 * k.as_parzen().bandwidth;
    } else if (const auto* f = std::get_if<FourierPaired>(k.basis())) {
        opt.max_panel_width = 8.0 / std::max(1, f->p);
    }
    return opt;
}

// Moments c_i = int phi_i s dmu of the basis against the density. The unit
// densities admit closed forms against both systems:
//   histogram: c_b = sqrt(D) * mass of s on bin b
//   Fourier + uniform: (1, 0, 0, ...)
//   Fourier + 2x: cos moments vanish, sin moments are -sqrt(2)/(pi j)
inline std::vector<double> basis_moments(const BasisSpec& basis, const KnownDensity& s) {
    std::vector<double> c(static_cast<std::size_t>(basis_size(basis)), 0.0);
    if (const auto* h = std::get_if<RegularHistogram>(&basis)) {
        const double rd = std::sqrt(static_cast<double>(h->dim));
        for (int b = 0; b < h->dim; ++b) {
            const double lo = static_cast<double>(b) / h->dim;
            const double hi = static_cast<double>(b + 1) / h->dim;
            const double mass = s.tag() == KnownDensity::Tag::triangular2x
                                    ? hi * hi - lo * lo
                                    : hi - lo;
            c[static_cast<std::size_t>(b)] = rd * mass;
        }
        return c;
    }
    const auto& f = std::get<FourierPaired>(basis);
    c[0] = 1.0;
    if (s.tag() == KnownDensity::Tag::triangular2x) {
        for (int j = 1; j <= f.p / 2; ++j) {
            c[static_cast<std::size_t>(2 * j)] = -std::sqrt(2.0) / (kPi * j);
        }
    }
    return c;
}

}  // namespace detail

// The smoothed density s_k(x) = int k(y,x) s(y) dmu(y) = E[k(X,x)] for one
// (kernel, density) pair, with its L2 norm and mean under s precomputed.
//
// Closed forms: basis kernels reduce to weighted basis moments; a Parzen K_a
// kernel against the standard Gaussian gives the two-component mixture
// s_k = [N(ah, 1+h^2) + N(-ah, 1+h^2)] / 2. Parzen kernels against the unit
// densities fall back to quadrature.
class SmoothedDensity {
public:
    SmoothedDensity(const KernelModel& k, const KnownDensity& s) : kernel_(k), density_(s) {
        detail::check_oracle_pair(k, s);
        if (!k.is_parzen()) {
            const auto& basis = *k.basis();
            moments_ = detail::basis_moments(basis, s);
            coef_ = moments_;
            if (k.is_weighted()) {
                const auto& w = k.as_weighted().weights;
                for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] *= w[i];
            }
            l2_sq_ = 0.0;
            mean_ = 0.0;
            for (std::size_t i = 0; i < coef_.size(); ++i) {
                l2_sq_ += coef_[i] * coef_[i];
                mean_ += coef_[i] * moments_[i];
            }
            return;
        }
        const auto& p = k.as_parzen();
        if (s.tag() == KnownDensity::Tag::std_gaussian) {
            gaussian_closed_form_ = true;
            const double h = p.bandwidth;
            const double a = p.base.a();
            const double v = 1.0 + h * h;
            // ||s_k||^2 = (1 + exp(-a^2 h^2 / v)) / (2 sqrt(4 pi v))
            l2_sq_ = (1.0 + std::exp(-a * a * h * h / v)) / (2.0 * std::sqrt(4.0 * kPi * v));
            mean_ = normal_pdf(a * h, 0.0, 2.0 + h * h);
        } else {
            gaussian_closed_form_ = false;
            const auto opt = detail::quad_options_for(k, 1e-10);
            l2_sq_ = integrate(
                [&](double y) {
                    return density_(y) * integrate_kernel_row(y, /*self_composed=*/true);
                },
                0.0, 1.0, opt);
            mean_ = integrate(
                [&](double y) {
                    return density_(y) * integrate_kernel_row(y, /*self_composed=*/false);
                },
                0.0, 1.0, opt);
        }
    }

    double operator()(double x) const {
        if (!kernel_.is_parzen()) {
            kernel_.check_domain(x);
            const auto& basis = *kernel_.basis();
            if (const auto* h = std::get_if<RegularHistogram>(&basis)) {
                const int b = histogram_bin(*h, x);
                return coef_[static_cast<std::size_t>(b)] * std::sqrt(static_cast<double>(h->dim));
            }
            double sum = 0.0;
            for (std::size_t i = 0; i < coef_.size(); ++i) {
                if (coef_[i] != 0.0) {
                    sum += coef_[i] * basis_eval(basis, static_cast<int>(i), x);
                }
            }
            return sum;
        }
        const auto& p = kernel_.as_parzen();
        if (gaussian_closed_form_) {
            const double h = p.bandwidth;
            const double a = p.base.a();
            const double v = 1.0 + h * h;
            return 0.5 * (normal_pdf(x, a * h, v) + normal_pdf(x, -a * h, v));
        }
        return integrate([&](double y) { return kernel_eval(kernel_, y, x) * density_(y); },
                         0.0, 1.0, detail::quad_options_for(kernel_, 1e-10));
    }

    // ||s_k||^2.
    double l2_norm_sq() const { return l2_sq_; }

    // P s_k = int s_k s dmu, which also equals E[k(X,Y)].
    double mean_under_density() const { return mean_; }

    Interval support() const {
        if (!kernel_.is_parzen()) return {0.0, 1.0};
        const auto& p = kernel_.as_parzen();
        const double r = p.base.support_radius() * p.bandwidth;
        const Interval s = density_.support();
        return {s.lo - r, s.hi + r};
    }

    const KernelModel& kernel() const { return kernel_; }
    const KnownDensity& density() const { return density_; }

private:
    // int k(y,.) k(.,x)-type rows for the quadrature constructor path:
    // self_composed integrates A_k(y, y'), plain integrates k(y, y').
    double integrate_kernel_row(double y, bool self_composed) const {
        return integrate(
            [&](double yp) {
                const double val = self_composed ? a_eval(kernel_, y, yp)
                                                 : kernel_eval(kernel_, y, yp);
                return val * density_(yp);
            },
            0.0, 1.0, detail::quad_options_for(kernel_, 1e-11));
    }

    KernelModel kernel_;
    KnownDensity density_;
    std::vector<double> moments_;  // c_i (basis kernels only)
    std::vector<double> coef_;     // w_i c_i
    bool gaussian_closed_form_ = false;
    double l2_sq_ = 0.0;
    double mean_ = 0.0;
};

inline double smoothed_density(const KernelModel& k, const KnownDensity& s, double x) {
    return SmoothedDensity(k, s)(x);
}

// F_{A,k}(x) = E[A_k(X,x)] = int A_k(x,z) s(z) dmu(z). For projection kernels
// this is s_k itself; weighted kernels square their weights; Parzen + Gaussian
// has the analytic three-component mixture.
class SmoothedAk {
public:
    SmoothedAk(const KernelModel& k, const KnownDensity& s) : kernel_(k), density_(s) {
        detail::check_oracle_pair(k, s);
        if (!k.is_parzen()) {
            moments_ = detail::basis_moments(*k.basis(), s);
            coef_ = moments_;
            if (k.is_weighted()) {
                const auto& w = k.as_weighted().weights;
                for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] *= w[i] * w[i];
            }
        } else {
            gaussian_closed_form_ = s.tag() == KnownDensity::Tag::std_gaussian;
        }
    }

    double operator()(double x) const {
        if (!kernel_.is_parzen()) {
            kernel_.check_domain(x);
            const auto& basis = *kernel_.basis();
            double sum = 0.0;
            for (std::size_t i = 0; i < coef_.size(); ++i) {
                if (coef_[i] != 0.0) {
                    sum += coef_[i] * basis_eval(basis, static_cast<int>(i), x);
                }
            }
            return sum;
        }
        const auto& p = kernel_.as_parzen();
        if (gaussian_closed_form_) {
            const double h = p.bandwidth;
            const double a = p.base.a();
            const double v = 1.0 + 2.0 * h * h;
            return 0.25 * (normal_pdf(x, -2.0 * a * h, v) + 2.0 * normal_pdf(x, 0.0, v) +
                           normal_pdf(x, 2.0 * a * h, v));
        }
        return integrate([&](double z) { return a_eval(kernel_, x, z) * density_(z); }, 0.0,
                         1.0, detail::quad_options_for(kernel_, 1e-10));
    }

private:
    KernelModel kernel_;
    KnownDensity density_;
    std::vector<double> moments_;
    std::vector<double> coef_;
    bool gaussian_closed_form_ = false;
};

// E[A_k(X,Y)] by nested quadrature, independent of the ||s_k||^2 identity it
// equals; kept as a cross-check path.
inline double expected_a_quadrature(const KernelModel& k, const KnownDensity& s) {
    detail::check_oracle_pair(k, s);
    const Interval dom = s.support();
    const auto cuts = k.is_parzen() ? std::vector<double>{} : basis_breakpoints(*k.basis());
    const std::span<const double> cut_span(cuts);
    auto inner = [&](double x) {
        return integrate([&](double y) { return a_eval(k, x, y) * s(y); }, dom.lo, dom.hi,
                         cut_span, detail::quad_options_for(k, 1e-11));
    };
    return integrate([&](double x) { return inner(x) * s(x); }, dom.lo, dom.hi, cut_span,
                     detail::quad_options_for(k, 1e-9));
}

namespace detail {

inline std::vector<double> kernel_breakpoints(const KernelModel& k) {
    if (k.is_parzen()) return {};
    return basis_breakpoints(*k.basis());
}

}  // namespace detail

// Bias |s - s_k|^2 by quadrature; regular histograms against s(x) = 2x admit
// the exact value 1/(3 D^2) (each bin contributes width^3 / 3).
inline double bias(const KernelModel& k, const KnownDensity& s) {
    detail::check_oracle_pair(k, s);
    if (k.is_projection() && s.tag() == KnownDensity::Tag::triangular2x) {
        if (const auto* h = std::get_if<RegularHistogram>(k.basis())) {
            const double d = static_cast<double>(h->dim);
            return 1.0 / (3.0 * d * d);
        }
    }
    const SmoothedDensity sk(k, s);
    const Interval dom = s.support().hull(sk.support());
    const auto cuts = detail::kernel_breakpoints(k);
    return integrate(
        [&](double x) {
            const double d = s(x) - sk(x);
            return d * d;
        },
        dom.lo, dom.hi, std::span<const double>(cuts), detail::quad_options_for(k));
}

// P Theta_k = int Theta_k s dmu: the constant where Theta is constant,
// otherwise quadrature. Divide by n for the variance term.
inline double variance_functional(const KernelModel& k, const KnownDensity& s) {
    detail::check_oracle_pair(k, s);
    if (auto t = constant_theta(k)) return *t;
    const Interval dom = s.support();
    const auto cuts = detail::kernel_breakpoints(k);
    return integrate([&](double x) { return theta_eval(k, x) * s(x); }, dom.lo, dom.hi,
                     std::span<const double>(cuts), detail::quad_options_for(k));
}

namespace detail {

inline Interval estimate_support(const KernelModel& k, const Sample& sample) {
    if (!k.is_parzen()) return {0.0, 1.0};
    const auto& p = k.as_parzen();
    const double r = p.base.support_radius() * p.bandwidth;
    const auto [lo, hi] = std::minmax_element(sample.values.begin(), sample.values.end());
    return {*lo - r, *hi + r};
}

}  // namespace detail

// |s_hat_k - s|^2 by quadrature.
inline double true_risk(const KernelModel& k, const Sample& sample, const KnownDensity& s) {
    detail::check_oracle_pair(k, s);
    const Interval dom = s.support().hull(detail::estimate_support(k, sample));
    const auto cuts = detail::kernel_breakpoints(k);
    return integrate(
        [&](double x) {
            const double d = estimate_at(k, sample, x) - s(x);
            return d * d;
        },
        dom.lo, dom.hi, std::span<const double>(cuts), detail::quad_options_for(k));
}

// |s_hat_k - s|^2 through the exact algebraic expansion
//   |s_hat|^2 - 2 P_n s_k + |s|^2
// with |s_hat|^2 = (1/n^2) sum_{i,j} A_k(X_i,X_j). No quadrature over the
// estimate, so it stays cheap for sharp bandwidths; the replication sweeps
// use this route and the tests pin it against the quadrature one.
inline double true_risk_expansion(const KernelModel& k, const Sample& sample,
                                  const SmoothedDensity& sk, const KnownDensity& s) {
    const auto& x = sample.values;
    const std::size_t n = x.size();
    double diag = 0.0, upper = 0.0, sk_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        diag += a_eval(k, x[i], x[i]);
        sk_sum += sk(x[i]);
        for (std::size_t j = i + 1; j < n; ++j) upper += a_eval(k, x[i], x[j]);
    }
    const double nn = static_cast<double>(n);
    return (diag + 2.0 * upper) / (nn * nn) - 2.0 * sk_sum / nn + s.l2_norm_sq();
}

inline double true_risk_expansion(const KernelModel& k, const Sample& sample,
                                  const KnownDensity& s) {
    return true_risk_expansion(k, sample, SmoothedDensity(k, s), s);
}

// The three pieces of |s_hat - s|^2 = |s_hat - s_k|^2 + |s - s_k|^2 + cross,
// each computed by its own quadrature (the cross term is not derived from the
// other two, so the identity stays a real check).
struct RiskDecomposition {
    double centered = 0.0;  // |s_hat_k - s_k|^2
    double bias = 0.0;      // |s - s_k|^2
    double cross = 0.0;     // 2 <s_hat_k - s_k, s_k - s>
};

inline RiskDecomposition risk_decomposition(const KernelModel& k, const Sample& sample,
                                            const KnownDensity& s) {
    const SmoothedDensity sk(k, s);
    const Interval dom =
        s.support().hull(sk.support()).hull(detail::estimate_support(k, sample));
    const auto cuts = detail::kernel_breakpoints(k);
    const std::span<const double> cut_span(cuts);
    const auto opt = detail::quad_options_for(k);
    RiskDecomposition out;
    out.centered = integrate(
        [&](double x) {
            const double d = estimate_at(k, sample, x) - sk(x);
            return d * d;
        },
        dom.lo, dom.hi, cut_span, opt);
    out.bias = bias(k, s);
    out.cross = integrate(
        [&](double x) {
            return 2.0 * (estimate_at(k, sample, x) - sk(x)) * (sk(x) - s(x));
        },
        dom.lo, dom.hi, cut_span, opt);
    return out;
}

// pen_id(k) = 2 (P_n - P)(s_hat_k) = 2 [ (1/n^2) sum_{i,j} k(X_i,X_j)
//                                        - (1/n) sum_i s_k(X_i) ].
inline double ideal_penalty(const KernelModel& k, const Sample& sample,
                            const KnownDensity& s) {
    const SmoothedDensity sk(k, s);
    const auto& x = sample.values;
    const std::size_t n = x.size();
    double diag = 0.0, upper = 0.0, sk_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        diag += kernel_eval(k, x[i], x[i]);
        sk_sum += sk(x[i]);
        for (std::size_t j = i + 1; j < n; ++j) upper += kernel_eval(k, x[i], x[j]);
    }
    const double nn = static_cast<double>(n);
    return 2.0 * ((diag + 2.0 * upper) / (nn * nn) - sk_sum / nn);
}

// The four-term expansion of the ideal penalty,
//   pen_id = 2 [ (P chi - P s_k)/n + (P_n - P) chi / n + U_k / n^2
//                + (1 - 2/n) (P_n - P) s_k ],
// with U_k the centered sum over ordered pairs i != j of
// k(X_i,X_j) - s_k(X_i) - s_k(X_j) + E k(X,Y). Assembled from independently
// computed components so it can be tested against ideal_penalty.
struct IdealPenaltyExpansion {
    double p_chi = 0.0;
    double pn_chi = 0.0;
    double p_sk = 0.0;   // P s_k = E k(X,Y)
    double pn_sk = 0.0;  // P_n s_k
    double u_k = 0.0;
    double value = 0.0;
};

inline IdealPenaltyExpansion ideal_penalty_expansion(const KernelModel& k,
                                                     const Sample& sample,
                                                     const KnownDensity& s) {
    const SmoothedDensity sk(k, s);
    IdealPenaltyExpansion out;
    const auto& x = sample.values;
    const std::size_t n = x.size();
    const double nn = static_cast<double>(n);

    if (auto c = constant_chi(k)) {
        out.p_chi = *c;
    } else {
        const Interval dom = s.support();
        const auto cuts = detail::kernel_breakpoints(k);
        out.p_chi = integrate([&](double t) { return chi_eval(k, t) * s(t); }, dom.lo,
                              dom.hi, std::span<const double>(cuts),
                              detail::quad_options_for(k));
    }
    out.pn_chi = empirical_chi_mean(k, sample);
    out.p_sk = sk.mean_under_density();

    std::vector<double> sk_at(n);
    for (std::size_t i = 0; i < n; ++i) sk_at[i] = sk(x[i]);
    out.pn_sk = 0.0;
    for (double v : sk_at) out.pn_sk += v;
    out.pn_sk /= nn;

    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            u += 2.0 * (kernel_eval(k, x[i], x[j]) - sk_at[i] - sk_at[j] + out.p_sk);
        }
    }
    out.u_k = u;

    out.value = 2.0 * ((out.p_chi - out.p_sk) / nn + (out.pn_chi - out.p_chi) / nn +
                       out.u_k / (nn * nn) + (1.0 - 2.0 / nn) * (out.pn_sk - out.p_sk));
    return out;
}

// Exact split of |s_k - s_hat_k|^2 into (1/n) P_n zeta_k + (1/n^2) U_{A,k},
// where zeta_k(x) = Theta_k(x) - 2 F_{A,k}(x) + |s_k|^2 and U_{A,k} is the
// degenerate U-statistic built from A_k. The left-hand side is integrated
// numerically and the two right-hand terms come from sums, so the residual
// measures a real identity, not a tautology.
struct UStatDecomposition {
    double lhs = 0.0;
    double pn_zeta_over_n = 0.0;
    double u_over_n2 = 0.0;
    double residual = 0.0;
};

inline UStatDecomposition ustat_decomposition(const KernelModel& k, const Sample& sample,
                                              const KnownDensity& s) {
    if (sample.n() < 2) throw DataError("U-statistic decomposition needs n >= 2");
    const SmoothedDensity sk(k, s);
    const SmoothedAk fa(k, s);
    const double e_a = sk.l2_norm_sq();  // E[A(X,Y)] = P F_{A,k} = |s_k|^2
    const auto& x = sample.values;
    const std::size_t n = x.size();
    const double nn = static_cast<double>(n);

    UStatDecomposition out;
    const Interval dom = sk.support().hull(detail::estimate_support(k, sample));
    const auto cuts = detail::kernel_breakpoints(k);
    out.lhs = integrate(
        [&](double t) {
            const double d = sk(t) - estimate_at(k, sample, t);
            return d * d;
        },
        dom.lo, dom.hi, std::span<const double>(cuts), detail::quad_options_for(k));

    std::vector<double> fa_at(n);
    double zeta_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fa_at[i] = fa(x[i]);
        zeta_sum += theta_eval(k, x[i]) - 2.0 * fa_at[i] + sk.l2_norm_sq();
    }
    out.pn_zeta_over_n = zeta_sum / (nn * nn);

    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            u += 2.0 * (a_eval(k, x[i], x[j]) - fa_at[i] - fa_at[j] + e_a);
        }
    }
    out.u_over_n2 = u / (nn * nn);
    out.residual = out.lhs - (out.pn_zeta_over_n + out.u_over_n2);
    return out;
}

// Bernstein-type deviation bound sqrt(2 var u / n) + sup u / (3 n).
inline double bernstein_bound(double var_pf2, double sup_norm, int n, double u) {
    if (!(var_pf2 >= 0.0) || !(sup_norm >= 0.0) || n < 1 || !(u > 0.0)) {
        throw ConfigError("bernstein_bound needs var >= 0, sup >= 0, n >= 1, u > 0");
    }
    return std::sqrt(2.0 * var_pf2 * u / n) + sup_norm * u / (3.0 * n);
}

// Full oracle diagnostics for one kernel against a known density.
struct OracleReport {
    double true_risk = 0.0;
    double bias = 0.0;
    double variance_term = 0.0;  // P Theta_k / n
    double ideal_penalty = 0.0;
    double ustat_residual = 0.0;
    double cross_term = 0.0;
};

inline OracleReport oracle_report(const KernelModel& k, const Sample& sample,
                                  const KnownDensity& s) {
    OracleReport rep;
    rep.true_risk = true_risk(k, sample, s);
    rep.bias = bias(k, s);
    rep.variance_term = variance_functional(k, s) / sample.n();
    rep.ideal_penalty = ideal_penalty(k, sample, s);
    rep.ustat_residual = ustat_decomposition(k, sample, s).residual;
    rep.cross_term = risk_decomposition(k, sample, s).cross;
    return rep;
}

}  // namespace kernsel
