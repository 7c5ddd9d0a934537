#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "kernsel/criterion.hpp"
#include "kernsel/densities.hpp"
#include "kernsel/errors.hpp"
#include "kernsel/kernel_model.hpp"
#include "kernsel/mathfn.hpp"
#include "kernsel/oracle.hpp"
#include "kernsel/rng.hpp"

namespace kernsel {

enum class Scenario { parzen_kappa_sweep, histogram_kappa_sweep, bias_dominant };

// Reference bandwidth grid h = 1/(2i), i = 1..50 (CLI keyword: paper).
inline std::vector<double> reference_bandwidth_grid() {
    std::vector<double> h;
    h.reserve(50);
    for (int i = 1; i <= 50; ++i) h.push_back(1.0 / (2.0 * i));
    return h;
}

// Base-kernel parameters of the reference study.
inline std::vector<double> reference_a_values() { return {0.0, 1.5, 2.0, 3.0}; }

// 41 equispaced kappa values on [-1, 1].
inline std::vector<double> default_kappa_grid() {
    std::vector<double> k;
    k.reserve(41);
    for (int i = 0; i <= 40; ++i) k.push_back(-1.0 + 0.05 * i);
    return k;
}

// Histogram dimensions {1, ..., floor(n^beta)} of the bias-dominant setup.
inline int bias_dominant_max_dim(int n, double beta) {
    return static_cast<int>(std::floor(std::pow(static_cast<double>(n), beta)));
}

struct ExperimentConfig {
    Scenario scenario = Scenario::parzen_kappa_sweep;
    int n = 100;
    KnownDensity density = KnownDensity::std_gaussian();
    double parzen_a = 0.0;
    std::vector<double> bandwidth_grid = reference_bandwidth_grid();
    int dimension_max = 100;  // histogram sweep uses D in {1..dimension_max}
    double beta = 0.3;        // bias-dominant dimension exponent, must be < 1/3
    std::vector<double> kappa_grid = default_kappa_grid();
    int replications = 50;
    std::uint64_t master_seed = 1;
};

struct SweepRow {
    double kappa = 0.0;
    int replication = 0;
    double selected_param = 0.0;  // bandwidth h or dimension D of k_hat
    double complexity = 0.0;      // P Theta of k_hat
    double risk = 0.0;            // |s_hat_{k_hat} - s|^2
    double oracle_risk = 0.0;     // min_k |s_hat_k - s|^2 for this replication
};

struct KappaSummary {
    double kappa = 0.0;
    double median_complexity = 0.0;
    double median_risk_ratio = 0.0;
};

struct SweepResult {
    std::string scenario;
    double family_param = 0.0;  // a for Parzen sweeps, 0 otherwise
    std::vector<double> kappa_grid;
    int replications = 0;
    std::uint64_t master_seed = 0;
    std::vector<SweepRow> rows;  // kappa-major, replication-minor
    std::vector<KappaSummary> summaries;
};

namespace detail {

inline double risk_ratio(double risk, double oracle_risk) {
    if (oracle_risk > 0.0) return risk / oracle_risk;
    return risk == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
}

// Shared sweep core. Per replication the sample and the per-kernel contrasts
// and risks are computed once; each kappa then only re-prices the penalties
//   pen_kappa(k) = (2 chi_bar - theta_bar)/n + kappa theta_bar/n
// and re-runs the argmin.
inline SweepResult run_kappa_sweep(const std::vector<KernelModel>& family,
                                   const std::vector<double>& params,
                                   std::vector<double> kappa_grid,
                                   const ExperimentConfig& cfg, std::string scenario,
                                   double family_param) {
    if (family.empty()) throw ConfigError("sweep family is empty");
    if (kappa_grid.empty()) throw ConfigError("kappa grid is empty");
    if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
    if (cfg.n < 1) throw ConfigError("sample size must be >= 1");
    std::sort(kappa_grid.begin(), kappa_grid.end());  // rows and summaries ascend in kappa

    const std::size_t m = family.size();
    std::vector<double> chi_bar(m), theta_bar(m);
    std::vector<SmoothedDensity> smoothed;
    smoothed.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto chi = constant_chi(family[i]);
        const auto theta = constant_theta(family[i]);
        if (!chi || !theta) {
            throw ConfigError("sweep kernels need constant chi/Theta: " +
                              family[i].describe());
        }
        chi_bar[i] = *chi;
        theta_bar[i] = *theta;
        smoothed.emplace_back(family[i], cfg.density);
    }

    const double n = static_cast<double>(cfg.n);
    SweepResult out;
    out.scenario = std::move(scenario);
    out.family_param = family_param;
    out.kappa_grid = kappa_grid;
    out.replications = cfg.replications;
    out.master_seed = cfg.master_seed;
    out.rows.resize(kappa_grid.size() * static_cast<std::size_t>(cfg.replications));

    std::vector<double> contrasts(m), risks(m), penalties(m), chi_means(m);
    for (int rep = 0; rep < cfg.replications; ++rep) {
        const std::uint64_t seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(rep));
        Sample sample(cfg.density.sample_n(seed, cfg.n));

        double oracle_risk = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            contrasts[i] = empirical_contrast(family[i], sample);
            chi_means[i] = empirical_chi_mean(family[i], sample);
            risks[i] = true_risk_expansion(family[i], sample, smoothed[i], cfg.density);
            oracle_risk = std::min(oracle_risk, risks[i]);
        }

        for (std::size_t ki = 0; ki < kappa_grid.size(); ++ki) {
            const double kappa = kappa_grid[ki];
            for (std::size_t i = 0; i < m; ++i) {
                penalties[i] = (2.0 * chi_bar[i] - theta_bar[i]) / n + kappa * theta_bar[i] / n;
            }
            const SelectionResult sel =
                select_from_parts(contrasts, penalties, theta_bar, chi_means);
            const auto idx = static_cast<std::size_t>(sel.selected_index);
            SweepRow row;
            row.kappa = kappa;
            row.replication = rep;
            row.selected_param = params[idx];
            row.complexity = theta_bar[idx];
            row.risk = risks[idx];
            row.oracle_risk = oracle_risk;
            out.rows[ki * static_cast<std::size_t>(cfg.replications) +
                     static_cast<std::size_t>(rep)] = row;
        }
    }

    out.summaries.reserve(kappa_grid.size());
    for (std::size_t ki = 0; ki < kappa_grid.size(); ++ki) {
        std::vector<double> comp, ratio;
        comp.reserve(static_cast<std::size_t>(cfg.replications));
        ratio.reserve(static_cast<std::size_t>(cfg.replications));
        for (int rep = 0; rep < cfg.replications; ++rep) {
            const SweepRow& r = out.rows[ki * static_cast<std::size_t>(cfg.replications) +
                                         static_cast<std::size_t>(rep)];
            comp.push_back(r.complexity);
            ratio.push_back(risk_ratio(r.risk, r.oracle_risk));
        }
        out.summaries.push_back({kappa_grid[ki], median(comp), median(ratio)});
    }
    return out;
}

}  // namespace detail

// Parzen bandwidth-selection sweep: family k_{K_a,h} over the bandwidth grid,
// penalties (2 K_a(0) - |K_a|^2)/(nh) + kappa |K_a|^2/(nh).
inline SweepResult run_parzen_sweep(const ExperimentConfig& cfg) {
    if (cfg.scenario != Scenario::parzen_kappa_sweep) {
        throw ConfigError("config scenario is not the Parzen kappa sweep");
    }
    if (cfg.bandwidth_grid.empty()) throw ConfigError("bandwidth grid is empty");
    const BaseKernel base(cfg.parzen_a);
    std::vector<KernelModel> family;
    family.reserve(cfg.bandwidth_grid.size());
    for (double h : cfg.bandwidth_grid) family.push_back(KernelModel::parzen(base, h));
    return detail::run_kappa_sweep(family, cfg.bandwidth_grid, cfg.kappa_grid, cfg,
                                   "parzen", cfg.parzen_a);
}

// Histogram dimension-selection sweep: family D in {1..dimension_max} on a
// density supported by [0,1]; pen = (1 + kappa) D/n since the minimal penalty
// of a regular histogram is D/n.
inline SweepResult run_histogram_sweep(const ExperimentConfig& cfg) {
    if (cfg.scenario != Scenario::histogram_kappa_sweep) {
        throw ConfigError("config scenario is not the histogram kappa sweep");
    }
    if (!cfg.density.unit_domain()) {
        throw ConfigError("histogram sweep needs a density supported on [0,1]");
    }
    if (cfg.dimension_max < 1) throw ConfigError("dimension grid is empty");
    std::vector<KernelModel> family;
    std::vector<double> dims;
    family.reserve(static_cast<std::size_t>(cfg.dimension_max));
    for (int d = 1; d <= cfg.dimension_max; ++d) {
        family.push_back(KernelModel::projection(RegularHistogram{d}));
        dims.push_back(static_cast<double>(d));
    }
    return detail::run_kappa_sweep(family, dims, cfg.kappa_grid, cfg, "histogram", 0.0);
}

// Bias-dominant regime: s(x) = 2x, histogram dimensions {1..floor(n^beta)}
// with beta < 1/3, kappa fixed to {-0.5, 0, 1}. Every penalty level should
// select near-oracle estimators here.
inline SweepResult run_bias_dominant(const ExperimentConfig& cfg) {
    if (cfg.scenario != Scenario::bias_dominant) {
        throw ConfigError("config scenario is not the bias-dominant run");
    }
    if (!(cfg.beta < 1.0 / 3.0)) {
        throw ConfigError("bias-dominant regime requires beta < 1/3");
    }
    if (cfg.density.tag() != KnownDensity::Tag::triangular2x) {
        throw ConfigError("bias-dominant run is defined for the triangular density");
    }
    const int dmax = bias_dominant_max_dim(cfg.n, cfg.beta);
    if (dmax < 1) throw ConfigError("bias-dominant dimension grid is empty");
    std::vector<KernelModel> family;
    std::vector<double> dims;
    for (int d = 1; d <= dmax; ++d) {
        family.push_back(KernelModel::projection(RegularHistogram{d}));
        dims.push_back(static_cast<double>(d));
    }
    const std::vector<double> kappas = {-0.5, 0.0, 1.0};
    return detail::run_kappa_sweep(family, dims, kappas, cfg, "bias-dominant", cfg.beta);
}

// A phase transition is detected when the median-complexity curve (a) is
// sharp: its largest adjacent-kappa jump exceeds 25% of the complexity range,
// and (b) is located at zero: the interval where it crosses the midpoint of
// its range straddles kappa = 0.
//
// Both parts are evaluated on the kappa grid coarsened to a spacing of at
// least 0.25: at finer spacing the Monte-Carlo noise of the medians smears
// the cliff over neighbouring steps (at the minimal penalty itself the
// criterion is flat and the selection is noise driven). The midpoint crossing
// locates the transition; the position of the single largest jump is not
// stable under replication noise when the transition is gradual.
struct PhaseTransition {
    bool detected = false;
    double kappa_left = 0.0;   // crossing interval of the half-range level
    double kappa_right = 0.0;
    double jump = 0.0;         // largest adjacent jump on the coarse grid
    double complexity_range = 0.0;
};

inline PhaseTransition detect_phase_transition(const SweepResult& result) {
    PhaseTransition pt;
    const auto& s = result.summaries;
    if (s.size() < 2) return pt;

    constexpr double min_spacing = 0.25 - 1e-9;
    std::vector<KappaSummary> coarse;
    coarse.push_back(s.front());
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i].kappa - coarse.back().kappa >= min_spacing) coarse.push_back(s[i]);
    }
    coarse.push_back(s.back());

    double cmin = coarse.front().median_complexity;
    double cmax = cmin;
    for (const auto& row : coarse) {
        cmin = std::min(cmin, row.median_complexity);
        cmax = std::max(cmax, row.median_complexity);
    }
    pt.complexity_range = cmax - cmin;
    for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
        pt.jump = std::max(pt.jump, std::abs(coarse[i + 1].median_complexity -
                                             coarse[i].median_complexity));
    }

    // first crossing of the half-range level (complexity falls with kappa)
    const double level = cmin + 0.5 * pt.complexity_range;
    pt.kappa_left = coarse.front().kappa;
    pt.kappa_right = coarse.back().kappa;
    for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
        if (coarse[i].median_complexity >= level &&
            coarse[i + 1].median_complexity < level) {
            pt.kappa_left = coarse[i].kappa;
            pt.kappa_right = coarse[i + 1].kappa;
            break;
        }
    }

    pt.detected = pt.complexity_range > 0.0 && pt.jump > 0.25 * pt.complexity_range &&
                  pt.kappa_left <= 0.0 && pt.kappa_right >= 0.0;
    return pt;
}

}  // namespace kernsel
