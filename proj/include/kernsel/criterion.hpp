#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kernsel/errors.hpp"
#include "kernsel/kernel_model.hpp"
#include "kernsel/sample.hpp"

namespace kernsel {

// Which penalty pen(k) enters the criterion C(k) = P_n gamma(s_hat_k) + pen(k).
//
//   optimal_theoretical   2 chi_bar / n          (needs constant chi)
//   optimal_empirical     2 P_n chi_k / n
//   minimal               (2 chi_bar - theta_bar) / n
//   minimal_plus_kappa    minimal + kappa * theta_bar / n
//   explicit_table        caller-supplied value per kernel
struct PenaltyRule {
    enum class Kind {
        optimal_theoretical,
        optimal_empirical,
        minimal,
        minimal_plus_kappa,
        explicit_table,
    };

    Kind kind = Kind::optimal_theoretical;
    double kappa = 0.0;
    std::vector<double> table;

    static PenaltyRule optimal_theoretical() { return {Kind::optimal_theoretical, 0.0, {}}; }
    static PenaltyRule optimal_empirical() { return {Kind::optimal_empirical, 0.0, {}}; }
    static PenaltyRule minimal() { return {Kind::minimal, 0.0, {}}; }
    static PenaltyRule minimal_plus_kappa(double kappa) {
        return {Kind::minimal_plus_kappa, kappa, {}};
    }
    static PenaltyRule explicit_table(std::vector<double> values) {
        return {Kind::explicit_table, 0.0, std::move(values)};
    }
    static PenaltyRule zero_table(std::size_t family_size) {
        return explicit_table(std::vector<double>(family_size, 0.0));
    }
};

struct SelectionRow {
    double contrast = 0.0;
    double penalty = 0.0;
    double criterion = 0.0;
    double complexity_ptheta = 0.0;
    double chi_mean_empirical = 0.0;
};

struct SelectionResult {
    int selected_index = 0;
    std::vector<SelectionRow> rows;
    bool tie_broken = false;
};

// s_hat_k(x) = (1/n) sum_i k(X_i, x).
inline double estimate_at(const KernelModel& k, const Sample& sample, double x) {
    double sum = 0.0;
    for (double xi : sample.values) sum += kernel_eval(k, xi, x);
    return sum / sample.n();
}

// P_n gamma(s_hat_k) = |s_hat_k|^2 - 2 P_n s_hat_k
//                    = (1/n^2) sum_{i,j} (A_k - 2k)(X_i, X_j),
// summed over all ordered pairs including i = j. Both A_k and k are
// symmetric, so the sum is the diagonal plus twice the upper triangle.
inline double empirical_contrast(const KernelModel& k, const Sample& sample) {
    const auto& x = sample.values;
    const std::size_t n = x.size();
    double diag = 0.0;
    double upper = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        diag += a_eval(k, x[i], x[i]) - 2.0 * kernel_eval(k, x[i], x[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            upper += a_eval(k, x[i], x[j]) - 2.0 * kernel_eval(k, x[i], x[j]);
        }
    }
    return (diag + 2.0 * upper) / (static_cast<double>(n) * static_cast<double>(n));
}

// P_n chi_k, the empirical mean of the diagonal. A constant diagonal is its
// own mean; short-circuiting keeps P_n chi_k = chi_bar exact rather than up
// to summation roundoff.
inline double empirical_chi_mean(const KernelModel& k, const Sample& sample) {
    if (auto c = constant_chi(k)) return *c;
    double sum = 0.0;
    for (double xi : sample.values) sum += chi_eval(k, xi);
    return sum / sample.n();
}

// Complexity P Theta_k used for reporting and tie-breaking: the constant
// Theta value where it exists, otherwise the empirical mean P_n Theta_k.
inline double complexity_value(const KernelModel& k, const Sample& sample) {
    if (auto t = constant_theta(k)) return *t;
    double sum = 0.0;
    for (double xi : sample.values) sum += theta_eval(k, xi);
    return sum / sample.n();
}

namespace detail {

inline double theoretical_penalty(PenaltyRule::Kind kind, double kappa,
                                  const KernelModel& k, int n) {
    const auto chi = constant_chi(k);
    const auto theta = constant_theta(k);
    if (!chi || !theta) {
        throw ConfigError("penalty rule needs constant chi/Theta, unavailable for " +
                          k.describe());
    }
    switch (kind) {
        case PenaltyRule::Kind::optimal_theoretical:
            return 2.0 * *chi / n;
        case PenaltyRule::Kind::minimal:
            return (2.0 * *chi - *theta) / n;
        case PenaltyRule::Kind::minimal_plus_kappa:
            return (2.0 * *chi - *theta) / n + kappa * *theta / n;
        default:
            break;
    }
    throw ConfigError("unexpected penalty kind");
}

}  // namespace detail

// pen(k) for one kernel. Explicit tables are positional, so they need the
// kernel's index in the family.
inline double penalty_value(const PenaltyRule& rule, const KernelModel& k,
                            const Sample& sample, std::optional<int> kernel_index = {}) {
    switch (rule.kind) {
        case PenaltyRule::Kind::optimal_empirical:
            return 2.0 * empirical_chi_mean(k, sample) / sample.n();
        case PenaltyRule::Kind::explicit_table: {
            if (!kernel_index) {
                throw ConfigError("explicit penalty table requires the kernel index");
            }
            if (*kernel_index < 0 ||
                static_cast<std::size_t>(*kernel_index) >= rule.table.size()) {
                throw ConfigError("penalty table does not cover kernel index " +
                                  std::to_string(*kernel_index));
            }
            return rule.table[static_cast<std::size_t>(*kernel_index)];
        }
        default:
            return detail::theoretical_penalty(rule.kind, rule.kappa, k, sample.n());
    }
}

namespace detail {

// Argmin over criteria; exact ties resolved by smaller complexity, then by
// smaller index (no tolerance: only bitwise-equal criteria tie). Returns the
// winner and whether several rows attained the minimum.
inline std::pair<int, bool> argmin_rows(std::span<const SelectionRow> rows) {
    double best_criterion = rows[0].criterion;
    for (const auto& r : rows) best_criterion = std::min(best_criterion, r.criterion);

    int best = -1;
    int minimizers = 0;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        if (r.criterion != best_criterion) continue;
        ++minimizers;
        if (best < 0 ||
            r.complexity_ptheta < rows[static_cast<std::size_t>(best)].complexity_ptheta) {
            best = i;
        }
    }
    return {best, minimizers > 1};
}

}  // namespace detail

// Assembles the selection from per-kernel contrasts and penalties already in
// hand; the kappa sweeps reuse kernel contrasts across penalties through this.
inline SelectionResult select_from_parts(std::span<const double> contrasts,
                                         std::span<const double> penalties,
                                         std::span<const double> complexities,
                                         std::span<const double> chi_means) {
    SelectionResult res;
    res.rows.resize(contrasts.size());
    for (std::size_t i = 0; i < contrasts.size(); ++i) {
        auto& row = res.rows[i];
        row.contrast = contrasts[i];
        row.penalty = penalties[i];
        row.criterion = row.contrast + row.penalty;
        row.complexity_ptheta = complexities[i];
        row.chi_mean_empirical = chi_means[i];
    }
    auto [best, tie] = detail::argmin_rows(res.rows);
    res.selected_index = best;
    res.tie_broken = tie;
    return res;
}

// k_hat = argmin_k { P_n gamma(s_hat_k) + pen(k) } over the family.
inline SelectionResult select(std::span<const KernelModel> family, const Sample& sample,
                              const PenaltyRule& rule) {
    if (family.empty()) throw ConfigError("kernel family must be non-empty");
    if (rule.kind == PenaltyRule::Kind::explicit_table &&
        rule.table.size() != family.size()) {
        throw ConfigError("penalty table must cover every kernel exactly once");
    }
    std::vector<double> contrasts(family.size());
    std::vector<double> penalties(family.size());
    std::vector<double> complexities(family.size());
    std::vector<double> chi_means(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        contrasts[i] = empirical_contrast(family[i], sample);
        penalties[i] = penalty_value(rule, family[i], sample, static_cast<int>(i));
        complexities[i] = complexity_value(family[i], sample);
        chi_means[i] = empirical_chi_mean(family[i], sample);
    }
    return select_from_parts(contrasts, penalties, complexities, chi_means);
}

}  // namespace kernsel
