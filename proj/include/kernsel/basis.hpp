#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "kernsel/errors.hpp"
#include "kernsel/mathfn.hpp"

namespace kernsel {

// D equal-width bins on [0,1]; phi_i = sqrt(D) * 1_{[(i-1)/D, i/D)}.
// The right endpoint x = 1 belongs to the last bin so the bins cover [0,1].
struct RegularHistogram {
    int dim = 1;
};

// Trigonometric system on [0,1]: phi_0 = 1, phi_{2j-1} = sqrt(2) cos(2 pi j x),
// phi_{2j} = sqrt(2) sin(2 pi j x), j = 1..(p-1)/2, for odd p. The expanded
// basis has p functions. w0 weights phi_0; tau_j weights the cos/sin pair at
// frequency j (w_{2j-1} = w_{2j} = tau_j).
struct FourierPaired {
    int p = 1;
    double w0 = 1.0;
    std::vector<double> tau;
};

using BasisSpec = std::variant<RegularHistogram, FourierPaired>;

inline void validate(const RegularHistogram& h) {
    if (h.dim < 1) throw ConfigError("histogram dimension must be >= 1");
}

inline void validate(const FourierPaired& f) {
    if (f.p < 1 || f.p % 2 == 0) {
        throw ConfigError("Fourier basis size p must be an odd positive integer");
    }
    if (static_cast<int>(f.tau.size()) != f.p / 2) {
        throw ConfigError("Fourier basis needs exactly floor(p/2) pair weights");
    }
    if (!(f.w0 >= 0.0 && f.w0 <= 1.0)) throw ConfigError("w0 must lie in [0,1]");
    for (double t : f.tau) {
        if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("tau weights must lie in [0,1]");
    }
}

inline void validate(const BasisSpec& spec) {
    std::visit([](const auto& b) { validate(b); }, spec);
}

inline int basis_size(const RegularHistogram& h) { return h.dim; }
inline int basis_size(const FourierPaired& f) { return f.p; }
inline int basis_size(const BasisSpec& spec) {
    return std::visit([](const auto& b) { return basis_size(b); }, spec);
}

inline int histogram_bin(const RegularHistogram& h, double x) {
    const int b = static_cast<int>(x * h.dim);
    return b >= h.dim ? h.dim - 1 : b;  // x = 1 falls in the last bin
}

inline double basis_eval(const RegularHistogram& h, int i, double x) {
    return histogram_bin(h, x) == i ? std::sqrt(static_cast<double>(h.dim)) : 0.0;
}

inline double basis_eval(const FourierPaired& f, int i, double x) {
    if (i == 0) return 1.0;
    const int j = (i + 1) / 2;  // frequency
    const double arg = 2.0 * kPi * j * x;
    const double root2 = std::sqrt(2.0);
    return (i % 2 == 1) ? root2 * std::cos(arg) : root2 * std::sin(arg);
}

inline double basis_eval(const BasisSpec& spec, int i, double x) {
    return std::visit([&](const auto& b) { return basis_eval(b, i, x); }, spec);
}

// sup_x sum_i phi_i(x)^2, exact for both systems: D for histograms, and p for
// the Fourier system (each cos/sin pair contributes the constant 2).
inline double sup_sum_sq(const BasisSpec& spec) {
    return static_cast<double>(basis_size(spec));
}

// The expanded weight vector (w0, tau_1, tau_1, tau_2, tau_2, ...).
inline std::vector<double> expanded_weights(const FourierPaired& f) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(f.p));
    w.push_back(f.w0);
    for (double t : f.tau) {
        w.push_back(t);
        w.push_back(t);
    }
    return w;
}

// Discontinuity locations for quadrature (histogram bin edges).
inline std::vector<double> basis_breakpoints(const BasisSpec& spec) {
    std::vector<double> cuts;
    if (const auto* h = std::get_if<RegularHistogram>(&spec)) {
        cuts.reserve(static_cast<std::size_t>(h->dim) - 1);
        for (int i = 1; i < h->dim; ++i) {
            cuts.push_back(static_cast<double>(i) / h->dim);
        }
    }
    return cuts;
}

inline std::string describe(const BasisSpec& spec) {
    if (const auto* h = std::get_if<RegularHistogram>(&spec)) {
        return "histogram D=" + std::to_string(h->dim);
    }
    const auto& f = std::get<FourierPaired>(spec);
    return "fourier p=" + std::to_string(f.p);
}

}  // namespace kernsel
