#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "kernsel/errors.hpp"
#include "kernsel/mathfn.hpp"
#include "kernsel/quadrature.hpp"
#include "kernsel/rng.hpp"

namespace kernsel {

// A true density used in oracle mode. Closed set: the standard Gaussian on R,
// the uniform density on [0,1], and the triangular density s(x) = 2x on [0,1].
// Sampling is by inverse CDF so a seed fully determines the draw.
class KnownDensity {
public:
    enum class Tag { std_gaussian, uniform01, triangular2x };

    static KnownDensity std_gaussian() { return KnownDensity(Tag::std_gaussian); }
    static KnownDensity uniform01() { return KnownDensity(Tag::uniform01); }
    static KnownDensity triangular2x() { return KnownDensity(Tag::triangular2x); }

    static KnownDensity from_name(const std::string& name) {
        if (name == "std-gaussian") return std_gaussian();
        if (name == "uniform") return uniform01();
        if (name == "triangular") return triangular2x();
        throw ConfigError("unknown density '" + name +
                          "' (expected std-gaussian, uniform or triangular)");
    }

    Tag tag() const { return tag_; }

    double operator()(double x) const { return density(x); }

    double density(double x) const {
        switch (tag_) {
            case Tag::std_gaussian:
                return std_normal_pdf(x);
            case Tag::uniform01:
                return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
            case Tag::triangular2x:
                return (x >= 0.0 && x <= 1.0) ? 2.0 * x : 0.0;
        }
        return 0.0;
    }

    double sup_norm() const {
        switch (tag_) {
            case Tag::std_gaussian:
                return 1.0 / kSqrt2Pi;
            case Tag::uniform01:
                return 1.0;
            case Tag::triangular2x:
                return 2.0;
        }
        return 0.0;
    }

    // |s|^2: 1/(2 sqrt(pi)) for the Gaussian, 1 for uniform, 4/3 for 2x.
    double l2_norm_sq() const {
        switch (tag_) {
            case Tag::std_gaussian:
                return 1.0 / (2.0 * kSqrtPi);
            case Tag::uniform01:
                return 1.0;
            case Tag::triangular2x:
                return 4.0 / 3.0;
        }
        return 0.0;
    }

    bool unit_domain() const { return tag_ != Tag::std_gaussian; }

    // Effective support for quadrature; the Gaussian is truncated where its
    // density falls below 1e-16 of the peak.
    Interval support() const {
        if (tag_ == Tag::std_gaussian) return {-9.0, 9.0};
        return {0.0, 1.0};
    }

    double sample(SplitMix64& rng) const {
        const double u = rng.uniform01();
        switch (tag_) {
            case Tag::std_gaussian:
                return normal_quantile(u);
            case Tag::uniform01:
                return u;
            case Tag::triangular2x:
                return std::sqrt(u);  // F(x) = x^2 on [0,1]
        }
        return 0.0;
    }

    std::vector<double> sample_n(std::uint64_t seed, int n) const {
        SplitMix64 rng(seed);
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) out.push_back(sample(rng));
        return out;
    }

    std::string name() const {
        switch (tag_) {
            case Tag::std_gaussian:
                return "std-gaussian";
            case Tag::uniform01:
                return "uniform";
            case Tag::triangular2x:
                return "triangular";
        }
        return "?";
    }

private:
    explicit KnownDensity(Tag t) : tag_(t) {}

    Tag tag_;
};

}  // namespace kernsel
