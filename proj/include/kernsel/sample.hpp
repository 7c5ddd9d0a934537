#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "kernsel/errors.hpp"

namespace kernsel {

// The observed data X_1..X_n. Values must be finite; basis kernels
// additionally require them to lie in [0,1], checked at evaluation time.
struct Sample {
    std::vector<double> values;

    Sample() = default;
    explicit Sample(std::vector<double> v) : values(std::move(v)) {
        if (values.empty()) throw DataError("sample must contain at least one value");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i])) {
                throw DataError("sample value " + std::to_string(i + 1) + " is not finite");
            }
        }
    }

    int n() const { return static_cast<int>(values.size()); }
};

}  // namespace kernsel
