#pragma once

// Umbrella header: penalized least-squares kernel selection for density
// estimation, oracle-mode diagnostics, and the seeded replication harness.

#include "kernsel/base_kernel.hpp"
#include "kernsel/basis.hpp"
#include "kernsel/criterion.hpp"
#include "kernsel/densities.hpp"
#include "kernsel/errors.hpp"
#include "kernsel/experiments.hpp"
#include "kernsel/family_bounds.hpp"
#include "kernsel/io.hpp"
#include "kernsel/kernel_model.hpp"
#include "kernsel/mathfn.hpp"
#include "kernsel/oracle.hpp"
#include "kernsel/quadrature.hpp"
#include "kernsel/rng.hpp"
#include "kernsel/sample.hpp"

namespace kernsel {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kernsel
