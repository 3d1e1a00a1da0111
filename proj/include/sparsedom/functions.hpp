#pragma once

// Test functions supported in the central ninth of the ambient box.

#include <cstdint>
#include <span>
#include <string>

#include "sparsedom/grid.hpp"

namespace sparsedom {

/// indicator(frac), tent, random-signs, log-spike, zero. frac scales the
/// indicator window about the centre (default 1). random-signs draws from seed.
SampledFunction function_gallery(const std::string& name, std::span<const double> params, const GridSpec& grid,
                                 std::uint64_t seed = 0);

/// Uniform(0, 1) values constant on the dyadic cubes of the given level,
/// drawn in cube order from seed, so the draw does not depend on the
/// resolution. With sign_of, multiplied by the sign of that function.
SampledFunction random_test_function(const GridSpec& grid, int level, std::uint64_t seed,
                                     const SampledFunction* sign_of = nullptr);

/// Union of one to four random boxes whose corners are drawn as reals, so
/// the set is the same geometric object at every resolution. Never empty;
/// the boxes stay inside [0.05 L, 0.95 L)^n, so never the whole grid.
CellMask random_open_set(const GridSpec& grid, std::uint64_t seed);

/// True when every nonzero sample lies in the central ninth.
bool supported_in_central_ninth(const SampledFunction& f);

}  // namespace sparsedom
