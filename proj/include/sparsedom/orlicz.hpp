#pragma once

// Local Orlicz norms ||f||_{L(log L)^beta, Q}, power averages <|f|>_{r,Q},
// and the dyadic maximal operators built from them.

#include <span>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/kernels.hpp"

namespace sparsedom {

enum class MaximalScope { all_shifted, single_grid };

/// (|Q|^{-1} sum_Q |f|^r h^n)^{1/r}
double local_avg(const SampledFunction& f, const CellBox& region, double r = 1.0);
double local_avg(const SampledFunction& f, const DyadicCube& q, double r = 1.0);
double local_avg(const SampledFunction& f, const GeometricBox& box, double r = 1.0);

/// inf{lam > 0 : |Q|^{-1} int_Q (|f|/lam) log^beta(e + |f|/lam) <= 1}.
/// beta = 0 short-circuits to the plain average; the zero function has norm 0.
double luxemburg_norm(const SampledFunction& f, const CellBox& region, double beta);
double luxemburg_norm(const SampledFunction& f, const DyadicCube& q, double beta);
double luxemburg_norm(const SampledFunction& f, const GeometricBox& box, double beta);

/// Core solver on already gathered magnitudes (equal cell weights).
double luxemburg_of_values(std::span<const double> magnitudes, double beta);

/// The averaged Young function |Q|^{-1} int_Q Phi(|f|/lam) used by the solver.
double young_average(std::span<const double> magnitudes, double lam, double beta);

/// Grids enumerated for a maximal-type supremum.
std::vector<GridSpec> scope_grids(const GridSpec& grid, MaximalScope scope);

/// out(x) = max over cubes Q of the scope containing x of value(Q, cells(Q)).
/// value is evaluated concurrently for the cubes of one level.
template <class CubeValue>
SampledFunction dyadic_sup(const GridSpec& grid, MaximalScope scope, CubeValue&& value) {
  SampledFunction out(grid, 0.0);
  for (const GridSpec& g : scope_grids(grid, scope)) {
    for (int k = 0; k <= g.finest_level; ++k) {
      const auto cubes = cubes_at_level(g, k);
      std::vector<CellBox> boxes(cubes.size());
      std::vector<double> vals(cubes.size());
      kernels::parallel_for(cubes.size(), [&](std::size_t q) {
        boxes[q] = cubes[q].cells();
        vals[q] = value(cubes[q], boxes[q]);
      });
      kernels::scatter_max_omp(boxes, vals, out.values);
    }
  }
  return out;
}

/// M_{L(log L)^beta} (r = 1) or M_r (beta = 0) over dyadic cubes of the scope.
SampledFunction maximal(const SampledFunction& f, double beta = 0.0, double r = 1.0,
                        MaximalScope scope = MaximalScope::all_shifted);

/// M_b f(x) = sup_{Q ∋ x} |Q|^{-1} int_Q |b(x) - b(y)| |f(y)| dy.
SampledFunction maximal_commutator_mb(const SampledFunction& f, const SampledFunction& b,
                                      MaximalScope scope = MaximalScope::all_shifted);

/// Cells of f with |f| > lam, measured with the optional weight (nullptr = Lebesgue).
double level_set_measure(const SampledFunction& f, double lam, const SampledFunction* weight = nullptr);

/// int (|f|/lam) log^k(e + |f|/lam) u  (u = nullptr means u = 1).
double orlicz_integral(const SampledFunction& f, double lam, double k,
                       const SampledFunction* weight = nullptr);

}  // namespace sparsedom
