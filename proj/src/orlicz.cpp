#include "sparsedom/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sparsedom {

namespace {

std::vector<double> gather_abs(const SampledFunction& f, const CellBox& region) {
  std::vector<double> out;
  out.reserve(region.count());
  region.for_each([&](std::size_t i) { out.push_back(std::abs(f[i])); });
  return out;
}

double log_power(double t, double beta) {
  if (beta == 0.0) return 1.0;
  return std::pow(std::log(std::numbers::e + t), beta);
}

void check_grid(const SampledFunction& a, const SampledFunction& b) {
  if (!a.grid.same_cells(b.grid)) throw Error(Errc::grid_mismatch, "functions live on different grids");
}

}  // namespace

double local_avg(const SampledFunction& f, const CellBox& region, double r) {
  if (region.empty()) throw Error(Errc::empty_region, "average over an empty region");
  if (!(r > 0.0)) throw Error(Errc::invalid_exponent_combination, "power average needs r > 0");
  double s = 0.0;
  if (r == 1.0) {
    region.for_each([&](std::size_t i) { s += std::abs(f[i]); });
    return s / static_cast<double>(region.count());
  }
  region.for_each([&](std::size_t i) { s += std::pow(std::abs(f[i]), r); });
  return std::pow(s / static_cast<double>(region.count()), 1.0 / r);
}

double local_avg(const SampledFunction& f, const DyadicCube& q, double r) {
  return local_avg(f, q.cells(), r);
}

double local_avg(const SampledFunction& f, const GeometricBox& box, double r) {
  return local_avg(f, cells_in(box, f.grid), r);
}

double young_average(std::span<const double> magnitudes, double lam, double beta) {
  double s = 0.0;
  for (double a : magnitudes) {
    const double t = a / lam;
    s += t * log_power(t, beta);
  }
  return s / static_cast<double>(magnitudes.size());
}

double luxemburg_of_values(std::span<const double> magnitudes, double beta) {
  if (magnitudes.empty()) throw Error(Errc::empty_region, "norm over an empty region");
  if (beta < 0.0) throw Error(Errc::invalid_exponent_combination, "beta must be nonnegative");
  double amax = 0.0, sum = 0.0;
  for (double a : magnitudes) {
    amax = std::max(amax, a);
    sum += a;
  }
  if (amax == 0.0) return 0.0;
  if (beta == 0.0) return sum / static_cast<double>(magnitudes.size());

  // young_average is strictly decreasing in lam; keep lo infeasible, hi feasible.
  double hi = 2.0 * amax * log_power(1.0, beta);
  while (young_average(magnitudes, hi, beta) > 1.0) hi *= 2.0;
  double lo = 1e-16 * amax;
  while (young_average(magnitudes, lo, beta) <= 1.0) lo *= 0.5;
  while (hi - lo > 1e-10 * hi) {
    const double mid = hi > 4.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (young_average(magnitudes, mid, beta) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

double luxemburg_norm(const SampledFunction& f, const CellBox& region, double beta) {
  if (region.empty()) throw Error(Errc::empty_region, "norm over an empty region");
  if (beta == 0.0) return local_avg(f, region, 1.0);
  const auto vals = gather_abs(f, region);
  return luxemburg_of_values(vals, beta);
}

double luxemburg_norm(const SampledFunction& f, const DyadicCube& q, double beta) {
  return luxemburg_norm(f, q.cells(), beta);
}

double luxemburg_norm(const SampledFunction& f, const GeometricBox& box, double beta) {
  return luxemburg_norm(f, cells_in(box, f.grid), beta);
}

std::vector<GridSpec> scope_grids(const GridSpec& grid, MaximalScope scope) {
  if (scope == MaximalScope::all_shifted) return shifted_grids(grid.unshifted());
  return {grid.unshifted()};
}

SampledFunction maximal(const SampledFunction& f, double beta, double r, MaximalScope scope) {
  if (beta < 0.0 || !(r > 0.0) || r > 1.0 || (beta > 0.0 && r != 1.0))
    throw Error(Errc::invalid_exponent_combination, "maximal operator needs beta >= 0, 0 < r <= 1, "
                                                    "and r = 1 whenever beta > 0");
  if (beta == 0.0)
    return dyadic_sup(f.grid, scope,
                      [&](const DyadicCube&, const CellBox& cells) { return local_avg(f, cells, r); });
  return dyadic_sup(f.grid, scope, [&](const DyadicCube&, const CellBox& cells) {
    return luxemburg_norm(f, cells, beta);
  });
}

SampledFunction maximal_commutator_mb(const SampledFunction& f, const SampledFunction& b,
                                      MaximalScope scope) {
  check_grid(f, b);
  SampledFunction out(f.grid, 0.0);
  for (const GridSpec& g : scope_grids(f.grid, scope)) {
    for (int k = 0; k <= g.finest_level; ++k) {
      const auto cubes = cubes_at_level(g, k);
      // cubes of one level are disjoint, so each task owns its cells
      kernels::parallel_for(cubes.size(), [&](std::size_t q) {
        const auto idx = cubes[q].cells().indices();
        const double inv = 1.0 / static_cast<double>(idx.size());
        for (std::size_t x : idx) {
          double s = 0.0;
          for (std::size_t y : idx) s += std::abs(b[x] - b[y]) * std::abs(f[y]);
          out[x] = std::max(out[x], s * inv);
        }
      });
    }
  }
  return out;
}

double level_set_measure(const SampledFunction& f, double lam, const SampledFunction* weight) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f[i]) > lam) s += weight ? (*weight)[i] : 1.0;
  return s * f.grid.cell_measure();
}

double orlicz_integral(const SampledFunction& f, double lam, double k, const SampledFunction* weight) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double t = std::abs(f[i]) / lam;
    if (t == 0.0) continue;
    s += t * log_power(t, k) * (weight ? (*weight)[i] : 1.0);
  }
  return s * f.grid.cell_measure();
}

}  // namespace sparsedom
