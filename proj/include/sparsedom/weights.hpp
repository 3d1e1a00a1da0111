#pragma once

// Muckenhoupt-type constants of sampled weights, realized as suprema over
// all cubes of the 3^n shifted dyadic grids.

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "sparsedom/grid.hpp"
#include "sparsedom/orlicz.hpp"

namespace sparsedom {

struct WeightConstants {
  double p = 2.0;
  double ap = 1.0;
  double a1 = 1.0;
  double ainfty = 1.0;
  double sigma_ainfty = 1.0;  // A_inf constant of sigma = w^{-1/(p-1)}
};

/// Strictly positive sampled weight with a memo of its constants.
class Weight {
 public:
  explicit Weight(SampledFunction w);

  const SampledFunction& values() const { return w_; }
  const GridSpec& grid() const { return w_.grid; }
  double operator[](std::size_t i) const { return w_[i]; }

  double ap(double p) const;
  double a1() const;
  double ainfty() const;
  WeightConstants constants(double p) const;

 private:
  struct Cache {
    std::mutex mu;
    std::map<double, double> ap;
    std::optional<double> a1;
    std::optional<double> ainfty;
  };
  SampledFunction w_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// sup_Q <w>_Q <w^{-1/(p-1)}>_Q^{p-1}
double ap_constant(const Weight& w, double p);
/// max_x Mw(x) / w(x)
double a1_constant(const Weight& w);
/// Wilson constant sup_Q w(Q)^{-1} int_Q M(w chi_Q), inner supremum over the
/// dyadic subcubes of Q.
double ainfty_constant(const Weight& w);
/// Same, with the inner supremum over every shifted dyadic cube (quadratic cost).
double ainfty_constant_unrestricted(const Weight& w);

Weight dual_weight(const Weight& w, double p);

/// sup_Q |Q|^{-1} int_Q |b - <b>_Q| over the shifted dyadic cubes.
double bmo_norm(const SampledFunction& b);

/// constant(c), power(alpha), double-power(alpha1, alpha2), step(a, b),
/// oscillatory-bounded(amp, freq). Power singularities sit on cell
/// boundaries, so every sample is finite and positive.
Weight weight_gallery(const std::string& name, std::span<const double> params, const GridSpec& grid);

/// max over shifted dyadic cubes of value(cube, cells), computed level by level.
template <class CubeValue>
double dyadic_scalar_sup(const GridSpec& grid, MaximalScope scope, CubeValue&& value) {
  double best = -std::numeric_limits<double>::infinity();
  for (const GridSpec& g : scope_grids(grid, scope)) {
    for (int k = 0; k <= g.finest_level; ++k) {
      const auto cubes = cubes_at_level(g, k);
      std::vector<double> vals(cubes.size());
      kernels::parallel_for(cubes.size(),
                            [&](std::size_t q) { vals[q] = value(cubes[q], cubes[q].cells()); });
      for (double v : vals) best = std::max(best, v);
    }
  }
  return best;
}

}  // namespace sparsedom
