#include "sparsedom/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sparsedom {

namespace {

double cube_sum(const SampledFunction& f, const CellBox& cells) {
  double s = 0.0;
  cells.for_each([&](std::size_t i) { s += f[i]; });
  return s;
}

}  // namespace

Weight::Weight(SampledFunction w) : w_(std::move(w)) {
  for (double x : w_.values)
    if (!(x > 0.0)) throw Error(Errc::nonpositive_weight, "weights must be strictly positive");
}

double Weight::ap(double p) const {
  {
    std::lock_guard lock(cache_->mu);
    if (auto it = cache_->ap.find(p); it != cache_->ap.end()) return it->second;
  }
  const double v = ap_constant(*this, p);
  std::lock_guard lock(cache_->mu);
  return cache_->ap.emplace(p, v).first->second;
}

double Weight::a1() const {
  {
    std::lock_guard lock(cache_->mu);
    if (cache_->a1) return *cache_->a1;
  }
  const double v = a1_constant(*this);
  std::lock_guard lock(cache_->mu);
  if (!cache_->a1) cache_->a1 = v;
  return *cache_->a1;
}

double Weight::ainfty() const {
  {
    std::lock_guard lock(cache_->mu);
    if (cache_->ainfty) return *cache_->ainfty;
  }
  const double v = ainfty_constant(*this);
  std::lock_guard lock(cache_->mu);
  if (!cache_->ainfty) cache_->ainfty = v;
  return *cache_->ainfty;
}

WeightConstants Weight::constants(double p) const {
  WeightConstants c;
  c.p = p;
  c.ap = ap(p);
  c.a1 = a1();
  c.ainfty = ainfty();
  c.sigma_ainfty = dual_weight(*this, p).ainfty();
  return c;
}

double ap_constant(const Weight& w, double p) {
  if (!(p > 1.0)) throw Error(Errc::invalid_argument, "A_p constant needs p > 1");
  const SampledFunction& v = w.values();
  SampledFunction sigma(v.grid);
  const double e = -1.0 / (p - 1.0);
  for (std::size_t i = 0; i < v.size(); ++i) sigma[i] = std::pow(v[i], e);
  return dyadic_scalar_sup(v.grid, MaximalScope::all_shifted, [&](const DyadicCube&, const CellBox& cells) {
    const double n = static_cast<double>(cells.count());
    return (cube_sum(v, cells) / n) * std::pow(cube_sum(sigma, cells) / n, p - 1.0);
  });
}

double a1_constant(const Weight& w) {
  const SampledFunction mw = maximal(w.values());
  double best = 0.0;
  for (std::size_t i = 0; i < mw.size(); ++i) best = std::max(best, mw[i] / w[i]);
  return best;
}

double ainfty_constant(const Weight& w) {
  const SampledFunction& v = w.values();
  const std::size_t N = v.size();
  double best = 0.0;
  for (const GridSpec& g : shifted_grids(v.grid)) {
    const int m = g.finest_level;
    // running[x] = max over levels j >= k of the level-j average containing x,
    // i.e. the maximal function of w chi_Q restricted to subcubes of Q.
    std::vector<double> running(N, 0.0);
    for (int k = m; k >= 0; --k) {
      const auto cubes = cubes_at_level(g, k);
      std::vector<double> ratio(cubes.size());
      kernels::parallel_for(cubes.size(), [&](std::size_t q) {
        const CellBox cells = cubes[q].cells();
        const double mass = cube_sum(v, cells);
        const double avg = mass / static_cast<double>(cells.count());
        double integral = 0.0;
        cells.for_each([&](std::size_t x) {
          running[x] = std::max(running[x], avg);
          integral += running[x];
        });
        ratio[q] = integral / mass;
      });
      for (double r : ratio) best = std::max(best, r);
    }
  }
  return best;
}

double ainfty_constant_unrestricted(const Weight& w) {
  const SampledFunction& v = w.values();
  const auto grids = shifted_grids(v.grid);
  double best = 0.0;
  for (const GridSpec& g : grids) {
    for (int k = 0; k <= g.finest_level; ++k) {
      for (const DyadicCube& q : cubes_at_level(g, k)) {
        const CellBox qc = q.cells();
        SampledFunction local(v.grid, 0.0);
        qc.for_each([&](std::size_t i) { local[i] = v[i]; });
        const SampledFunction m = maximal(local);
        double integral = 0.0;
        qc.for_each([&](std::size_t i) { integral += m[i]; });
        best = std::max(best, integral / cube_sum(v, qc));
      }
    }
  }
  return best;
}

Weight dual_weight(const Weight& w, double p) {
  if (!(p > 1.0)) throw Error(Errc::invalid_argument, "dual weight needs p > 1");
  SampledFunction s(w.grid());
  if (p == 2.0) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = 1.0 / w[i];
  } else {
    const double e = -1.0 / (p - 1.0);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::pow(w[i], e);
  }
  return Weight(std::move(s));
}

double bmo_norm(const SampledFunction& b) {
  return dyadic_scalar_sup(b.grid, MaximalScope::all_shifted, [&](const DyadicCube&, const CellBox& cells) {
    const double n = static_cast<double>(cells.count());
    double mean = 0.0;
    cells.for_each([&](std::size_t i) { mean += b[i]; });
    mean /= n;
    double osc = 0.0;
    cells.for_each([&](std::size_t i) { osc += std::abs(b[i] - mean); });
    return osc / n;
  });
}

Weight weight_gallery(const std::string& name, std::span<const double> params, const GridSpec& grid) {
  const GridSpec g = grid.unshifted();
  const double L = g.side;
  const double n = g.dim;
  auto need = [&](std::size_t k) {
    if (params.size() < k)
      throw Error(Errc::invalid_argument, "weight '" + name + "' needs " + std::to_string(k) + " parameters");
  };
  auto check_alpha = [&](double a) {
    if (!(a >= 0.0 && a < n)) throw Error(Errc::alpha_out_of_range, "power exponent must lie in [0, n)");
  };
  auto dist = [&](const Point& x, const Point& c) {
    const double dx = x[0] - c[0], dy = g.dim == 2 ? x[1] - c[1] : 0.0;
    return std::sqrt(dx * dx + dy * dy);
  };
  const Point mid{0.5 * L, g.dim == 2 ? 0.5 * L : 0.0};

  SampledFunction w(g);
  if (name == "constant") {
    need(1);
    for (auto& x : w.values) x = params[0];
  } else if (name == "power") {
    need(1);
    check_alpha(params[0]);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(dist(g.cell_center(i), mid), -params[0]);
  } else if (name == "double-power") {
    need(2);
    check_alpha(params[0]);
    check_alpha(params[1]);
    const Point c1{0.25 * L, mid[1]}, c2{0.75 * L, mid[1]};
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Point x = g.cell_center(i);
      w[i] = std::pow(dist(x, c1), -params[0]) * std::pow(dist(x, c2), -params[1]);
    }
  } else if (name == "step") {
    need(2);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = g.cell_center(i)[0] < 0.5 * L ? params[0] : params[1];
  } else if (name == "oscillatory-bounded") {
    need(2);
    if (!(params[0] >= 0.0 && params[0] < 1.0))
      throw Error(Errc::invalid_argument, "oscillation amplitude must lie in [0, 1)");
    for (std::size_t i = 0; i < w.size(); ++i)
      w[i] = 1.0 + params[0] * std::sin(2.0 * std::numbers::pi * params[1] * g.cell_center(i)[0] / L);
  } else {
    throw Error(Errc::unknown_name, "unknown weight '" + name + "'");
  }
  return Weight(std::move(w));
}

}  // namespace sparsedom
