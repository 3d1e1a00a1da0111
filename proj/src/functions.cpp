#include "sparsedom/functions.hpp"

#include <cmath>
#include <array>
#include <random>
#include <vector>

namespace sparsedom {

SampledFunction function_gallery(const std::string& name, std::span<const double> params, const GridSpec& grid,
                                 std::uint64_t seed) {
  const GridSpec g = grid.unshifted();
  const double L = g.side;
  const double half = L / 18.0;
  const Point c{0.5 * L, 0.5 * L};
  const CellBox window = central_ninth(g);
  SampledFunction f(g);

  // sup-norm distance to the centre, in units of the window half-width
  auto rel = [&](std::size_t i) {
    const Point x = g.cell_center(i);
    double r = std::abs(x[0] - c[0]);
    if (g.dim == 2) r = std::max(r, std::abs(x[1] - c[1]));
    return r / half;
  };

  if (name == "zero") return f;
  if (name == "indicator") {
    const double frac = params.empty() ? 1.0 : params[0];
    if (!(frac > 0.0 && frac <= 1.0)) throw Error(Errc::invalid_argument, "indicator fraction must lie in (0, 1]");
    window.for_each([&](std::size_t i) {
      if (rel(i) < frac) f[i] = 1.0;
    });
  } else if (name == "tent") {
    window.for_each([&](std::size_t i) { f[i] = std::max(0.0, 1.0 - rel(i)); });
  } else if (name == "random-signs") {
    std::mt19937_64 rng(seed);
    window.for_each([&](std::size_t i) { f[i] = (rng() & 1U) ? 1.0 : -1.0; });
  } else if (name == "log-spike") {
    window.for_each([&](std::size_t i) {
      const Point x = g.cell_center(i);
      const double d = g.dim == 2 ? std::hypot(x[0] - c[0], x[1] - c[1]) : std::abs(x[0] - c[0]);
      f[i] = std::log(std::exp(1.0) + L / d);
    });
  } else {
    throw Error(Errc::unknown_name, "function '" + name + "'");
  }
  return f;
}

SampledFunction random_test_function(const GridSpec& grid, int level, std::uint64_t seed,
                                     const SampledFunction* sign_of) {
  const GridSpec g = grid.unshifted();
  if (level < 0 || level > g.finest_level) throw Error(Errc::invalid_argument, "partition level out of range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  SampledFunction h(g);
  for (const DyadicCube& q : cubes_at_level(g, level)) {
    const double v = U(rng);
    q.cells().for_each([&](std::size_t i) { h[i] = v; });
  }
  if (sign_of)
    for (std::size_t i = 0; i < h.size(); ++i) h[i] *= (*sign_of)[i] < 0.0 ? -1.0 : 1.0;
  return h;
}

CellMask random_open_set(const GridSpec& grid, std::uint64_t seed) {
  const GridSpec g = grid.unshifted();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(0.2, 0.8), half(0.02, 0.15);
  const int boxes = 1 + static_cast<int>(rng() % 4);
  std::vector<std::array<double, 4>> rects;  // lo0, hi0, lo1, hi1 in units of L
  for (int k = 0; k < boxes; ++k) {
    std::array<double, 4> r{0.0, 1.0, 0.0, 1.0};
    for (int a = 0; a < g.dim; ++a) {
      const double c = centre(rng), h = half(rng);
      r[2 * a] = c - h;
      r[2 * a + 1] = c + h;
    }
    rects.push_back(r);
  }
  CellMask omega(g);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const Point x = g.cell_center(i);
    for (const auto& r : rects) {
      bool in = true;
      for (int a = 0; a < g.dim; ++a) in = in && x[a] >= r[2 * a] * g.side && x[a] < r[2 * a + 1] * g.side;
      if (in) {
        omega.set(i);
        break;
      }
    }
  }
  if (omega.empty()) omega.set(g.cell_index(static_cast<int>(rects[0][0] * g.cells_per_side()),
                                            g.dim == 2 ? static_cast<int>(rects[0][2] * g.cells_per_side()) : 0));
  return omega;
}

bool supported_in_central_ninth(const SampledFunction& f) {
  const CellBox window = central_ninth(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != 0.0 && !window.contains(i)) return false;
  return true;
}

}  // namespace sparsedom
