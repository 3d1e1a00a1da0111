#pragma once

// Dyadic geometry on the ambient box [0, L)^n: shifted dyadic grids, cubes,
// cell sets, sampled functions and the Whitney decomposition.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sparsedom/error.hpp"

namespace sparsedom {

using Point = std::array<double, 2>;

/// Uniform finest grid of 2^m cells per side on [0, L)^n, optionally
/// translated by shift/3 * L per axis. The translate is shared by all levels,
/// so at level k the three shifts sit at offsets {0, 1/3, 2/3} of the side.
struct GridSpec {
  int dim = 1;
  int finest_level = 3;
  double side = 1.0;
  std::array<int, 2> shift{0, 0};  // thirds of L, each in {0, 1, 2}

  static GridSpec make(int dim, int finest_level, double side);

  int cells_per_side() const { return 1 << finest_level; }
  std::size_t cell_count() const {
    return std::size_t{1} << static_cast<unsigned>(finest_level * dim);
  }
  double cell_side() const { return side / cells_per_side(); }
  double cell_measure() const;
  double box_measure() const;
  int shift_id() const { return shift[0] + 3 * shift[1]; }

  GridSpec unshifted() const {
    GridSpec g = *this;
    g.shift = {0, 0};
    return g;
  }
  GridSpec with_shift_id(int id) const;

  std::size_t cell_index(int ix, int iy) const {
    return static_cast<std::size_t>(ix) + static_cast<std::size_t>(iy) * cells_per_side();
  }
  Point cell_center(std::size_t idx) const;

  /// Same cells (shift is a property of the cube family, not of the samples).
  bool same_cells(const GridSpec& other) const {
    return dim == other.dim && finest_level == other.finest_level && side == other.side;
  }
};

/// Product of half-open index ranges along each axis, clipped to the grid.
/// For n = 1 the second axis is the single row [0, 1).
struct CellBox {
  int dim = 1;
  std::array<int, 2> lo{0, 0};
  std::array<int, 2> hi{0, 1};
  int stride = 1;  // cells per side

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool contains(std::size_t idx) const;
  std::vector<std::size_t> indices() const;

  template <class F>
  void for_each(F&& fn) const {
    for (int iy = lo[1]; iy < hi[1]; ++iy)
      for (int ix = lo[0]; ix < hi[0]; ++ix)
        fn(static_cast<std::size_t>(ix) + static_cast<std::size_t>(iy) * stride);
  }
};

struct GeometricBox {
  int dim = 1;
  Point center{0.0, 0.0};
  double side = 0.0;

  double measure() const;
};

/// A cube of a (possibly shifted) dyadic grid. Level 0 has side L; indices of
/// the unshifted grid lie in [0, 2^k); shifted grids also reach negative
/// indices, down to -2^k.
struct DyadicCube {
  GridSpec grid;
  int level = 0;
  std::array<std::int64_t, 2> index{0, 0};

  double side() const;
  double lower(int axis) const;
  Point center() const;
  double measure() const;
  double diameter() const;
  /// Finest cells whose midpoints lie in the cube, clipped to the ambient box.
  CellBox cells() const;
  bool is_finest() const { return level == grid.finest_level; }

  bool operator==(const DyadicCube& o) const {
    return grid.shift == o.grid.shift && grid.same_cells(o.grid) && level == o.level &&
           index == o.index;
  }
};

struct SampledFunction {
  GridSpec grid;
  std::vector<double> values;

  SampledFunction() = default;
  explicit SampledFunction(const GridSpec& g, double fill = 0.0);
  SampledFunction(const GridSpec& g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> view() const { return values; }

  double sup_norm() const;
  double l1_norm() const;  // with cell measure
};

struct CellMask {
  GridSpec grid;
  std::vector<std::uint8_t> bits;

  CellMask() = default;
  explicit CellMask(const GridSpec& g, bool fill = false);

  bool operator[](std::size_t i) const { return bits[i] != 0; }
  void set(std::size_t i, bool v = true) { bits[i] = v ? 1 : 0; }
  std::size_t count() const;
  double measure() const { return static_cast<double>(count()) * grid.cell_measure(); }
  bool empty() const { return count() == 0; }
  CellMask complement() const;
  std::vector<std::size_t> indices() const;
};

CellMask mask_of(const GridSpec& grid, const CellBox& box);

// ---- cube arithmetic ------------------------------------------------------

std::vector<DyadicCube> children(const DyadicCube& q);
DyadicCube parent(const DyadicCube& q);
DyadicCube root_cube(const GridSpec& grid);
GeometricBox dilate(const DyadicCube& q, double lam);
GeometricBox dilate(const GeometricBox& b, double lam);
GeometricBox as_box(const DyadicCube& q);
bool contains(const DyadicCube& outer, const DyadicCube& inner);

/// Finest cells whose midpoints lie in box ∩ [0, L)^n.
CellBox cells_in(const GeometricBox& box, const GridSpec& grid);

/// Every cube of the given level that owns at least one cell midpoint.
std::vector<DyadicCube> cubes_at_level(const GridSpec& grid, int level);

/// The 3^n translates of the base grid by {0, 1/3, 2/3} L per axis.
std::vector<GridSpec> shifted_grids(const GridSpec& base);

/// Region [L/2 - L/18, L/2 + L/18)^n, the support window required by the
/// sparse domination driver (its 9-fold dilate is the ambient box).
CellBox central_ninth(const GridSpec& grid);

// ---- Whitney decomposition ------------------------------------------------

struct WhitneyResult {
  std::vector<DyadicCube> cubes;
  std::vector<bool> clamped;  // emitted at the finest level without condition (i)
  int overlap = 0;            // max over cells of the number of R Q_j containing it
};

/// Dyadic cubes Q ⊂ omega with 5R diam Q ≤ dist(Q, box \ omega), maximal
/// for inclusion; cells that no admissible cube reaches are emitted at the
/// finest level and flagged as clamped.
WhitneyResult whitney_decompose(const CellMask& omega, double R);

/// Euclidean distance from each cell (closed square) to the nearest cell
/// outside omega; +inf when omega covers the grid.
std::vector<double> distance_to_complement(const CellMask& omega);

double box_distance(const CellBox& a, const CellBox& b, double h);

}  // namespace sparsedom
