#include "sparsedom/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparsedom/kernels.hpp"

namespace sparsedom {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Cell range [lo, hi) of the cube with integer index j at level k along one
// axis. Positions are carried in sixths of a cell so the thirds offset of the
// shifted grids and the half-cell midpoint offset stay exact.
std::array<int, 2> axis_range(int shift, int finest, int level, std::int64_t j) {
  const std::int64_t S = std::int64_t{1} << finest;
  const std::int64_t c = std::int64_t{1} << (finest - level);
  const std::int64_t lo6 = 2 * shift * S + 6 * j * c;
  std::int64_t lo = ceil_div(lo6 - 3, 6);
  std::int64_t hi = ceil_div(lo6 + 6 * c - 3, 6);
  lo = std::clamp<std::int64_t>(lo, 0, S);
  hi = std::clamp<std::int64_t>(hi, 0, S);
  if (hi < lo) hi = lo;
  return {static_cast<int>(lo), static_cast<int>(hi)};
}

}  // namespace

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::level_exhausted: return "level-exhausted";
    case Errc::empty_domain: return "empty-domain";
    case Errc::no_complement: return "no-complement";
    case Errc::empty_region: return "empty-region";
    case Errc::invalid_exponent_combination: return "invalid-exponent-combination";
    case Errc::nonpositive_weight: return "nonpositive-weight";
    case Errc::unknown_name: return "unknown-name";
    case Errc::alpha_out_of_range: return "alpha-out-of-range";
    case Errc::grid_mismatch: return "grid-mismatch";
    case Errc::superlevel_set_full: return "superlevel-set-full";
    case Errc::missing_symbol: return "missing-symbol";
    case Errc::unreachable_threshold: return "unreachable-threshold";
    case Errc::support_too_large: return "support-too-large";
    case Errc::variant_hypothesis_violation: return "variant-hypothesis-violation";
    case Errc::chain_too_long: return "chain-too-long";
    case Errc::unknown_key: return "unknown-key";
    case Errc::type_mismatch: return "type-mismatch";
    case Errc::missing_required: return "missing-required";
    case Errc::io_error: return "io-error";
    case Errc::invariant_failure: return "invariant-failure";
  }
  return "unknown";
}

// ---- GridSpec ---------------------------------------------------------------

GridSpec GridSpec::make(int dim, int finest_level, double side) {
  if (dim != 1 && dim != 2)
    throw Error(Errc::invalid_argument, "dimension must be 1 or 2");
  if (finest_level < 3 || finest_level * dim > 24)
    throw Error(Errc::invalid_argument, "finest level out of range");
  if (!(side > 0.0) || !std::isfinite(side))
    throw Error(Errc::invalid_argument, "side length must be positive");
  GridSpec g;
  g.dim = dim;
  g.finest_level = finest_level;
  g.side = side;
  return g;
}

double GridSpec::cell_measure() const { return std::pow(cell_side(), dim); }
double GridSpec::box_measure() const { return std::pow(side, dim); }

GridSpec GridSpec::with_shift_id(int id) const {
  GridSpec g = *this;
  g.shift = {id % 3, dim == 2 ? id / 3 : 0};
  return g;
}

Point GridSpec::cell_center(std::size_t idx) const {
  const std::size_t S = static_cast<std::size_t>(cells_per_side());
  const double h = cell_side();
  Point p{(static_cast<double>(idx % S) + 0.5) * h, 0.0};
  if (dim == 2) p[1] = (static_cast<double>(idx / S) + 0.5) * h;
  return p;
}

// ---- CellBox ----------------------------------------------------------------

std::size_t CellBox::count() const {
  std::size_t c = 1;
  for (int a = 0; a < 2; ++a) c *= static_cast<std::size_t>(std::max(0, hi[a] - lo[a]));
  return c;
}

bool CellBox::contains(std::size_t idx) const {
  const int ix = static_cast<int>(idx % static_cast<std::size_t>(stride));
  const int iy = static_cast<int>(idx / static_cast<std::size_t>(stride));
  return ix >= lo[0] && ix < hi[0] && iy >= lo[1] && iy < hi[1];
}

std::vector<std::size_t> CellBox::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

double GeometricBox::measure() const { return std::pow(side, dim); }

// ---- DyadicCube -------------------------------------------------------------

double DyadicCube::side() const { return std::ldexp(grid.side, -level); }

double DyadicCube::lower(int axis) const {
  return grid.side * grid.shift[axis] / 3.0 + static_cast<double>(index[axis]) * side();
}

Point DyadicCube::center() const {
  Point c{lower(0) + 0.5 * side(), 0.0};
  if (grid.dim == 2) c[1] = lower(1) + 0.5 * side();
  return c;
}

double DyadicCube::measure() const { return std::pow(side(), grid.dim); }
double DyadicCube::diameter() const { return side() * std::sqrt(static_cast<double>(grid.dim)); }

CellBox DyadicCube::cells() const {
  CellBox b;
  b.dim = grid.dim;
  b.stride = grid.cells_per_side();
  const auto rx = axis_range(grid.shift[0], grid.finest_level, level, index[0]);
  b.lo[0] = rx[0];
  b.hi[0] = rx[1];
  if (grid.dim == 2) {
    const auto ry = axis_range(grid.shift[1], grid.finest_level, level, index[1]);
    b.lo[1] = ry[0];
    b.hi[1] = ry[1];
  }
  return b;
}

// ---- SampledFunction / CellMask ---------------------------------------------

SampledFunction::SampledFunction(const GridSpec& g, double fill)
    : grid(g.unshifted()), values(g.cell_count(), fill) {}

SampledFunction::SampledFunction(const GridSpec& g, std::vector<double> v)
    : grid(g.unshifted()), values(std::move(v)) {
  if (values.size() != grid.cell_count())
    throw Error(Errc::grid_mismatch, "value count does not match the grid");
  for (double x : values)
    if (!std::isfinite(x)) throw Error(Errc::invalid_argument, "non-finite sample");
}

double SampledFunction::sup_norm() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

double SampledFunction::l1_norm() const {
  double s = 0.0;
  for (double x : values) s += std::abs(x);
  return s * grid.cell_measure();
}

CellMask::CellMask(const GridSpec& g, bool fill)
    : grid(g.unshifted()), bits(g.cell_count(), fill ? 1 : 0) {}

std::size_t CellMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

CellMask CellMask::complement() const {
  CellMask c = *this;
  for (auto& b : c.bits) b = b ? 0 : 1;
  return c;
}

std::vector<std::size_t> CellMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out.push_back(i);
  return out;
}

CellMask mask_of(const GridSpec& grid, const CellBox& box) {
  CellMask m(grid);
  box.for_each([&](std::size_t i) { m.set(i); });
  return m;
}

// ---- cube arithmetic ----------------------------------------------------------

std::vector<DyadicCube> children(const DyadicCube& q) {
  if (q.level >= q.grid.finest_level)
    throw Error(Errc::level_exhausted, "cube is already at the finest level");
  std::vector<DyadicCube> out;
  const int ny = q.grid.dim == 2 ? 2 : 1;
  for (int dy = 0; dy < ny; ++dy)
    for (int dx = 0; dx < 2; ++dx) {
      DyadicCube c = q;
      c.level = q.level + 1;
      c.index[0] = 2 * q.index[0] + dx;
      c.index[1] = q.grid.dim == 2 ? 2 * q.index[1] + dy : 0;
      out.push_back(c);
    }
  return out;
}

DyadicCube parent(const DyadicCube& q) {
  if (q.level == 0) throw Error(Errc::level_exhausted, "level-0 cube has no parent");
  DyadicCube p = q;
  p.level = q.level - 1;
  p.index[0] = floor_div(q.index[0], 2);
  p.index[1] = q.grid.dim == 2 ? floor_div(q.index[1], 2) : 0;
  return p;
}

DyadicCube root_cube(const GridSpec& grid) {
  DyadicCube q;
  q.grid = grid.unshifted();
  return q;
}

GeometricBox as_box(const DyadicCube& q) { return dilate(q, 1.0); }

GeometricBox dilate(const DyadicCube& q, double lam) {
  GeometricBox b;
  b.dim = q.grid.dim;
  b.center = q.center();
  b.side = lam * q.side();
  return b;
}

GeometricBox dilate(const GeometricBox& b, double lam) {
  GeometricBox out = b;
  out.side = lam * b.side;
  return out;
}

bool contains(const DyadicCube& outer, const DyadicCube& inner) {
  if (outer.grid.shift != inner.grid.shift || inner.level < outer.level) return false;
  const int d = inner.level - outer.level;
  for (int a = 0; a < outer.grid.dim; ++a)
    if (floor_div(inner.index[a], std::int64_t{1} << d) != outer.index[a]) return false;
  return true;
}

CellBox cells_in(const GeometricBox& box, const GridSpec& grid) {
  CellBox b;
  b.dim = grid.dim;
  b.stride = grid.cells_per_side();
  const double h = grid.cell_side();
  const int S = grid.cells_per_side();
  for (int a = 0; a < grid.dim; ++a) {
    const double lo = box.center[a] - 0.5 * box.side;
    const double hi = box.center[a] + 0.5 * box.side;
    double ilo = std::ceil(lo / h - 0.5);
    double ihi = std::ceil(hi / h - 0.5);
    ilo = std::clamp(ilo, 0.0, static_cast<double>(S));
    ihi = std::clamp(ihi, 0.0, static_cast<double>(S));
    b.lo[a] = static_cast<int>(ilo);
    b.hi[a] = std::max(b.lo[a], static_cast<int>(ihi));
  }
  return b;
}

std::vector<DyadicCube> cubes_at_level(const GridSpec& grid, int level) {
  if (level < 0 || level > grid.finest_level)
    throw Error(Errc::invalid_argument, "level out of range");
  const std::int64_t count = std::int64_t{1} << level;
  std::vector<std::int64_t> idx[2];
  for (int a = 0; a < grid.dim; ++a) {
    // the translate is at most 2L/3, so indices start no lower than -count
    for (std::int64_t j = grid.shift[a] == 0 ? 0 : -count; j < count; ++j) {
      const auto r = axis_range(grid.shift[a], grid.finest_level, level, j);
      if (r[1] > r[0]) idx[a].push_back(j);
    }
  }
  if (grid.dim == 1) idx[1].push_back(0);
  std::vector<DyadicCube> out;
  out.reserve(idx[0].size() * idx[1].size());
  for (std::int64_t jy : idx[1])
    for (std::int64_t jx : idx[0]) {
      DyadicCube q;
      q.grid = grid;
      q.level = level;
      q.index = {jx, jy};
      out.push_back(q);
    }
  return out;
}

std::vector<GridSpec> shifted_grids(const GridSpec& base) {
  const int count = base.dim == 2 ? 9 : 3;
  std::vector<GridSpec> out;
  for (int id = 0; id < count; ++id) out.push_back(base.with_shift_id(id));
  return out;
}

CellBox central_ninth(const GridSpec& grid) {
  GeometricBox b;
  b.dim = grid.dim;
  b.center = {0.5 * grid.side, grid.dim == 2 ? 0.5 * grid.side : 0.0};
  b.side = grid.side / 9.0;
  return cells_in(b, grid);
}

// ---- Whitney ----------------------------------------------------------------

double box_distance(const CellBox& a, const CellBox& b, double h) {
  double s = 0.0;
  for (int ax = 0; ax < a.dim; ++ax) {
    const int gap = std::max({0, a.lo[ax] - b.hi[ax], b.lo[ax] - a.hi[ax]});
    s += static_cast<double>(gap) * gap;
  }
  return std::sqrt(s) * h;
}

std::vector<double> distance_to_complement(const CellMask& omega) {
  const GridSpec& g = omega.grid;
  const std::size_t N = g.cell_count();
  const double inf = std::numeric_limits<double>::infinity();
  const double h = g.cell_side();
  std::vector<double> dist(N, inf);
  if (g.dim == 1) {
    // nearest outside cell on each side; closed cells i and j are (|i-j|-1)h apart
    std::int64_t last = -1;
    for (std::size_t i = 0; i < N; ++i) {
      if (!omega[i]) {
        last = static_cast<std::int64_t>(i);
        dist[i] = 0.0;
      } else if (last >= 0) {
        dist[i] = static_cast<double>(static_cast<std::int64_t>(i) - last - 1) * h;
      }
    }
    last = -1;
    for (std::size_t r = N; r-- > 0;) {
      if (!omega[r]) {
        last = static_cast<std::int64_t>(r);
      } else if (last >= 0) {
        dist[r] = std::min(dist[r], static_cast<double>(last - static_cast<std::int64_t>(r) - 1) * h);
      }
    }
    return dist;
  }
  const auto outside = omega.complement().indices();
  const int S = g.cells_per_side();
  kernels::parallel_for(N, [&](std::size_t i) {
    if (!omega[i]) {
      dist[i] = 0.0;
      return;
    }
    const int ix = static_cast<int>(i % S), iy = static_cast<int>(i / S);
    double best = inf;
    for (std::size_t j : outside) {
      const int jx = static_cast<int>(j % S), jy = static_cast<int>(j / S);
      const double gx = std::max(0, std::abs(ix - jx) - 1);
      const double gy = std::max(0, std::abs(iy - jy) - 1);
      best = std::min(best, std::sqrt(gx * gx + gy * gy) * h);
    }
    dist[i] = best;
  });
  return dist;
}

WhitneyResult whitney_decompose(const CellMask& omega, double R) {
  if (!(R > 1.0)) throw Error(Errc::invalid_argument, "Whitney parameter R must exceed 1");
  const std::size_t inside = omega.count();
  if (inside == 0) throw Error(Errc::empty_domain, "open set is empty");
  if (inside == omega.bits.size()) throw Error(Errc::no_complement, "open set covers the grid");

  const auto dist = distance_to_complement(omega);
  WhitneyResult res;

  // Depth-first over the unshifted tree; a cube is taken as soon as it lies
  // in omega far enough from the complement, so emitted cubes are maximal.
  std::vector<DyadicCube> stack{root_cube(omega.grid)};
  while (!stack.empty()) {
    DyadicCube q = stack.back();
    stack.pop_back();
    const CellBox cb = q.cells();
    std::size_t hits = 0;
    double dmin = std::numeric_limits<double>::infinity();
    cb.for_each([&](std::size_t i) {
      if (omega[i]) ++hits;
      dmin = std::min(dmin, dist[i]);
    });
    if (hits == 0) continue;
    if (hits == cb.count() && dmin >= 5.0 * R * q.diameter()) {
      res.cubes.push_back(q);
      res.clamped.push_back(false);
      continue;
    }
    if (q.is_finest()) {
      res.cubes.push_back(q);
      res.clamped.push_back(true);
      continue;
    }
    auto kids = children(q);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }

  std::vector<int> cover(omega.bits.size(), 0);
  for (const auto& q : res.cubes)
    cells_in(dilate(q, R), omega.grid).for_each([&](std::size_t i) { ++cover[i]; });
  res.overlap = *std::max_element(cover.begin(), cover.end());
  return res;
}

}  // namespace sparsedom
