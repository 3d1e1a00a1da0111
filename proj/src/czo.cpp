#include "sparsedom/czo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sparsedom/kernels.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom {

namespace {

std::vector<std::size_t> all_cells(const GridSpec& g) {
  std::vector<std::size_t> idx(g.cell_count());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return idx;
}

void check_grid(const GridSpec& a, const GridSpec& b) {
  if (!a.same_cells(b)) throw Error(Errc::grid_mismatch, "operator and function live on different grids");
}

double norm(const Point& z, int dim) { return dim == 2 ? std::hypot(z[0], z[1]) : std::abs(z[0]); }

}  // namespace

// ---- kernels ----------------------------------------------------------------

double Kernel::operator()(const Point& x, const Point& y) const {
  Point z{x[0] - y[0], dim == 2 ? x[1] - y[1] : 0.0};
  return (left ? left(x) : 1.0) * profile(z);
}

Kernel make_kernel(const std::string& name, const GridSpec& grid, std::span<const double> params) {
  const double L = grid.side;
  Kernel k;
  k.name = name;
  k.dim = grid.dim;
  auto need_dim = [&](int d) {
    if (grid.dim != d)
      throw Error(Errc::invalid_argument, "kernel '" + name + "' needs dimension " + std::to_string(d));
  };
  auto riesz = [](int axis) {
    return [axis](const Point& z) {
      const double r = std::hypot(z[0], z[1]);
      return z[axis] / (2.0 * std::numbers::pi * r * r * r);
    };
  };
  if (name == "hilbert") {
    need_dim(1);
    k.size_constant = 1.0 / std::numbers::pi;
    k.profile = [](const Point& z) { return 1.0 / (std::numbers::pi * z[0]); };
  } else if (name == "periodic-hilbert") {
    need_dim(1);
    k.mode = KernelMode::periodic;
    k.size_constant = 1.0 / (2.0 * std::numbers::pi);
    k.profile = [L](const Point& z) { return 1.0 / (2.0 * L * std::tan(std::numbers::pi * z[0] / L)); };
  } else if (name == "riesz1" || name == "riesz2") {
    need_dim(2);
    k.size_constant = 1.0 / (2.0 * std::numbers::pi);
    k.profile = riesz(name == "riesz1" ? 0 : 1);
  } else if (name == "bump") {
    // Riesz-type profile times 1 + max(0, 1 - |x - c| / (L/4))^eps / 2,
    // which is Hoelder of order eps in x and not odd.
    const double eps = params.empty() ? 0.5 : params[0];
    if (!(eps > 0.0 && eps <= 1.0)) throw Error(Errc::invalid_argument, "bump exponent must lie in (0, 1]");
    k.epsilon = eps;
    k.odd = false;
    const Point c{0.5 * L, grid.dim == 2 ? 0.5 * L : 0.0};
    const int dim = grid.dim;
    k.left = [c, L, eps, dim](const Point& x) {
      const double r = norm(Point{x[0] - c[0], dim == 2 ? x[1] - c[1] : 0.0}, dim);
      return 1.0 + 0.5 * std::pow(std::max(0.0, 1.0 - r / (0.25 * L)), eps);
    };
    if (grid.dim == 1) {
      k.size_constant = 1.5 / std::numbers::pi;
      k.profile = [](const Point& z) { return 1.0 / (std::numbers::pi * z[0]); };
    } else {
      k.size_constant = 1.5 / (2.0 * std::numbers::pi);
      k.profile = riesz(0);
    }
  } else if (name == "zero") {
    k.size_constant = 0.0;
    k.profile = [](const Point&) { return 0.0; };
  } else {
    throw Error(Errc::unknown_name, "unknown kernel '" + name + "'");
  }
  return k;
}

// ---- LinearOperator -----------------------------------------------------------

SampledFunction LinearOperator::apply(const SampledFunction& f) const {
  check_grid(grid(), f.grid);
  const auto idx = all_cells(grid());
  SampledFunction out(grid());
  apply_block(f.values, idx, idx, out.values);
  return out;
}

SampledFunction LinearOperator::apply(const SampledFunction& f, const CellMask& support) const {
  check_grid(grid(), f.grid);
  check_grid(grid(), support.grid);
  const auto src = support.indices();
  const auto dst = all_cells(grid());
  SampledFunction out(grid());
  apply_block(f.values, src, dst, out.values);
  return out;
}

std::vector<double> LinearOperator::apply_restricted(const SampledFunction& f, std::span<const std::size_t> src,
                                                     std::span<const std::size_t> dst) const {
  check_grid(grid(), f.grid);
  std::vector<double> out(dst.size());
  apply_block(f.values, src, dst, out);
  return out;
}

// ---- CZOperator ---------------------------------------------------------------

CZOperator::CZOperator(Kernel kernel, const GridSpec& grid)
    : kernel_(std::make_shared<const Kernel>(std::move(kernel))), grid_(grid.unshifted()) {
  const Kernel& k = *kernel_;
  if (k.dim != grid_.dim) throw Error(Errc::grid_mismatch, "kernel dimension differs from the grid");
  if (k.mode == KernelMode::periodic && grid_.dim != 1)
    throw Error(Errc::invalid_argument, "periodic kernels are one-dimensional");
  const int S = grid_.cells_per_side();
  const double h = grid_.cell_side();
  const double hn = grid_.cell_measure();
  auto table = std::make_shared<std::vector<double>>();

  if (k.mode == KernelMode::periodic) {
    // residue table e = (i - j) mod N with the offset taken in (-N/2, N/2]
    const int N = S;
    table->assign(N, 0.0);
    for (int e = 1; e < N; ++e) {
      if (k.odd && e > N / 2) continue;
      const int d = e <= N / 2 ? e : e - N;
      (*table)[e] = k.profile(Point{d * h, 0.0}) * hn;
    }
    if (k.odd) {
      (*table)[N / 2] = 0.0;
      for (int e = 1; e < N / 2; ++e) (*table)[N - e] = -(*table)[e];
    }
  } else if (grid_.dim == 1) {
    table->assign(2 * S - 1, 0.0);
    for (int d = 1; d < S; ++d) {
      const double v = k.profile(Point{d * h, 0.0}) * hn;
      (*table)[S - 1 + d] = v;
      (*table)[S - 1 - d] = k.odd ? -v : k.profile(Point{-d * h, 0.0}) * hn;
    }
  } else {
    const int W = 2 * S - 1;
    table->assign(static_cast<std::size_t>(W) * W, 0.0);
    for (int dy = -(S - 1); dy < S; ++dy)
      for (int dx = -(S - 1); dx < S; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const bool canonical = dy > 0 || (dy == 0 && dx > 0);
        if (k.odd && !canonical) continue;
        const double v = k.profile(Point{dx * h, dy * h}) * hn;
        (*table)[(dx + S - 1) + static_cast<std::size_t>(W) * (dy + S - 1)] = v;
        if (k.odd) (*table)[(-dx + S - 1) + static_cast<std::size_t>(W) * (-dy + S - 1)] = -v;
      }
  }
  offsets_ = table;

  if (k.left) {
    auto left = std::make_shared<std::vector<double>>(grid_.cell_count());
    for (std::size_t i = 0; i < left->size(); ++i) (*left)[i] = k.left(grid_.cell_center(i));
    left_ = left;
  }
}

double CZOperator::raw(std::size_t i, std::size_t j) const {
  const int S = grid_.cells_per_side();
  double v;
  if (grid_.dim == 1) {
    const auto d = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j);
    if (kernel_->mode == KernelMode::periodic)
      v = (*offsets_)[static_cast<std::size_t>(d < 0 ? d + S : d)];
    else
      v = (*offsets_)[static_cast<std::size_t>(d + S - 1)];
  } else {
    const int dx = static_cast<int>(i % S) - static_cast<int>(j % S);
    const int dy = static_cast<int>(i / S) - static_cast<int>(j / S);
    v = (*offsets_)[(dx + S - 1) + static_cast<std::size_t>(2 * S - 1) * (dy + S - 1)];
  }
  return left_ ? (*left_)[i] * v : v;
}

void CZOperator::apply_block(std::span<const double> g, std::span<const std::size_t> src,
                             std::span<const std::size_t> dst, std::span<double> out) const {
  kernels::gather_apply_omp([this](std::size_t i, std::size_t j) { return coef(i, j); }, g, src, dst, out);
}

SampledFunction CZOperator::apply(const SampledFunction& f) const {
  check_grid(grid_, f.grid);
  SampledFunction out(grid_);
  if (kernel_->mode == KernelMode::periodic && kernel_->odd && !left_) {
    kernels::odd_circulant_apply_omp(*offsets_, f.values, out.values);
    if (transposed_)
      for (auto& v : out.values) v = -v;
    return out;
  }
  const auto idx = all_cells(grid_);
  apply_block(f.values, idx, idx, out.values);
  return out;
}

SampledFunction CZOperator::apply_serial(const SampledFunction& f) const {
  check_grid(grid_, f.grid);
  SampledFunction out(grid_);
  if (kernel_->mode == KernelMode::periodic && kernel_->odd && !left_) {
    kernels::odd_circulant_apply_serial(*offsets_, f.values, out.values);
    if (transposed_)
      for (auto& v : out.values) v = -v;
    return out;
  }
  const auto idx = all_cells(grid_);
  kernels::gather_apply_serial([this](std::size_t i, std::size_t j) { return coef(i, j); }, f.values, idx, idx,
                               out.values);
  return out;
}

CZOperator CZOperator::adjoint() const {
  CZOperator t = *this;
  t.transposed_ = !transposed_;
  return t;
}

bool CZOperator::annihilates_constants() const {
  return kernel_->mode == KernelMode::periodic && kernel_->odd && !left_;
}

double CZOperator::distance(std::size_t i, std::size_t j) const {
  const int S = grid_.cells_per_side();
  const double h = grid_.cell_side();
  if (grid_.dim == 1) {
    auto d = std::abs(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j));
    if (kernel_->mode == KernelMode::periodic) d = std::min<std::ptrdiff_t>(d, S - d);
    return static_cast<double>(d) * h;
  }
  const double dx = static_cast<int>(i % S) - static_cast<int>(j % S);
  const double dy = static_cast<int>(i / S) - static_cast<int>(j / S);
  return std::hypot(dx, dy) * h;
}

// ---- Commutator / Composition --------------------------------------------------

Commutator::Commutator(const LinearOperator& op, SampledFunction b) : op_(&op), b_(std::move(b)) {
  check_grid(op.grid(), b_.grid);
}

void Commutator::apply_block(std::span<const double> g, std::span<const std::size_t> src,
                             std::span<const std::size_t> dst, std::span<double> out) const {
  std::vector<double> bg(g.size());
  for (std::size_t j : src) bg[j] = b_[j] * g[j];
  std::vector<double> tbg(dst.size());
  op_->apply_block(g, src, dst, out);
  op_->apply_block(bg, src, dst, tbg);
  for (std::size_t k = 0; k < dst.size(); ++k) out[k] = b_[dst[k]] * out[k] - tbg[k];
}

SampledFunction Commutator::apply(const SampledFunction& f) const {
  SampledFunction bf = f;
  for (std::size_t i = 0; i < bf.size(); ++i) bf[i] *= b_[i];
  SampledFunction out = op_->apply(f);
  const SampledFunction tbf = op_->apply(bf);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = b_[i] * out[i] - tbf[i];
  return out;
}

Composition::Composition(const LinearOperator& outer, const LinearOperator& inner)
    : outer_(&outer), inner_(&inner) {
  check_grid(outer.grid(), inner.grid());
}

void Composition::apply_block(std::span<const double> g, std::span<const std::size_t> src,
                              std::span<const std::size_t> dst, std::span<double> out) const {
  const auto idx = all_cells(grid());
  std::vector<double> mid(idx.size());
  inner_->apply_block(g, src, idx, mid);
  outer_->apply_block(mid, idx, dst, out);
}

SampledFunction Composition::apply(const SampledFunction& f) const { return outer_->apply(inner_->apply(f)); }

// ---- symbols ------------------------------------------------------------------

Symbol symbol_gallery(const std::string& name, std::span<const double> params, const GridSpec& grid) {
  const GridSpec g = grid.unshifted();
  const double L = g.side;
  Symbol s{SampledFunction(g), false};
  if (name == "log") {
    // centre snapped to a cell boundary, like the power weights
    const double h = g.cell_side();
    const double x0 = std::round((params.empty() ? 0.5 : params[0]) * L / h) * h;
    const Point c{x0, 0.5 * L};
    for (std::size_t i = 0; i < s.b.size(); ++i) {
      const Point x = g.cell_center(i);
      s.b[i] = std::log(norm(Point{x[0] - c[0], g.dim == 2 ? x[1] - c[1] : 0.0}, g.dim));
    }
  } else if (name == "sawtooth") {
    const int K = params.empty() ? 4 : static_cast<int>(params[0]);
    if (K < 1) throw Error(Errc::invalid_argument, "sawtooth needs at least one term");
    for (std::size_t i = 0; i < s.b.size(); ++i) {
      const double x = g.cell_center(i)[0] / L;
      double v = 0.0;
      for (int k = 0; k < K; ++k) {
        const double t = std::ldexp(x, k);
        v += t - std::floor(t) - 0.5;
      }
      s.b[i] = v;
    }
  } else if (name == "constant") {
    const double c = params.empty() ? 1.0 : params[0];
    for (auto& v : s.b.values) v = c;
    return s;
  } else {
    throw Error(Errc::unknown_name, "unknown symbol '" + name + "'");
  }
  for (double v : s.b.values)
    if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "symbol is singular at a cell midpoint");
  const double n = bmo_norm(s.b);
  if (n > 0.0) {
    for (auto& v : s.b.values) v /= n;
    s.normalized = true;
  }
  return s;
}

// ---- applications ---------------------------------------------------------------

SampledFunction adjoint_apply(const CZOperator& t, const SampledFunction& g) { return t.adjoint().apply(g); }

SampledFunction commutator_apply(const CZOperator& t, const Symbol& b, const SampledFunction& f) {
  return Commutator(t, b.b).apply(f);
}

SampledFunction commutator_apply(const CZOperator& t, const Symbol& b, const SampledFunction& f,
                                 const CellMask& support) {
  return Commutator(t, b.b).apply(f, support);
}

std::vector<double> truncation_radii(const GridSpec& grid) {
  std::vector<double> r(grid.finest_level + 1);
  for (int k = 0; k <= grid.finest_level; ++k) r[k] = std::ldexp(grid.cell_side(), k);
  return r;
}

namespace {

// Shared bucketed truncation: contributions with distance in (r_k, r_{k+1}]
// go to bucket k; the truncated sum at radius r_k is the suffix sum from k.
SampledFunction bucketed_truncation(const CZOperator& t, const SampledFunction& f, const SampledFunction* b) {
  check_grid(t.grid(), f.grid);
  const GridSpec& g = t.grid();
  const auto radii = truncation_radii(g);
  const int K = static_cast<int>(radii.size());
  const std::size_t N = g.cell_count();
  SampledFunction out(g);
  kernels::parallel_for(N, [&](std::size_t i) {
    std::vector<double> bucket(K, 0.0);
    for (std::size_t j = 0; j < N; ++j) {
      if (j == i) continue;
      const double d = t.distance(i, j);
      int k = -1;
      while (k + 1 < K && d > radii[k + 1]) ++k;
      if (k < 0) continue;
      const double a = t.coef(i, j) * f[j];
      bucket[k] += b ? ((*b)[i] - (*b)[j]) * a : a;
    }
    double acc = 0.0, best = 0.0;
    for (int k = K - 1; k >= 0; --k) {
      acc += bucket[k];
      best = std::max(best, std::abs(acc));
    }
    out[i] = best;
  });
  return out;
}

}  // namespace

SampledFunction truncated_maximal(const CZOperator& t, const SampledFunction& f) {
  return bucketed_truncation(t, f, nullptr);
}

SampledFunction maximal_commutator(const CZOperator& t, const Symbol& b, const SampledFunction& f) {
  check_grid(t.grid(), b.b.grid);
  return bucketed_truncation(t, f, &b.b);
}

SampledFunction truncated_maximal_reference(const CZOperator& t, const SampledFunction& f, const SampledFunction* b) {
  const GridSpec& g = t.grid();
  const auto radii = truncation_radii(g);
  SampledFunction out(g);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    double best = 0.0;
    for (double r : radii) {
      double s = 0.0;
      for (std::size_t j = 0; j < g.cell_count(); ++j) {
        if (j == i || !(t.distance(i, j) > r)) continue;
        const double a = t.coef(i, j) * f[j];
        s += b ? ((*b)[i] - (*b)[j]) * a : a;
      }
      best = std::max(best, std::abs(s));
    }
    out[i] = best;
  }
  return out;
}

// ---- grand maximal functions ------------------------------------------------------

SingleProbe::SingleProbe(const LinearOperator& t, const SampledFunction& f, const CellBox& region)
    : t_(&t), f_(&f) {
  const auto src = region.indices();
  const auto dst = all_cells(t.grid());
  full_ = SampledFunction(t.grid(), t.apply_restricted(f, src, dst));
}

double SingleProbe::operator()(const DyadicCube& q, const CellBox& cells) const {
  const auto src = cells_in(dilate(q, 3.0), f_->grid).indices();
  const auto dst = cells.indices();
  const auto near = t_->apply_restricted(*f_, src, dst);
  double best = 0.0;
  for (std::size_t k = 0; k < dst.size(); ++k) best = std::max(best, std::abs(full_[dst[k]] - near[k]));
  return best;
}

CompositeProbe::CompositeProbe(const LinearOperator& t1, const LinearOperator& t2, const SampledFunction& f,
                               const CellBox& region)
    : t1_(&t1), t2_(&t2), f_(&f) {
  const auto src = region.indices();
  const auto all = all_cells(t1.grid());
  inner_ = SampledFunction(t2.grid(), t2.apply_restricted(f, src, all));
  outer_ = SampledFunction(t1.grid(), t1.apply_restricted(inner_, all, all));
}

double CompositeProbe::operator()(const DyadicCube& q, const CellBox& cells) const {
  const GridSpec& g = f_->grid;
  const auto all = all_cells(g);
  const auto src9 = cells_in(dilate(q, 9.0), g).indices();
  // w = T2(f chi_{9Q}); T2(f chi_{A minus 9Q}) = inner - w
  SampledFunction v(g, t2_->apply_restricted(*f_, src9, all));
  // T1(chi_{out 3Q}(inner - w)) = T1(inner) - T1(chi_{out 3Q} w + chi_{3Q} inner)
  cells_in(dilate(q, 3.0), g).for_each([&](std::size_t i) { v[i] = inner_[i]; });
  const auto dst = cells.indices();
  const auto tv = t1_->apply_restricted(v, all, dst);
  double best = 0.0;
  for (std::size_t k = 0; k < dst.size(); ++k) best = std::max(best, std::abs(outer_[dst[k]] - tv[k]));
  return best;
}

SampledFunction grand_maximal(const LinearOperator& t, const SampledFunction& f) {
  check_grid(t.grid(), f.grid);
  const SingleProbe probe(t, f, root_cube(f.grid).cells());
  return dyadic_sup(f.grid, MaximalScope::all_shifted, probe);
}

SampledFunction grand_composite(const LinearOperator& t1, const CZOperator& t2, const SampledFunction& f,
                                const Symbol* b) {
  check_grid(t1.grid(), f.grid);
  const CellBox box = root_cube(f.grid).cells();
  if (b) {
    const Commutator inner(t2, b->b);
    const CompositeProbe probe(t1, inner, f, box);
    return dyadic_sup(f.grid, MaximalScope::all_shifted, probe);
  }
  const CompositeProbe probe(t1, t2, f, box);
  return dyadic_sup(f.grid, MaximalScope::all_shifted, probe);
}

// ---- kernel conditions ---------------------------------------------------------

KernelReport kernel_conditions_check(const Kernel& k, const GridSpec& grid, std::size_t samples,
                                     std::uint64_t seed) {
  if (samples < 100) throw Error(Errc::invalid_argument, "kernel check needs at least 100 samples");
  const double L = grid.side;
  const int n = grid.dim;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto point = [&] { return Point{L * U(rng), n == 2 ? L * U(rng) : 0.0}; };
  auto dist = [&](const Point& a, const Point& b) {
    double dx = std::abs(a[0] - b[0]);
    if (k.mode == KernelMode::periodic) dx = std::min(dx, L - dx);
    return n == 2 ? std::hypot(dx, a[1] - b[1]) : dx;
  };
  auto perturb = [&](const Point& y, double r) {
    // random offset of length r * u, u log-uniform in [1e-4, 1]
    const double len = r * std::pow(10.0, -4.0 * U(rng));
    const double th = 2.0 * std::numbers::pi * U(rng);
    Point p = y;
    if (n == 1)
      p[0] += (U(rng) < 0.5 ? -len : len);
    else {
      p[0] += len * std::cos(th);
      p[1] += len * std::sin(th);
    }
    return p;
  };
  KernelReport rep;
  rep.samples = samples;
  const double e = k.epsilon;
  for (std::size_t s = 0; s < samples; ++s) {
    const Point x = point(), y = point();
    const double r = dist(x, y);
    if (r == 0.0) continue;
    rep.size_ratio = std::max(rep.size_ratio, std::abs(k(x, y)) * std::pow(r, n));
    const Point y2 = perturb(y, 0.5 * r);
    const double dy = dist(y, y2);
    if (dy > 0.0)
      rep.regularity_y = std::max(rep.regularity_y, std::abs(k(x, y) - k(x, y2)) * std::pow(r, n + e) / std::pow(dy, e));
    const Point x2 = perturb(x, 0.5 * r);
    const double dx = dist(x, x2);
    if (dx > 0.0)
      rep.regularity_x = std::max(rep.regularity_x, std::abs(k(x, y) - k(x2, y)) * std::pow(r, n + e) / std::pow(dx, e));
  }
  return rep;
}

// ---- Calderon-Zygmund splitting ---------------------------------------------------

CZDecomposition cz_decompose(const SampledFunction& f, double level, double R) {
  if (!(level > 0.0)) throw Error(Errc::invalid_argument, "decomposition level must be positive");
  const GridSpec& g = f.grid;
  const SampledFunction mf = maximal(f);
  CellMask omega(g);
  for (std::size_t i = 0; i < g.cell_count(); ++i)
    if (mf[i] > level) omega.set(i);
  CZDecomposition out;
  out.good = f;
  if (omega.empty()) return out;
  if (omega.count() == g.cell_count())
    throw Error(Errc::superlevel_set_full, "the maximal function exceeds the level everywhere");
  const WhitneyResult w = whitney_decompose(omega, R);
  out.overlap = w.overlap;
  for (std::size_t q = 0; q < w.cubes.size(); ++q) {
    const CellBox cells = w.cubes[q].cells();
    double sum = 0.0;
    cells.for_each([&](std::size_t i) { sum += f[i]; });
    const double avg = sum / static_cast<double>(cells.count());
    BadPart part{w.cubes[q], w.clamped[q], SampledFunction(g)};
    cells.for_each([&](std::size_t i) {
      part.h[i] = f[i] - avg;
      out.good[i] = avg;
    });
    out.bad.push_back(std::move(part));
  }
  return out;
}

double mean_zero_decay_ratio(const CZOperator& t, const BadPart& part) {
  const GridSpec& g = part.h.grid;
  const double l1 = part.h.l1_norm();
  if (l1 == 0.0) return 0.0;
  const CellBox five = cells_in(dilate(part.cube, 5.0), g);
  std::vector<std::size_t> dst;
  for (std::size_t i = 0; i < g.cell_count(); ++i)
    if (!five.contains(i)) dst.push_back(i);
  if (dst.empty()) return 0.0;
  const auto src = part.cube.cells().indices();
  const auto th = t.apply_restricted(part.h, src, dst);
  const Point z = part.cube.center();
  const double e = t.kernel().epsilon;
  const int n = g.dim;
  double best = 0.0;
  for (std::size_t k = 0; k < dst.size(); ++k) {
    const Point y = g.cell_center(dst[k]);
    const double r = n == 2 ? std::hypot(y[0] - z[0], y[1] - z[1]) : std::abs(y[0] - z[0]);
    best = std::max(best, std::abs(th[k]) * std::pow(r, n + e));
  }
  return best / (std::pow(part.cube.side(), e) * l1);
}

}  // namespace sparsedom
