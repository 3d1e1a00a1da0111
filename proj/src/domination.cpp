#include "sparsedom/domination.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "sparsedom/functions.hpp"
#include "sparsedom/kernels.hpp"
#include "sparsedom/orlicz.hpp"

namespace sparsedom {

namespace {

std::vector<std::size_t> all_cells(const GridSpec& g) {
  std::vector<std::size_t> idx(g.cell_count());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return idx;
}

// Cells of the universe not in box, in increasing order.
std::vector<std::size_t> outside(const GridSpec& g, const CellBox& box) {
  std::vector<std::size_t> out;
  out.reserve(g.cell_count());
  for (std::size_t i = 0; i < g.cell_count(); ++i)
    if (!box.contains(i)) out.push_back(i);
  return out;
}

std::vector<DyadicCube> subcubes(const DyadicCube& q0, int level) {
  const int d = level - q0.level;
  const std::int64_t w = std::int64_t{1} << d;
  std::vector<DyadicCube> out;
  const std::int64_t ny = q0.grid.dim == 2 ? w : 1;
  out.reserve(static_cast<std::size_t>(w * ny));
  for (std::int64_t jy = 0; jy < ny; ++jy)
    for (std::int64_t jx = 0; jx < w; ++jx) {
      DyadicCube q = q0;
      q.level = level;
      q.index = {q0.index[0] * w + jx, q0.grid.dim == 2 ? q0.index[1] * w + jy : 0};
      out.push_back(q);
    }
  return out;
}

// sup over dyadic subcubes Q of Q0 containing the cell of value(Q, cells(Q))
template <class CubeValue>
SampledFunction local_sup(const DyadicCube& q0, const GridSpec& grid, CubeValue&& value) {
  SampledFunction out(grid, 0.0);
  for (int k = q0.level; k <= grid.finest_level; ++k) {
    const auto cubes = subcubes(q0, k);
    std::vector<CellBox> boxes(cubes.size());
    std::vector<double> vals(cubes.size());
    kernels::parallel_for(cubes.size(), [&](std::size_t q) {
      boxes[q] = cubes[q].cells();
      vals[q] = value(cubes[q], boxes[q]);
    });
    kernels::scatter_max_omp(boxes, vals, out.values);
  }
  return out;
}

SampledFunction scaled_symbol_product(const Symbol& b, double c, const SampledFunction& f) {
  SampledFunction out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.b[i] - c;
  return out;
}

SampledFunction abs_of(SampledFunction f) {
  for (auto& v : f.values) v = std::abs(v);
  return f;
}

void scatter(SampledFunction& dst, std::span<const std::size_t> idx, std::span<const double> vals, double sign = 1.0) {
  for (std::size_t k = 0; k < idx.size(); ++k) dst[idx[k]] += sign * vals[k];
}

std::string hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

}  // namespace

// ---- local maximal functions ----------------------------------------------------

LocalMaximals local_grand_maximals(const DyadicCube& q0, const SampledFunction& f, const LinearOperator& t1,
                                   const LinearOperator& t2, const Symbol* b) {
  const GridSpec& g = f.grid;
  const CellBox r3 = cells_in(dilate(q0, 3.0), g);
  const CellBox r9 = cells_in(dilate(q0, 9.0), g);
  LocalMaximals out;
  const SingleProbe p2(t2, f, r3);
  out.m_t2 = local_sup(q0, g, p2);
  const CompositeProbe p12(t1, t2, f, r9);
  out.m_t1t2 = local_sup(q0, g, p12);
  if (b) {
    const Commutator t2b(t2, b->b);
    const CompositeProbe p12b(t1, t2b, f, r9);
    out.m_t1t2b = local_sup(q0, g, p12b);
  }
  return out;
}

// ---- stages -----------------------------------------------------------------------

StageContext make_stage(const DyadicCube& q0, const SampledFunction& f, const LinearOperator& t1,
                        const LinearOperator& t2, const Symbol* b) {
  const GridSpec& g = f.grid;
  StageContext ctx;
  ctx.q0 = q0;
  ctx.variant = b ? DominationVariant::commutator : DominationVariant::composition;
  ctx.cells = q0.cells();
  const CellBox r9 = cells_in(dilate(q0, 9.0), g);
  ctx.ref_llogl2 = luxemburg_norm(f, r9, 2.0);
  ctx.ref_llogl = luxemburg_norm(f, r9, 1.0);
  ctx.ref_avg = local_avg(f, r9);

  const auto src = r9.indices();
  const auto dst = ctx.cells.indices();
  ctx.target = SampledFunction(g);
  if (b) {
    double s = 0.0;
    ctx.cells.for_each([&](std::size_t i) { s += b->b[i]; });
    ctx.b_mean = s / static_cast<double>(ctx.cells.count());
    const Commutator t1b(t1, b->b);
    const Composition u(t1b, t2);
    scatter(ctx.target, dst, u.apply_restricted(f, src, dst));
  } else {
    const Composition u(t1, t2);
    scatter(ctx.target, dst, u.apply_restricted(f, src, dst));
  }

  const LocalMaximals lm = local_grand_maximals(q0, f, t1, t2, b);
  if (b) {
    ctx.tests.emplace_back(abs_of(ctx.target), ctx.ref_llogl2);
    ctx.tests.emplace_back(lm.m_t2, ctx.ref_avg);
    ctx.tests.emplace_back(lm.m_t1t2, ctx.ref_llogl);
    ctx.tests.emplace_back(lm.m_t1t2b, ctx.ref_llogl2);
    const SampledFunction fb = scaled_symbol_product(*b, ctx.b_mean, f);
    const CompositeProbe p5(t1, t2, fb, r9);
    ctx.tests.emplace_back(local_sup(q0, g, p5), ctx.ref_llogl2);
  } else {
    ctx.tests.emplace_back(abs_of(ctx.target), ctx.ref_llogl);
    ctx.tests.emplace_back(lm.m_t2, ctx.ref_avg);
    ctx.tests.emplace_back(lm.m_t1t2, ctx.ref_llogl);
  }
  return ctx;
}

CellMask exceptional_set(const StageContext& ctx, double d) {
  CellMask e(ctx.target.grid);
  ctx.cells.for_each([&](std::size_t i) {
    for (const auto& [vals, ref] : ctx.tests)
      if (vals[i] > d * ref) {
        e.set(i);
        break;
      }
  });
  return e;
}

double choose_threshold(const StageContext& ctx) {
  const std::size_t cap = ctx.cells.count();
  const int n = ctx.q0.grid.dim;
  for (int k = 0; k <= 64; ++k) {
    const double d = std::ldexp(1.0, k);
    const std::size_t cnt = exceptional_set(ctx, d).count();
    if ((cnt << (n + 2)) <= cap) return d;
  }
  throw Error(Errc::unreachable_threshold, "exceptional set stays large for D up to 2^64");
}

StageSplit decompose_once(const StageContext& ctx, const CellMask& e, const SampledFunction& f,
                          const LinearOperator& t1, const LinearOperator& t2, const Symbol* b) {
  const GridSpec& g = f.grid;
  const int n = g.dim;
  if ((e.count() << (n + 2)) > ctx.cells.count())
    throw Error(Errc::invalid_argument, "exceptional set exceeds 2^{-(n+2)} |Q0|");

  StageSplit out;
  // stopping time: maximal subcubes with |P cap E| > 2^{-(n+1)} |P|
  std::vector<DyadicCube> stack{ctx.q0};
  while (!stack.empty()) {
    const DyadicCube q = stack.back();
    stack.pop_back();
    if (!(q == ctx.q0)) {
      std::size_t hit = 0;
      const CellBox c = q.cells();
      c.for_each([&](std::size_t i) { hit += e[i] ? 1 : 0; });
      if (hit == 0) continue;
      if ((hit << (n + 1)) > c.count()) {
        out.stops.push_back(q);
        continue;
      }
    }
    if (q.is_finest()) continue;
    auto kids = children(q);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  std::sort(out.stops.begin(), out.stops.end(), [](const DyadicCube& a, const DyadicCube& b) {
    return std::tie(a.level, a.index[1], a.index[0]) < std::tie(b.level, b.index[1], b.index[0]);
  });

  const bool comm = b != nullptr;
  const std::size_t nparts = comm ? 3 : 2;
  out.parts.assign(nparts, SampledFunction(g));
  SampledFunction& g0 = out.parts[0];
  SampledFunction& g2 = out.parts[nparts - 1];

  // the target on Q0 minus the stops
  CellMask stopped(g);
  for (const auto& p : out.stops) p.cells().for_each([&](std::size_t i) { stopped.set(i); });
  ctx.cells.for_each([&](std::size_t i) {
    if (!stopped[i]) g0[i] = ctx.target[i];
  });
  if (out.stops.empty()) return out;

  const auto all = all_cells(g);
  const auto src9 = cells_in(dilate(ctx.q0, 9.0), g).indices();
  // T2, T_{2,b} and T2((b - c) .) of f chi_{9Q0}; per stop the 9P piece is subtracted
  const SampledFunction v0(g, t2.apply_restricted(f, src9, all));
  std::optional<Commutator> t2b, t1b;
  SampledFunction fb, w0, u0;
  if (comm) {
    t2b.emplace(t2, b->b);
    t1b.emplace(t1, b->b);
    fb = scaled_symbol_product(*b, ctx.b_mean, f);
    w0 = SampledFunction(g, t2b->apply_restricted(f, src9, all));
    u0 = SampledFunction(g, t2.apply_restricted(fb, src9, all));
  }

  for (const auto& p : out.stops) {
    const auto sp = cells_in(dilate(p, 9.0), g).indices();
    const CellBox r3 = cells_in(dilate(p, 3.0), g);
    const auto in3 = r3.indices();
    const auto out3 = outside(g, r3);
    const auto dst = p.cells().indices();

    // v = T2(f chi_{9Q0 minus 9P})
    SampledFunction v = v0;
    const auto near = t2.apply_restricted(f, sp, all);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= near[i];

    const auto far = t1.apply_restricted(v, out3, dst);  // T1(chi_{out 3P} v) on P
    if (comm) {
      SampledFunction w = w0;
      const auto wn = t2b->apply_restricted(f, sp, all);
      const auto un = t2.apply_restricted(fb, sp, all);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += (u0[i] - un[i]) - wn[i];
      scatter(g0, dst, t1.apply_restricted(w, out3, dst), -1.0);
      for (std::size_t k = 0; k < dst.size(); ++k) out.parts[1][dst[k]] += (b->b[dst[k]] - ctx.b_mean) * far[k];
      scatter(g2, dst, t1b->apply_restricted(v, in3, dst));
    } else {
      scatter(g0, dst, far);
      scatter(g2, dst, t1.apply_restricted(v, in3, dst));
    }
  }
  return out;
}

// ---- driver -----------------------------------------------------------------------

SampledFunction DominationResult::sum() const {
  SampledFunction s(family.grid);
  for (const auto& p : parts)
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += p[i];
  return s;
}

namespace {

DominationResult dominate(const LinearOperator& t1, const LinearOperator& t2, const SampledFunction& f,
                          const Symbol* b) {
  const GridSpec g = f.grid.unshifted();
  if (!t1.grid().same_cells(g) || !t2.grid().same_cells(g)) throw Error(Errc::grid_mismatch, "operator grid");
  if (!supported_in_central_ninth(f))
    throw Error(Errc::support_too_large, "f must vanish outside the central ninth of the box");

  DominationResult res;
  res.variant = b ? DominationVariant::commutator : DominationVariant::composition;
  res.root = root_cube(g);
  res.family.grid = g;
  res.family.dilation = 9.0;
  res.family.eta = 0.5 / std::pow(9.0, g.dim);
  res.parts.assign(b ? 3 : 2, SampledFunction(g));

  std::deque<std::pair<DyadicCube, int>> queue{{res.root, 0}};
  while (!queue.empty()) {
    const auto [q0, gen] = queue.front();
    queue.pop_front();
    const StageContext ctx = make_stage(q0, f, t1, t2, b);
    const double d = choose_threshold(ctx);
    const CellMask e = exceptional_set(ctx, d);
    StageSplit split = decompose_once(ctx, e, f, t1, t2, b);

    for (std::size_t j = 0; j < res.parts.size(); ++j)
      ctx.cells.for_each([&](std::size_t i) { res.parts[j][i] += split.parts[j][i]; });
    CellMask taken(g);
    for (const auto& p : split.stops) p.cells().for_each([&](std::size_t i) { taken.set(i); });
    std::vector<std::size_t> witness;
    ctx.cells.for_each([&](std::size_t i) {
      if (!taken[i]) witness.push_back(i);
    });
    res.family.add(q0, std::move(witness));
    res.thresholds.push_back(d);
    res.stage.push_back(gen);
    if (q0.is_finest()) ++res.clamp_count;
    for (const auto& p : split.stops) queue.emplace_back(p, gen + 1);
  }
  return res;
}

}  // namespace

DominationResult dominate_composition(const LinearOperator& t1, const LinearOperator& t2,
                                      const SampledFunction& f) {
  return dominate(t1, t2, f, nullptr);
}

DominationResult dominate_commutator_composition(const LinearOperator& t1, const Symbol& b,
                                                 const LinearOperator& t2, const SampledFunction& f) {
  if (b.b.values.empty()) throw Error(Errc::missing_symbol, "commutator composition needs a symbol");
  return dominate(t1, t2, f, &b);
}

double verify_reconstruction(const DominationResult& res, const SampledFunction& target) {
  const SampledFunction s = res.sum();
  double err = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) err = std::max(err, std::abs(s[i] - target[i]));
  return err / (target.sup_norm() + 1e-30);
}

std::pair<double, double> part_exponents(DominationVariant v, std::size_t j) {
  const double top = v == DominationVariant::commutator ? 2.0 : 1.0;
  return {top - static_cast<double>(j), static_cast<double>(j)};
}

namespace {

double pairing(const SampledFunction& u, const SampledFunction& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * g[i];
  return std::abs(s * u.grid.cell_measure());
}

}  // namespace

std::pair<double, double> domination_sides(const DominationResult& res, const SampledFunction& f,
                                           const SampledFunction& g) {
  const double lhs = pairing(res.sum(), g);
  double rhs = 0.0;
  for (std::size_t j = 0; j < res.parts.size(); ++j) {
    const auto [bf, bg] = part_exponents(res.variant, j);
    rhs += bilinear_form(res.family, f, g, bf, bg);
  }
  return {lhs, rhs};
}

double domination_ratio(const DominationResult& res, const SampledFunction& f, const SampledFunction& g) {
  const auto [lhs, rhs] = domination_sides(res, f, g);
  if (rhs == 0.0) {
    if (lhs == 0.0) return 0.0;
    throw Error(Errc::invalid_argument, "zero sparse form against a nonzero pairing");
  }
  return lhs / rhs;
}

double part_ratio(const DominationResult& res, std::size_t j, const SampledFunction& f, const SampledFunction& g) {
  const double lhs = pairing(res.parts.at(j), g);
  const auto [bf, bg] = part_exponents(res.variant, j);
  const double rhs = bilinear_form(res.family, f, g, bf, bg);
  if (rhs == 0.0) {
    if (lhs == 0.0) return 0.0;
    throw Error(Errc::invalid_argument, "zero sparse form against a nonzero pairing");
  }
  return lhs / rhs;
}

// ---- serialization ----------------------------------------------------------------

void write_result(std::ostream& os, const DominationResult& res) {
  os << "domination variant=" << (res.variant == DominationVariant::commutator ? "commutator" : "composition")
     << " parts=" << res.parts.size() << " clamp=" << res.clamp_count << '\n';
  write_family(os, res.family);
  os << "thresholds";
  for (double d : res.thresholds) os << ' ' << hex(d);
  os << "\nstages";
  for (int s : res.stage) os << ' ' << s;
  os << '\n';
  for (std::size_t j = 0; j < res.parts.size(); ++j) {
    os << "part " << j << ' ' << res.parts[j].size() << '\n';
    for (double v : res.parts[j].values) os << hex(v) << '\n';
  }
}

DominationResult read_result(std::istream& is) {
  std::string line, tok;
  if (!std::getline(is, line)) throw Error(Errc::io_error, "empty domination result");
  std::istringstream hs(line);
  hs >> tok;
  if (tok != "domination") throw Error(Errc::type_mismatch, "not a domination result");
  DominationResult res;
  std::size_t nparts = 0;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
    if (k == "variant")
      res.variant = v == "commutator" ? DominationVariant::commutator : DominationVariant::composition;
    else if (k == "parts")
      nparts = std::stoul(v);
    else if (k == "clamp")
      res.clamp_count = std::stoul(v);
  }
  res.family = read_family(is);
  if (res.family.size() > 0) res.root = res.family.cubes.front();
  auto read_list = [&](const char* tag, auto&& push) {
    if (!std::getline(is, line)) throw Error(Errc::io_error, std::string("missing ") + tag);
    std::istringstream ls(line);
    ls >> tok;
    if (tok != tag) throw Error(Errc::type_mismatch, std::string("expected ") + tag);
    while (ls >> tok) push(tok);
  };
  read_list("thresholds", [&](const std::string& s) { res.thresholds.push_back(std::strtod(s.c_str(), nullptr)); });
  read_list("stages", [&](const std::string& s) { res.stage.push_back(std::stoi(s)); });
  for (std::size_t j = 0; j < nparts; ++j) {
    std::size_t idx = 0, count = 0;
    if (!std::getline(is, line)) throw Error(Errc::io_error, "missing part");
    std::istringstream ls(line);
    ls >> tok >> idx >> count;
    if (tok != "part" || idx != j || count != res.family.grid.cell_count())
      throw Error(Errc::type_mismatch, "bad part header");
    SampledFunction p(res.family.grid);
    for (std::size_t i = 0; i < count; ++i) {
      if (!std::getline(is, line)) throw Error(Errc::io_error, "truncated part");
      p[i] = std::strtod(line.c_str(), nullptr);
    }
    res.parts.push_back(std::move(p));
  }
  return res;
}

}  // namespace sparsedom
