#include "sparsedom/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "sparsedom/kernels.hpp"
#include "sparsedom/orlicz.hpp"

namespace sparsedom {

namespace {

bool box_inside(const CellBox& inner, const CellBox& outer) {
  for (int a = 0; a < 2; ++a)
    if (inner.lo[a] < outer.lo[a] || inner.hi[a] > outer.hi[a]) return false;
  return true;
}

std::string hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error(Errc::type_mismatch, "bad number '" + s + "'");
  return v;
}

// Smallest cube among the shifted grids whose cells contain the box.
DyadicCube covering_cube(const GridSpec& base, const CellBox& box) {
  const auto grids = shifted_grids(base);
  const Point x = base.cell_center(base.cell_index(box.lo[0], box.lo[1]));
  for (int level = base.finest_level; level >= 0; --level) {
    const double side = std::ldexp(base.side, -level);
    for (const GridSpec& g : grids) {
      DyadicCube q{g, level, {0, 0}};
      for (int a = 0; a < base.dim; ++a)
        q.index[a] = static_cast<std::int64_t>(std::floor((x[a] - g.side * g.shift[a] / 3.0) / side));
      if (box_inside(box, q.cells())) return q;
    }
  }
  return root_cube(base);
}

}  // namespace

CellBox SparseFamily::region(std::size_t q) const {
  if (dilation == 1.0) return cubes[q].cells();
  return cells_in(dilate(cubes[q], dilation), grid);
}

void SparseFamily::add(const DyadicCube& q, std::vector<std::size_t> witness) {
  std::sort(witness.begin(), witness.end());
  cubes.push_back(q);
  witnesses.push_back(std::move(witness));
}

SparseReport verify_sparse(const SparseFamily& s) {
  SparseReport r;
  std::vector<std::uint32_t> claims(s.grid.cell_count(), 0);
  for (std::size_t q = 0; q < s.size(); ++q) {
    const CellBox reg = s.region(q);
    std::size_t inside = 0;
    for (std::size_t i : s.witnesses[q]) {
      if (reg.contains(i))
        ++inside;
      else
        ++r.containment_violations;
      ++claims[i];
    }
    // correctly rounded quotient, so the comparison with eta is exact
    const double ratio = reg.empty() ? 0.0 : static_cast<double>(inside) / static_cast<double>(reg.count());
    r.worst_ratio = std::min(r.worst_ratio, ratio);
  }
  for (std::uint32_t c : claims)
    if (c > 1) r.overlap_violations += c - 1;
  r.ok = r.overlap_violations == 0 && r.containment_violations == 0 && r.worst_ratio >= s.eta;
  return r;
}

SampledFunction sparse_apply(const SparseFamily& s, const SampledFunction& f, double beta) {
  std::vector<CellBox> regions(s.size());
  std::vector<double> norms(s.size());
  kernels::parallel_for(s.size(), [&](std::size_t q) {
    regions[q] = s.region(q);
    norms[q] = luxemburg_norm(f, regions[q], beta);
  });
  SampledFunction out(f.grid, 0.0);
  for (std::size_t q = 0; q < s.size(); ++q) regions[q].for_each([&](std::size_t i) { out[i] += norms[q]; });
  return out;
}

double bilinear_form(const SparseFamily& s, const SampledFunction& f, const SampledFunction& g, double beta1,
                     double beta2) {
  std::vector<double> terms(s.size());
  kernels::parallel_for(s.size(), [&](std::size_t q) {
    const CellBox reg = s.region(q);
    const double nf = luxemburg_norm(f, reg, beta1);
    terms[q] = nf == 0.0 ? 0.0 : static_cast<double>(reg.count()) * f.grid.cell_measure() * nf *
                                     luxemburg_norm(g, reg, beta2);
  });
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

double oscillation(const SampledFunction& u, const CellBox& region) {
  if (region.empty()) throw Error(Errc::empty_region, "oscillation over an empty region");
  double mean = 0.0;
  region.for_each([&](std::size_t i) { mean += u[i]; });
  mean /= static_cast<double>(region.count());
  double s = 0.0;
  region.for_each([&](std::size_t i) { s += std::abs(u[i] - mean); });
  return s / static_cast<double>(region.count());
}

double oscillation(const SampledFunction& u, const DyadicCube& q) { return oscillation(u, q.cells()); }

SampledFunction g_operator(const SparseFamily& s, const SampledFunction& f, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Error(Errc::invalid_argument, "eps must lie in (0, 1]");
  const std::size_t total = f.grid.cell_count();
  std::vector<double> vals(s.size());
  kernels::parallel_for(s.size(), [&](std::size_t q) {
    const GeometricBox reg = dilate(s.cubes[q], s.dilation);
    double acc = 0.0;
    for (int k = 1;; ++k) {
      const CellBox big = cells_in(dilate(reg, std::ldexp(1.0, k)), f.grid);
      acc += std::exp2(-k * eps) * local_avg(f, big);
      if (big.count() == total) break;
    }
    vals[q] = acc;
  });
  SampledFunction out(f.grid, 0.0);
  for (std::size_t q = 0; q < s.size(); ++q) s.region(q).for_each([&](std::size_t i) { out[i] += vals[q]; });
  return out;
}

std::vector<DyadicCube> g_operator_cover(const SparseFamily& s) {
  const std::size_t total = s.grid.cell_count();
  std::vector<DyadicCube> out;
  for (std::size_t q = 0; q < s.size(); ++q) {
    const GeometricBox reg = dilate(s.cubes[q], s.dilation);
    for (int k = 1;; ++k) {
      const CellBox big = cells_in(dilate(reg, std::ldexp(1.0, k)), s.grid);
      out.push_back(covering_cube(s.grid, big));
      if (big.count() == total) break;
    }
  }
  return out;
}

std::vector<SparseFamily> resparsify(const GridSpec& grid, const std::vector<DyadicCube>& cubes) {
  using Key = std::tuple<int, std::int64_t, std::int64_t>;
  std::map<int, std::vector<DyadicCube>> by_grid;
  for (const auto& q : cubes) by_grid[q.grid.shift_id()].push_back(q);

  std::vector<SparseFamily> out;
  for (auto& [sid, list] : by_grid) {
    std::sort(list.begin(), list.end(), [](const DyadicCube& a, const DyadicCube& b) {
      return std::tie(a.level, a.index[1], a.index[0]) < std::tie(b.level, b.index[1], b.index[0]);
    });
    std::map<Key, std::size_t> kept;       // cube -> position in order
    std::vector<DyadicCube> order;
    std::vector<std::size_t> covered;      // cells of kept children
    std::vector<std::ptrdiff_t> owner;     // smallest kept ancestor
    for (const auto& r : list) {
      const Key key{r.level, r.index[0], r.index[1]};
      if (kept.count(key)) continue;
      std::ptrdiff_t anc = -1;
      DyadicCube up = r;
      while (up.level > 0) {
        up = parent(up);
        const auto it = kept.find(Key{up.level, up.index[0], up.index[1]});
        if (it != kept.end()) {
          anc = static_cast<std::ptrdiff_t>(it->second);
          break;
        }
      }
      const std::size_t rc = r.cells().count();
      if (anc >= 0) {
        const std::size_t ac = order[anc].cells().count();
        if (covered[anc] + rc > ac || 2 * (ac - covered[anc] - rc) < ac) continue;
        covered[anc] += rc;
      }
      kept[key] = order.size();
      order.push_back(r);
      covered.push_back(0);
      owner.push_back(anc);
    }
    SparseFamily fam;
    fam.grid = grid.unshifted();
    fam.eta = 0.5;
    std::vector<CellMask> holes(order.size());
    for (std::size_t q = 0; q < order.size(); ++q) holes[q] = CellMask(fam.grid);
    for (std::size_t q = 0; q < order.size(); ++q)
      if (owner[q] >= 0) order[q].cells().for_each([&](std::size_t i) { holes[owner[q]].set(i); });
    for (std::size_t q = 0; q < order.size(); ++q) {
      std::vector<std::size_t> w;
      order[q].cells().for_each([&](std::size_t i) {
        if (!holes[q][i]) w.push_back(i);
      });
      fam.add(order[q], std::move(w));
    }
    out.push_back(std::move(fam));
  }
  return out;
}

void write_family(std::ostream& os, const SparseFamily& s) {
  os << "sparse-family n=" << s.grid.dim << " m=" << s.grid.finest_level << " L=" << hex(s.grid.side)
     << " eta=" << hex(s.eta) << " dilation=" << hex(s.dilation) << " count=" << s.size() << '\n';
  for (std::size_t q = 0; q < s.size(); ++q) {
    const auto& c = s.cubes[q];
    os << c.grid.shift_id() << ' ' << c.level << ' ' << c.index[0];
    if (s.grid.dim == 2) os << ' ' << c.index[1];
    os << ' ' << s.witnesses[q].size();
    for (std::size_t i : s.witnesses[q]) os << ' ' << i;
    os << '\n';
  }
}

SparseFamily read_family(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(Errc::io_error, "missing sparse-family header");
  std::istringstream hs(line);
  std::string tag;
  hs >> tag;
  if (tag != "sparse-family") throw Error(Errc::type_mismatch, "not a sparse-family header");
  std::map<std::string, std::string> kv;
  for (std::string tok; hs >> tok;) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error(Errc::type_mismatch, "bad header token '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* k : {"n", "m", "L", "eta", "dilation", "count"})
    if (!kv.count(k)) throw Error(Errc::missing_required, std::string("header key ") + k);
  SparseFamily s;
  s.grid = GridSpec::make(std::stoi(kv["n"]), std::stoi(kv["m"]), parse_double(kv["L"]));
  s.eta = parse_double(kv["eta"]);
  s.dilation = parse_double(kv["dilation"]);
  const std::size_t count = std::stoul(kv["count"]);
  for (std::size_t q = 0; q < count; ++q) {
    if (!std::getline(is, line)) throw Error(Errc::io_error, "truncated sparse family");
    std::istringstream ls(line);
    int sid = 0;
    DyadicCube c;
    std::size_t wc = 0;
    ls >> sid >> c.level >> c.index[0];
    if (s.grid.dim == 2) ls >> c.index[1];
    ls >> wc;
    if (!ls) throw Error(Errc::type_mismatch, "bad cube line");
    c.grid = s.grid.with_shift_id(sid);
    std::vector<std::size_t> w(wc);
    for (auto& i : w) ls >> i;
    if (!ls) throw Error(Errc::type_mismatch, "bad witness list");
    s.cubes.push_back(c);
    s.witnesses.push_back(std::move(w));
  }
  return s;
}

}  // namespace sparsedom
