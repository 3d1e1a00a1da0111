#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "sparsedom/cli.hpp"
#include "sparsedom/domination.hpp"
#include "sparsedom/functions.hpp"
#include "sparsedom/orlicz.hpp"

namespace sparsedom {

namespace {

class Suite {
 public:
  // fn returns an empty string on success, otherwise a short diagnostic.
  void check(const std::string& name, const std::function<std::string()>& fn) {
    SelfCheck c{name, false, ""};
    try {
      c.detail = fn();
      c.pass = c.detail.empty();
    } catch (const std::exception& e) {
      c.detail = std::string("threw ") + e.what();
    }
    out.push_back(std::move(c));
  }

  void expect_error(const std::string& name, Errc code, const std::function<void()>& fn) {
    check(name, [&]() -> std::string {
      try {
        fn();
      } catch (const Error& e) {
        return e.code() == code ? "" : std::string("wrong code ") + errc_name(e.code());
      }
      return "no error raised";
    });
  }

  std::vector<SelfCheck> out;
};

std::string fail_if(bool bad, const std::string& what) { return bad ? what : ""; }

std::string near(double a, double b, double rel, const char* what) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (std::abs(a - b) <= rel * scale) return "";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: %.17g vs %.17g", what, a, b);
  return buf;
}

double max_abs(const SampledFunction& f) { return f.sup_norm(); }

double max_diff(const SampledFunction& a, const SampledFunction& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

SampledFunction gaussian(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  SampledFunction f(g);
  for (auto& v : f.values) v = N(rng);
  return f;
}

SampledFunction indicator_of(const GridSpec& g, const CellBox& box) {
  SampledFunction f(g);
  box.for_each([&](std::size_t i) { f[i] = 1.0; });
  return f;
}

double inner(const SampledFunction& a, const SampledFunction& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(s * a.grid.cell_measure());
}

CZOperator op(const char* name, const GridSpec& g, std::vector<double> params = {}) {
  return CZOperator(make_kernel(name, g, params), g);
}

void grid_checks(Suite& s) {
  const GridSpec g1 = GridSpec::make(1, 4, 1.0), g2 = GridSpec::make(2, 3, 1.0);
  s.check("children/bisection", [&] {
    const auto ch = children(root_cube(g1));
    return fail_if(ch.size() != 2 || ch[0].lower(0) != 0.0 || ch[1].lower(0) != 0.5 || ch[0].side() != 0.5,
                   "children of [0,1) are not [0,1/2) and [1/2,1)");
  });
  s.check("children/2d-quarters", [&] {
    const auto ch = children(root_cube(g2));
    for (const auto& c : ch)
      if (c.measure() != 0.25) return std::string("quarter of wrong measure");
    return fail_if(ch.size() != 4, "expected 4 children");
  });
  s.check("children/measure-partition", [&] {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
      const int level = static_cast<int>(rng() % 3);
      const std::int64_t n = std::int64_t{1} << level;
      const DyadicCube q{g2, level, {static_cast<std::int64_t>(rng() % n), static_cast<std::int64_t>(rng() % n)}};
      double sum = 0.0;
      for (const auto& c : children(q)) sum += c.measure();
      if (sum != q.measure()) return std::string("child measures do not sum to |Q|");
    }
    return std::string();
  });
  s.check("dilate/identity", [&] {
    const DyadicCube q{g1, 2, {1, 0}};
    const GeometricBox b = dilate(q, 1.0);
    return fail_if(b.side != q.side() || b.center[0] != q.center()[0], "lam=1 box differs from Q");
  });
  s.check("dilate/three", [&] {
    const GeometricBox b = dilate(DyadicCube{g1, 2, {1, 0}}, 3.0);
    return fail_if(b.center[0] != 0.375 || b.side != 0.75, "3[1/4,1/2) is not centred 3/8 with side 3/4");
  });
  s.check("dilate/nine-measure", [&] {
    const DyadicCube q{g2, 2, {1, 2}};
    return near(dilate(q, 9.0).measure(), 81.0 * q.measure(), 1e-15, "|9Q|");
  });
  s.check("cells_in/ambient", [&] {
    return fail_if(cells_in(as_box(root_cube(g2)), g2).count() != g2.cell_count(), "ambient box misses cells");
  });
  s.check("cells_in/empty", [&] {
    GeometricBox b;
    b.dim = 1;
    b.center = {5.0, 0.0};
    b.side = 0.5;
    return fail_if(!cells_in(b, g1).empty(), "disjoint box selects cells");
  });
  s.check("cells_in/half", [&] {
    GeometricBox b;
    b.dim = 1;
    b.center = {0.25, 0.0};
    b.side = 0.5;
    return fail_if(cells_in(b, g1).count() != 8, "[0,1/2) on 16 cells is not 8 cells");
  });
  s.check("shifted_grids/1d", [&] { return fail_if(shifted_grids(g1).size() != 3, "expected 3 grids"); });
  s.check("shifted_grids/2d", [&] { return fail_if(shifted_grids(g2).size() != 9, "expected 9 grids"); });
  s.expect_error("whitney/empty-domain", Errc::empty_domain, [&] { whitney_decompose(CellMask(g1), 2.0); });
}

void orlicz_checks(Suite& s) {
  const GridSpec g = GridSpec::make(1, 5, 1.0);
  const DyadicCube q = root_cube(g);
  const SampledFunction left = indicator_of(g, children(q)[0].cells());
  s.check("local_avg/constant", [&] {
    const SampledFunction c(g, 3.0);
    for (double r : {0.5, 1.0, 2.0})
      if (auto e = near(local_avg(c, q, r), 3.0, 1e-14, "average of 3"); !e.empty()) return e;
    return std::string();
  });
  s.check("local_avg/half", [&] { return near(local_avg(left, q, 1.0), 0.5, 0, "<chi_left>"); });
  s.check("local_avg/root-half", [&] { return near(local_avg(left, q, 0.5), 0.25, 1e-15, "<chi_left>_{1/2}"); });
  s.check("luxemburg/beta0", [&] {
    const auto f = gaussian(g, 3);
    return fail_if(luxemburg_norm(f, q, 0.0) != local_avg(f, q, 1.0), "beta=0 differs from the average");
  });
  s.check("luxemburg/homogeneous", [&] {
    const auto f = gaussian(g, 4);
    SampledFunction f2 = f;
    for (auto& v : f2.values) v *= 2.0;
    return near(luxemburg_norm(f2, q, 1.0), 2.0 * luxemburg_norm(f, q, 1.0), 1e-9, "||2f||");
  });
  s.check("maximal/constant", [&] {
    const SampledFunction c(g, 2.5);
    return near(max_diff(maximal(c), c), 0.0, 1e-14, "M c - c");
  });
  s.check("maximal/orlicz-dominates", [&] {
    const auto f = gaussian(g, 5);
    const auto m0 = maximal(f), m1 = maximal(f, 1.0);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (m1[i] < m0[i] * (1 - 1e-12)) return std::string("M_{LlogL} f < M f");
    return std::string();
  });
  s.check("maximal-commutator/constant-b", [&] {
    return near(max_abs(maximal_commutator_mb(gaussian(g, 6), SampledFunction(g, 4.0))), 0.0, 0, "M_b f");
  });
  s.check("maximal-commutator/absolute", [&] {
    const auto f = gaussian(g, 7), b = gaussian(g, 8);
    SampledFunction af = f;
    for (auto& v : af.values) v = std::abs(v);
    const auto m = maximal_commutator_mb(f, b), ma = maximal_commutator_mb(af, b);
    for (double v : m.values)
      if (v < 0.0) return std::string("negative value");
    return fail_if(max_diff(m, ma) != 0.0, "M_b |f| differs from M_b f");
  });
}

void weight_checks(Suite& s) {
  const GridSpec g = GridSpec::make(1, 6, 1.0);
  const Weight one(SampledFunction(g, 1.0));
  const Weight pw = weight_gallery("power", std::vector<double>{0.5}, g);
  s.check("ap/unit", [&] {
    for (double p : {1.5, 2.0, 3.0})
      if (auto e = near(one.ap(p), 1.0, 1e-13, "[1]_Ap"); !e.empty()) return e;
    return std::string();
  });
  s.check("ap/at-least-one", [&] {
    for (double p : {1.5, 2.0, 3.0})
      if (pw.ap(p) < 1.0 - 1e-12) return std::string("[w]_Ap < 1");
    return std::string();
  });
  s.check("a1/constant", [&] { return near(Weight(SampledFunction(g, 3.0)).a1(), 1.0, 1e-13, "[3]_A1"); });
  s.check("a1/at-least-one", [&] { return fail_if(pw.a1() < 1.0 - 1e-12, "[w]_A1 < 1"); });
  s.check("dual/p2-reciprocal", [&] {
    const Weight d = dual_weight(pw, 2.0);
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      if (auto e = near(d[i], 1.0 / pw[i], 1e-15, "sigma"); !e.empty()) return e;
    return std::string();
  });
  s.check("dual/involution", [&] {
    const Weight dd = dual_weight(dual_weight(pw, 2.0), 2.0);
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      if (auto e = near(dd[i], pw[i], 1e-14, "sigma(sigma)"); !e.empty()) return e;
    return std::string();
  });
  s.check("dual/unit", [&] {
    const Weight d = dual_weight(one, 3.0);
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      if (d[i] != 1.0) return std::string("sigma of 1 is not 1");
    return std::string();
  });
  s.check("bmo/constant", [&] { return fail_if(bmo_norm(SampledFunction(g, 7.0)) != 0.0, "||c||_BMO != 0"); });
  s.check("bmo/shift-invariant", [&] {
    const auto b = gaussian(g, 9);
    SampledFunction bc = b;
    for (auto& v : bc.values) v += 3.0;
    return near(bmo_norm(bc), bmo_norm(b), 1e-12, "||b + c||_BMO");
  });
  s.check("weight-gallery/constant", [&] {
    const Weight w = weight_gallery("constant", std::vector<double>{5.0}, g);
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      if (w[i] != 5.0) return std::string("constant(5) is not 5");
    return std::string();
  });
  s.check("weight-gallery/power0", [&] {
    const Weight w = weight_gallery("power", std::vector<double>{0.0}, g);
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      if (w[i] != 1.0) return std::string("power(0) is not 1");
    return std::string();
  });
}

void czo_checks(Suite& s) {
  const GridSpec g = GridSpec::make(1, 6, 1.0);
  const CZOperator h = op("hilbert", g);
  const Symbol bc = symbol_gallery("constant", std::vector<double>{2.0}, g);
  const SampledFunction zero(g);
  const std::size_t N = g.cell_count();
  s.check("apply/zero", [&] { return fail_if(max_abs(h.apply(zero)) != 0.0, "T0 != 0"); });
  s.check("apply/odd-symmetry", [&] {
    SampledFunction f = gaussian(g, 11);
    for (std::size_t i = 0; i < N / 2; ++i) f[N - 1 - i] = f[i];
    const auto t = h.apply(f);
    for (std::size_t i = 0; i < N; ++i)
      if (auto e = near(t[i], -t[N - 1 - i], 1e-12, "Tf(c-x) vs -Tf(c+x)"); !e.empty()) return e;
    return std::string();
  });
  s.check("adjoint/odd-kernel", [&] {
    const auto f = gaussian(g, 12);
    const auto a = adjoint_apply(h, f), t = h.apply(f);
    for (std::size_t i = 0; i < N; ++i)
      if (auto e = near(a[i], -t[i], 1e-12, "T~f vs -Tf"); !e.empty()) return e;
    return std::string();
  });
  s.check("adjoint/duality", [&] {
    const CZOperator bump = op("bump", g, {0.5});
    for (int k = 0; k < 20; ++k) {
      const auto f = gaussian(g, 100 + k), gg = gaussian(g, 200 + k);
      for (const CZOperator* t : {&h, &bump})
        if (auto e = near(inner(t->apply(f), gg), inner(f, adjoint_apply(*t, gg)), 1e-12, "<Tf,g> vs <f,T~g>");
            !e.empty())
          return e;
    }
    return std::string();
  });
  s.check("adjoint/involution", [&] {
    const CZOperator bump = op("bump", g, {0.5});
    const auto f = gaussian(g, 13);
    return near(max_diff(bump.adjoint().adjoint().apply(f), bump.apply(f)), 0.0, 1e-13, "T~~ f - T f");
  });
  s.check("truncated-maximal/zero", [&] { return fail_if(max_abs(truncated_maximal(h, zero)) != 0.0, "T*0 != 0"); });
  s.check("truncated-maximal/reference", [&] {
    const auto f = gaussian(g, 14);
    return near(max_diff(truncated_maximal(h, f), truncated_maximal_reference(h, f)), 0.0, 1e-12, "T* vs reference");
  });
  s.check("commutator/constant-b", [&] {
    const auto f = gaussian(g, 15);
    return near(max_abs(commutator_apply(h, bc, f)), 0.0, 1e-12, "[b,T] f");
  });
  s.check("commutator/linear", [&] {
    const Symbol b = symbol_gallery("log", std::vector<double>{0.3}, g);
    const auto f1 = gaussian(g, 16), f2 = gaussian(g, 17);
    SampledFunction sum(g);
    for (std::size_t i = 0; i < N; ++i) sum[i] = 2.0 * f1[i] - f2[i];
    const auto l = commutator_apply(h, b, sum), a = commutator_apply(h, b, f1), c = commutator_apply(h, b, f2);
    for (std::size_t i = 0; i < N; ++i)
      if (auto e = near(l[i], 2.0 * a[i] - c[i], 1e-11, "T_b(2f1 - f2)"); !e.empty()) return e;
    return std::string();
  });
  s.check("maximal-commutator/constant-b", [&] {
    return near(max_abs(maximal_commutator(h, bc, gaussian(g, 18))), 0.0, 1e-12, "T*_b f");
  });
  s.check("maximal-commutator/zero", [&] {
    return fail_if(max_abs(maximal_commutator(h, symbol_gallery("log", std::vector<double>{0.3}, g), zero)) != 0.0,
                   "T*_b 0 != 0");
  });
  s.check("grand-maximal/zero", [&] { return fail_if(max_abs(grand_maximal(h, zero)) != 0.0, "M_T 0 != 0"); });
  s.check("grand-maximal/masked-support", [&] {
    SampledFunction f(g);
    const std::size_t c = 21;
    f[c] = 1.0;
    const SingleProbe probe(h, f, root_cube(g).cells());
    for (int k = 0; k <= g.finest_level; ++k)
      for (const auto& q : cubes_at_level(g, k))
        if (q.cells().contains(c) && probe(q, q.cells()) != 0.0) return std::string("level contributes");
    return std::string();
  });
  s.check("grand-composite/zero", [&] {
    return fail_if(max_abs(grand_composite(h, op("bump", g, {0.5}), zero)) != 0.0, "M*_{T1T2} 0 != 0");
  });
  s.check("kernel-check/hilbert-size", [&] {
    return near(kernel_conditions_check(make_kernel("hilbert", g), g, 500, 1).size_ratio, 1.0 / M_PI, 1e-12,
                "size ratio");
  });
  s.check("kernel-check/zero", [&] {
    const auto r = kernel_conditions_check(make_kernel("zero", g), g, 200, 1);
    return fail_if(r.size_ratio != 0.0 || r.regularity_x != 0.0 || r.regularity_y != 0.0, "nonzero ratio");
  });
  s.check("cz/below-level", [&] {
    const auto f = gaussian(g, 19);
    const auto d = cz_decompose(f, maximal(f).sup_norm() * 1.01, 2.0);
    return fail_if(!d.bad.empty() || max_diff(d.good, f) != 0.0, "decomposition not trivial");
  });
  s.check("cz/reconstruction", [&] {
    const auto f = gaussian(g, 20);
    const auto d = cz_decompose(f, 2.5 * f.l1_norm(), 2.0);
    if (d.bad.empty()) return std::string("no bad parts at this level");
    SampledFunction sum = d.good;
    for (const auto& b : d.bad)
      for (std::size_t i = 0; i < N; ++i) sum[i] += b.h[i];
    return near(max_diff(sum, f), 0.0, 1e-12, "g + sum b - f");
  });
}

SparseFamily single(const DyadicCube& q, double eta = 1.0) {
  SparseFamily s;
  s.grid = q.grid;
  s.eta = eta;
  s.add(q, q.cells().indices());
  return s;
}

void sparse_checks(Suite& s) {
  const GridSpec g = GridSpec::make(1, 6, 1.0);
  const std::size_t N = g.cell_count();
  auto tower = [&](bool right_half) {
    SparseFamily t;
    t.grid = g;
    t.eta = 0.5;
    for (int k = 0; k < 6; ++k) {
      const DyadicCube q{g, k, {0, 0}};
      std::vector<std::size_t> w;
      const CellBox c = q.cells();
      const int mid = (c.lo[0] + c.hi[0]) / 2;
      c.for_each([&](std::size_t i) {
        if (!right_half || static_cast<int>(i) >= mid) w.push_back(i);
      });
      t.add(q, w);
    }
    return t;
  };
  s.check("verify_sparse/disjoint", [&] {
    SparseFamily f;
    f.grid = g;
    f.eta = 1.0;
    for (std::int64_t j : {0, 2, 5}) {
      const DyadicCube q{g, 3, {j, 0}};
      f.add(q, q.cells().indices());
    }
    const auto r = verify_sparse(f);
    return fail_if(!r.ok || r.worst_ratio != 1.0, "disjoint family rejected");
  });
  s.check("verify_sparse/half-tower", [&] { return fail_if(!verify_sparse(tower(true)).ok, "tower rejected"); });
  s.check("verify_sparse/full-tower", [&] {
    const auto r = verify_sparse(tower(false));
    return fail_if(r.ok || r.overlap_violations == 0, "overlaps not reported");
  });
  const DyadicCube q{g, 2, {1, 0}};
  const SampledFunction chi = indicator_of(g, q.cells());
  s.check("sparse_apply/single", [&] {
    return near(max_diff(sparse_apply(single(q), chi, 0.0), chi), 0.0, 1e-15, "A chi_Q - chi_Q");
  });
  s.check("sparse_apply/empty", [&] {
    SparseFamily e;
    e.grid = g;
    return fail_if(max_abs(sparse_apply(e, gaussian(g, 1), 1.0)) != 0.0, "empty family gives nonzero");
  });
  s.check("sparse_apply/disjoint", [&] {
    SparseFamily f;
    f.grid = g;
    const DyadicCube a{g, 3, {0, 0}}, b{g, 3, {5, 0}};
    f.add(a, a.cells().indices());
    f.add(b, b.cells().indices());
    const auto u = gaussian(g, 2);
    const auto r = sparse_apply(f, u, 1.0);
    if (auto e = near(r[a.cells().lo[0]], luxemburg_norm(u, a, 1.0), 1e-14, "value on a"); !e.empty()) return e;
    return near(r[b.cells().lo[0]], luxemburg_norm(u, b, 1.0), 1e-14, "value on b");
  });
  s.check("bilinear/single", [&] {
    return near(bilinear_form(single(q), chi, chi, 0.0, 0.0), q.measure(), 1e-15, "form");
  });
  s.check("bilinear/averages", [&] {
    const auto fam = tower(true);
    const auto f = gaussian(g, 3), h = gaussian(g, 4);
    SampledFunction af = f, ah = h;
    for (auto& v : af.values) v = std::abs(v);
    for (auto& v : ah.values) v = std::abs(v);
    double ref = 0.0;
    for (const auto& c : fam.cubes) ref += c.measure() * local_avg(af, c) * local_avg(ah, c);
    return near(bilinear_form(fam, f, h, 0.0, 0.0), ref, 1e-12, "form vs averages");
  });
  s.check("bilinear/monotone-beta", [&] {
    const auto fam = tower(true);
    const auto f = gaussian(g, 5), h = gaussian(g, 6);
    return fail_if(bilinear_form(fam, f, h, 1.0, 0.0) < bilinear_form(fam, f, h, 0.0, 0.0) * (1 - 1e-12),
                   "form decreased in beta");
  });
  s.check("oscillation/constant", [&] { return fail_if(oscillation(SampledFunction(g, 2.0), q) != 0.0, "osc != 0"); });
  s.check("oscillation/half", [&] {
    const DyadicCube r = root_cube(g);
    return near(oscillation(indicator_of(g, children(r)[0].cells()), r), 0.5, 1e-15, "osc");
  });
  s.check("g_operator/zero", [&] {
    return fail_if(max_abs(g_operator(tower(true), SampledFunction(g), 0.5)) != 0.0, "G0 != 0");
  });
  s.check("g_operator/monotone-eps", [&] {
    const auto f = gaussian(g, 7);
    const auto a = g_operator(tower(true), f, 0.25), b = g_operator(tower(true), f, 0.75);
    for (std::size_t i = 0; i < N; ++i)
      if (b[i] > a[i] * (1 + 1e-12)) return std::string("larger eps gave larger output");
    return std::string();
  });
}

void domination_checks(Suite& s) {
  const GridSpec g = GridSpec::make(1, 6, 1.0);
  const CZOperator t1 = op("hilbert", g), t2 = op("bump", g, {0.5});
  const Symbol b = symbol_gallery("log", std::vector<double>{0.3}, g);
  const SampledFunction zero(g);
  const SampledFunction tent = function_gallery("tent", {}, g);
  const std::size_t N = g.cell_count();
  s.check("local-maximals/vanishing-f", [&] {
    SampledFunction f(g);
    for (std::size_t i = N - 4; i < N; ++i) f[i] = 1.0;
    const DyadicCube q0{g, 4, {2, 0}};
    const auto lm = local_grand_maximals(q0, f, t1, t2, &b);
    return fail_if(max_abs(lm.m_t2) + max_abs(lm.m_t1t2) + max_abs(lm.m_t1t2b) != 0.0, "nonzero on Q0");
  });
  s.check("local-maximals/finest", [&] {
    const DyadicCube q0{g, g.finest_level, {30, 0}};
    const auto lm = local_grand_maximals(q0, gaussian(g, 1), t1, t2, &b);
    return fail_if(max_abs(lm.m_t2) + max_abs(lm.m_t1t2) + max_abs(lm.m_t1t2b) != 0.0, "single cube sup nonzero");
  });
  const DyadicCube root = root_cube(g);
  s.check("exceptional/zero-f", [&] {
    const auto ctx = make_stage(root, zero, t1, t2, &b);
    for (double d : {1.0, 4.0, 64.0})
      if (!exceptional_set(ctx, d).empty()) return std::string("E nonempty");
    return std::string();
  });
  s.check("exceptional/large-D", [&] {
    const auto ctx = make_stage(root, tent, t1, t2, &b);
    return fail_if(!exceptional_set(ctx, 1e300).empty(), "E nonempty for huge D");
  });
  s.check("threshold/zero-f", [&] {
    return fail_if(choose_threshold(make_stage(root, zero, t1, t2, &b)) != 1.0, "D != 1");
  });
  s.check("threshold/nesting", [&] {
    for (const char* name : {"tent", "log-spike", "indicator"}) {
      const auto ctx = make_stage(root, function_gallery(name, {}, g), t1, t2, &b);
      for (double d = 0.25; d < 64.0; d *= 2.0) {
        const CellMask big = exceptional_set(ctx, d), small = exceptional_set(ctx, 2.0 * d);
        for (std::size_t i = 0; i < N; ++i)
          if (small[i] && !big[i]) return std::string("E(2D) not inside E(D)");
      }
    }
    return std::string();
  });
  s.check("split/empty-E", [&] {
    const auto ctx = make_stage(root, tent, t1, t2, &b);
    const auto sp = decompose_once(ctx, CellMask(g), tent, t1, t2, &b);
    if (!sp.stops.empty()) return std::string("stop cubes without E");
    for (std::size_t i = 0; i < N; ++i)
      if (auto e = near(sp.parts[0][i], ctx.target[i], 1e-12, "G0"); !e.empty()) return e;
    for (std::size_t j = 1; j < sp.parts.size(); ++j)
      if (max_abs(sp.parts[j]) != 0.0) return std::string("G1 or G2 nonzero");
    return std::string();
  });
  s.check("split/stop-measure", [&] {
    for (const char* name : {"tent", "log-spike", "indicator"}) {
      const auto f = function_gallery(name, {}, g);
      const auto ctx = make_stage(root, f, t1, t2, &b);
      const auto sp = decompose_once(ctx, exceptional_set(ctx, choose_threshold(ctx)), f, t1, t2, &b);
      double sum = 0.0;
      for (const auto& p : sp.stops) sum += p.measure();
      if (sum > 0.5 * root.measure()) return std::string("sum |P_j| > |Q0|/2");
    }
    return std::string();
  });
  s.check("dominate/zero", [&] {
    const auto r = dominate_composition(t1, t2, zero);
    for (const auto& p : r.parts)
      if (max_abs(p) != 0.0) return std::string("nonzero part");
    return fail_if(r.family.size() != 1, "family is not the root alone");
  });
  s.check("dominate/sparse", [&] {
    const auto r = dominate_composition(t1, t2, function_gallery("log-spike", {}, g));
    return fail_if(std::abs(r.family.eta - 1.0 / 18.0) > 1e-15 || !verify_sparse(r.family).ok, "not 1/18-sparse");
  });
  s.check("dominate/constant-b", [&] {
    const auto r = dominate_commutator_composition(t1, symbol_gallery("constant", std::vector<double>{3.0}, g), t2,
                                                   tent);
    return near(max_abs(r.parts[1]) + max_abs(r.sum()), 0.0, 1e-12, "H1 and total");
  });
  s.check("reconstruction/zero", [&] {
    return fail_if(verify_reconstruction(dominate_composition(t1, t2, zero), zero) != 0.0, "residual != 0");
  });
  s.check("reconstruction/sensitivity", [&] {
    auto r = dominate_composition(t1, t2, tent);
    const auto target = t1.apply(t2.apply(tent));
    r.parts[0][N / 2] += 1.0;
    return near(verify_reconstruction(r, target), 1.0 / target.sup_norm(), 1e-9, "residual");
  });
  s.check("domination-ratio/zero", [&] {
    const auto r = dominate_composition(t1, t2, zero);
    return fail_if(domination_ratio(r, zero, gaussian(g, 2)) != 0.0, "ratio != 0");
  });
  s.check("domination-ratio/homogeneous", [&] {
    const auto f = function_gallery("log-spike", {}, g);
    SampledFunction f2 = f;
    for (auto& v : f2.values) v *= 2.0;
    const auto gg = gaussian(g, 3);
    SampledFunction g3 = gg;
    for (auto& v : g3.values) v *= 3.0;
    return near(domination_ratio(dominate_composition(t1, t2, f2), f2, g3),
                domination_ratio(dominate_composition(t1, t2, f), f, gg), 1e-9, "ratio");
  });
}

void endpoint_checks(Suite& s) {
  const GridSpec g = GridSpec::make(1, 6, 1.0);
  const CZOperator t1 = op("hilbert", g), t2 = op("bump", g, {0.5});
  const Symbol b = symbol_gallery("log", std::vector<double>{0.25}, g);
  const Symbol bc = symbol_gallery("constant", std::vector<double>{2.0}, g);
  const Weight one(SampledFunction(g, 1.0));
  const SampledFunction f = function_gallery("tent", {}, g);
  const SampledFunction zero(g);
  s.check("weak-type/above-sup", [&] {
    const double top = t1.apply(t2.apply(f)).sup_norm();
    const std::vector<double> lam{top * 1.5, top * 4.0};
    const auto r = weak_type_experiment(WeakVariant::composition, t1, t2, nullptr, f, one, lam);
    for (const auto& row : r.rows)
      if (row.lhs != 0.0 || row.ratio != 0.0) return std::string("nonzero row");
    return std::string();
  });
  s.check("fefferman-stein/unit-u", [&] {
    const std::vector<double> lam{0.1, 1.0};
    const auto r = fefferman_stein_experiment(WeakVariant::composition, 0.5, t1, t2, nullptr, f,
                                              SampledFunction(g, 1.0), lam);
    return fail_if(!(r.extra("min_orlicz_maximal") >= 1.0) || !std::isfinite(r.max_ratio), "denominator shape");
  });
  s.check("fefferman-stein/eps-prefactor", [&] {
    return fail_if(!(fefferman_stein_shape(WeakVariant::commutator, 0.1).prefactor >
                     fefferman_stein_shape(WeakVariant::commutator, 0.5).prefactor),
                   "prefactor did not grow");
  });
  s.check("sparse-bound/zero-g", [&] {
    const std::vector<SampledFunction> gs{zero};
    const auto r = sparse_bound_experiment(single(root_cube(g)), 1.0, 2.0, 0.5, SampledFunction(g, 1.0), gs);
    return fail_if(r.rows[0].lhs != 0.0 || r.rows[0].rhs != 0.0, "sides nonzero");
  });
  s.check("lp/zero-f", [&] {
    const std::vector<SampledFunction> fs{zero};
    return fail_if(lp_bound_experiment(LpVariant::plain, 2.0, t1, t2, nullptr, one, fs).rows[0].ratio != 0.0,
                   "ratio != 0");
  });
  s.check("lp/constant-b", [&] {
    const std::vector<SampledFunction> fs{f};
    return near(lp_bound_experiment(LpVariant::commutator, 2.0, t1, t2, &bc, one, fs).rows[0].lhs, 0.0, 1e-12,
                "lhs");
  });
  s.check("chain/m2-bit-exact", [&] {
    const std::vector<double> lam = lambda_grid(1.0, 8);
    const std::vector<const CZOperator*> ops{&t1, &t2};
    const auto c = chain_experiment(ops, f, one, lam);
    const auto w = weak_type_experiment(WeakVariant::composition, t1, t2, nullptr, f, one, lam);
    if (c.rows.size() != w.rows.size()) return std::string("row count differs");
    for (std::size_t i = 0; i < c.rows.size(); ++i)
      if (c.rows[i].lhs != w.rows[i].lhs || c.rows[i].rhs != w.rows[i].rhs) return std::string("row differs");
    return std::string();
  });
  s.check("chain/tail", [&] {
    const double top = t1.apply(t2.apply(f)).sup_norm();
    const std::vector<double> lam{top * 2.0};
    const std::vector<const CZOperator*> ops{&t1, &t2};
    return fail_if(chain_experiment(ops, f, one, lam).rows[0].lhs != 0.0, "tail nonzero");
  });
  (void)b;
}

void cli_checks(Suite& s) {
  s.expect_error("config/malformed", Errc::type_mismatch, [] { parse_config("command = constants\nm = eight\n"); });
  s.check("config/names-key", [] {
    try {
      parse_config("command = constants\neps = x\n");
    } catch (const Error& e) {
      return fail_if(std::string(e.what()).find("eps") == std::string::npos || exit_code_for(e.code()) != 1,
                     "diagnostic does not name the key");
    }
    return std::string("no error");
  });
  s.expect_error("config/empty-command", Errc::missing_required, [] { parse_config("m = 4\n"); });
  s.check("config/duplicate", [] {
    const RunConfig c = parse_config("command = constants\nm = 4\nm = 5\n");
    return fail_if(c.m != 5 || c.warnings.size() != 1, "duplicate not last-wins with warning");
  });
  s.check("config/round-trip", [] {
    const std::string once = emit_config(parse_config("command = endpoint\nw = power( 0.5 )\nseed = 3\n"));
    return fail_if(emit_config(parse_config(once)) != once, "emit(parse(emit)) differs");
  });
  const auto dir = std::filesystem::temp_directory_path() /
                   ("sparsedom-selftest-" +
                    std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  auto slurp = [](const std::string& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  s.check("emit/deterministic", [&] {
    RunConfig c = parse_config("command = endpoint\nm = 6\nb = log(0.25)\nlambdas = auto(6)\n");
    std::string first;
    for (int k = 0; k < 2; ++k) {
      c.out = (dir / std::to_string(k)).string();
      std::string all;
      for (const auto& p : run(c).files) all += slurp(p);
      if (k == 0)
        first = all;
      else if (all != first)
        return std::string("outputs differ");
    }
    return std::string();
  });
  s.check("emit/empty-lambdas", [&] {
    RunConfig c = parse_config("command = endpoint\nm = 5\nlambdas = list()\n");
    c.out = (dir / "e").string();
    const auto files = run(c).files;
    return fail_if(slurp(files.at(0)) != "lambda,lhs,rhs,ratio\n", "CSV is not header-only");
  });
  s.check("emit/row-count", [] {
    ExperimentReport r;
    for (int i = 0; i < 20; ++i) r.add_row(i, 1.0, 2.0);
    std::ostringstream os;
    write_csv(os, r);
    const std::string t = os.str();
    return fail_if(std::count(t.begin(), t.end(), '\n') != 21, "CSV does not have 21 lines");
  });
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
  Suite s;
  grid_checks(s);
  orlicz_checks(s);
  weight_checks(s);
  czo_checks(s);
  sparse_checks(s);
  domination_checks(s);
  endpoint_checks(s);
  cli_checks(s);
  return std::move(s.out);
}

}  // namespace sparsedom
