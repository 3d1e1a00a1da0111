#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sparsedom/czo.hpp"
#include "sparsedom/weights.hpp"

using namespace sparsedom;

namespace {

SampledFunction random_function(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  SampledFunction f(g);
  for (auto& v : f.values) v = U(rng);
  return f;
}

double dot(const SampledFunction& a, const SampledFunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid.cell_measure();
}

double abs_dot(const SampledFunction& a, const SampledFunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] * b[i]);
  return s * a.grid.cell_measure();
}

// direct double sum over the operator matrix with a support predicate
template <class Keep>
double direct(const CZOperator& t, const SampledFunction& f, std::size_t i, Keep keep) {
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    if (keep(j)) s += t.coef(i, j) * f[j];
  return s;
}

}  // namespace

TEST_CASE("Hilbert transform of an indicator matches the logarithmic formula") {
  const GridSpec g = GridSpec::make(1, 10, 1.0);
  const CZOperator t(make_kernel("hilbert", g), g);
  const double a = 0.375, b = 0.625, h = g.cell_side();
  SampledFunction f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g.cell_center(i)[0];
    f[i] = (x >= a && x < b) ? 1.0 : 0.0;
  }
  const auto tf = t.apply(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g.cell_center(i)[0];
    const double d = std::min(std::abs(x - a), std::abs(x - b));
    if (d < 16 * h) continue;
    const double exact = std::log(std::abs(x - a) / std::abs(x - b)) / std::numbers::pi;
    CHECK(std::abs(tf[i] - exact) <= h / d);
  }
}

TEST_CASE("odd kernels map even functions to odd functions") {
  const GridSpec g = GridSpec::make(1, 8, 1.0);
  const CZOperator t(make_kernel("hilbert", g), g);
  SampledFunction f(g);
  const std::size_t N = f.size();
  for (std::size_t i = 0; i < N / 2; ++i) f[i] = f[N - 1 - i] = std::sin(0.1 * i) + 1.0;
  const auto tf = t.apply(f);
  for (std::size_t i = 0; i < N; ++i) CHECK(tf[i] == doctest::Approx(-tf[N - 1 - i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("linearity and adjoint duality") {
  std::mt19937_64 rng(101);
  for (const char* name : {"hilbert", "periodic-hilbert", "bump"}) {
    const GridSpec g = GridSpec::make(1, 8, 2.0);
    const CZOperator t(make_kernel(name, g), g);
    const CZOperator ta = t.adjoint();
    for (int trial = 0; trial < 20; ++trial) {
      const auto f = random_function(g, rng), h = random_function(g, rng);
      const auto tf = t.apply(f), tg = ta.apply(h);
      CHECK(std::abs(dot(tf, h) - dot(f, tg)) <= 1e-12 * abs_dot(t.apply(f), h) + 1e-300);
      SampledFunction comb(g);
      for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = 2.5 * f[i] - 0.75 * h[i];
      const auto tc = t.apply(comb), th = t.apply(h);
      for (std::size_t i = 0; i < comb.size(); ++i)
        CHECK(std::abs(tc[i] - (2.5 * tf[i] - 0.75 * th[i])) <= 1e-12 * (2.5 * std::abs(tf[i]) + std::abs(th[i]) + 1.0));
    }
    const auto f = random_function(g, rng);
    CHECK(ta.adjoint().apply(f).values == t.apply(f).values);
  }
  const GridSpec g2 = GridSpec::make(2, 4, 1.0);
  const CZOperator r(make_kernel("riesz2", g2), g2);
  const auto f = random_function(g2, rng), h = random_function(g2, rng);
  CHECK(std::abs(dot(r.apply(f), h) - dot(f, adjoint_apply(r, h))) <= 1e-12 * abs_dot(r.apply(f), h));
}

TEST_CASE("odd kernels have antisymmetric adjoints") {
  std::mt19937_64 rng(103);
  const GridSpec g = GridSpec::make(1, 7, 1.0);
  const CZOperator t(make_kernel("hilbert", g), g);
  const auto f = random_function(g, rng);
  const auto a = adjoint_apply(t, f), b = t.apply(f);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(a[i] == -b[i]);
}

TEST_CASE("periodic odd kernels annihilate constants exactly") {
  const GridSpec g = GridSpec::make(1, 9, 3.0);
  const CZOperator t(make_kernel("periodic-hilbert", g), g);
  CHECK(t.annihilates_constants());
  for (double c : {1.0, -3.7, 1e5}) {
    for (double v : t.apply(SampledFunction(g, c)).values) CHECK(v == 0.0);
    for (double v : t.adjoint().apply(SampledFunction(g, c)).values) CHECK(v == 0.0);
  }
  std::mt19937_64 rng(107);
  const auto f = random_function(g, rng);
  const auto fast = t.apply(f), serial = t.apply_serial(f);
  CHECK(fast.values == serial.values);
  const std::vector<std::size_t> idx = [&] {
    std::vector<std::size_t> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
  }();
  const auto gathered = t.apply_restricted(f, idx, idx);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(gathered[i] == doctest::Approx(fast[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("zero input and zero kernel") {
  const GridSpec g = GridSpec::make(1, 6, 1.0);
  const CZOperator t(make_kernel("hilbert", g), g);
  for (double v : t.apply(SampledFunction(g)).values) CHECK(v == 0.0);
  for (double v : truncated_maximal(t, SampledFunction(g)).values) CHECK(v == 0.0);
  for (double v : grand_maximal(t, SampledFunction(g)).values) CHECK(v == 0.0);
  for (double v : grand_composite(t, t, SampledFunction(g)).values) CHECK(v == 0.0);
  const auto rep = kernel_conditions_check(make_kernel("zero", g), g, 200, 1);
  CHECK(rep.size_ratio == 0.0);
  CHECK(rep.regularity_y == 0.0);
  CHECK_THROWS_AS(t.apply(SampledFunction(GridSpec::make(1, 7, 1.0))), Error);
}

TEST_CASE("kernel condition report") {
  const GridSpec g = GridSpec::make(1, 6, 1.0);
  const auto rep = kernel_conditions_check(make_kernel("hilbert", g), g, 2000, 5);
  CHECK(rep.size_ratio == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
  CHECK(rep.regularity_y <= 2.0 / std::numbers::pi + 1e-12);
  CHECK(rep.regularity_y > 0.0);
  CHECK(std::isfinite(rep.regularity_x));
  const auto per = kernel_conditions_check(make_kernel("periodic-hilbert", g), g, 2000, 5);
  CHECK(per.size_ratio <= 1.0 / (2.0 * std::numbers::pi) + 1e-12);
  const GridSpec g2 = GridSpec::make(2, 4, 1.0);
  const auto riesz = kernel_conditions_check(make_kernel("riesz1", g2), g2, 2000, 5);
  CHECK(riesz.size_ratio <= 1.0 / (2.0 * std::numbers::pi) + 1e-12);
  CHECK(std::isfinite(riesz.regularity_y));
  const auto bump = kernel_conditions_check(make_kernel("bump", g, std::vector<double>{0.5}), g, 2000, 5);
  CHECK(std::isfinite(bump.regularity_x));
  CHECK(bump.size_ratio <= 1.5 / std::numbers::pi + 1e-12);
  CHECK_THROWS_AS(kernel_conditions_check(make_kernel("hilbert", g), g, 10, 1), Error);
}

TEST_CASE("commutators") {
  std::mt19937_64 rng(109);
  const GridSpec g = GridSpec::make(1, 7, 1.0);
  const CZOperator t(make_kernel("hilbert", g), g);
  const auto f = random_function(g, rng);
  const Symbol c = symbol_gallery("constant", std::vector<double>{2.0}, g);
  for (double v : commutator_apply(t, c, f).values) CHECK(v == 0.0);
  for (double v : maximal_commutator(t, c, f).values) CHECK(v == 0.0);
  const Symbol b = symbol_gallery("log", {}, g);
  CHECK(bmo_norm(b.b) == doctest::Approx(1.0).epsilon(1e-6));
  for (double v : maximal_commutator(t, b, SampledFunction(g)).values) CHECK(v == 0.0);

  const auto cb = commutator_apply(t, b, f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double s = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double term = (b.b[i] - b.b[j]) * t.coef(i, j) * f[j];
      s += term;
      scale += std::abs(term);
    }
    CHECK(std::abs(cb[i] - s) <= 1e-11 * (scale + 1.0));
  }
  const auto f2 = random_function(g, rng);
  SampledFunction sum(g);
  for (std::size_t i = 0; i < f.size(); ++i) sum[i] = f[i] + f2[i];
  const auto c1 = commutator_apply(t, b, f2), cs = commutator_apply(t, b, sum);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(cs[i] == doctest::Approx(cb[i] + c1[i]).epsilon(1e-10).scale(10.0));
}

TEST_CASE("truncated maximal operators against per-radius sums") {
  std::mt19937_64 rng(113);
  for (const char* name : {"hilbert", "periodic-hilbert"}) {
    const GridSpec g = GridSpec::make(1, 6, 1.0);
    const CZOperator t(make_kernel(name, g), g);
    const auto f = random_function(g, rng);
    const Symbol b = symbol_gallery("sawtooth", std::vector<double>{3.0}, g);
    const auto fast = truncated_maximal(t, f), ref = truncated_maximal_reference(t, f);
    const auto fb = maximal_commutator(t, b, f), rb = truncated_maximal_reference(t, f, &b.b);
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(fast[i] == doctest::Approx(ref[i]).epsilon(1e-12).scale(1.0));
      CHECK(fb[i] == doctest::Approx(rb[i]).epsilon(1e-12).scale(1.0));
    }
  }
  const GridSpec g2 = GridSpec::make(2, 4, 1.0);
  const CZOperator r(make_kernel("riesz1", g2), g2);
  const auto f = random_function(g2, rng);
  const auto fast = truncated_maximal(r, f), ref = truncated_maximal_reference(r, f);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(fast[i] == doctest::Approx(ref[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("grand maximal functions against brute-force cube scans") {
  std::mt19937_64 rng(127);
  const GridSpec g = GridSpec::make(1, 5, 1.0);
  const CZOperator t1(make_kernel("hilbert", g), g);
  const CZOperator t2(make_kernel("bump", g, std::vector<double>{0.5}), g);
  const Symbol b = symbol_gallery("log", {}, g);
  const auto f = random_function(g, rng);
  const auto cubes = oracle::all_cubes_1d(g);
  const double h = g.cell_side();
  const int N = 32;

  // geometric cubes with their true (unclipped) extent
  struct Geo {
    double lo, side;
    int clo, chi;
  };
  std::vector<Geo> geo;
  for (int s = 0; s < 3; ++s)
    for (int k = 0; k <= 5; ++k)
      for (long j = -(1L << k); j < (1L << k); ++j) {
        const auto r = oracle::cube_range_1d(g, s, k, j);
        if (r.first < 0) continue;
        geo.push_back({s / 3.0 + j * std::ldexp(1.0, -k), std::ldexp(1.0, -k), r.first, r.second});
      }
  auto inside = [&](const Geo& q, double lam, int j) {
    const double c = q.lo + 0.5 * q.side, x = (j + 0.5) * h;
    return x >= c - 0.5 * lam * q.side && x < c + 0.5 * lam * q.side;
  };

  const auto mt = grand_maximal(t2, f);
  const auto mc = grand_composite(t1, t2, f);
  const auto mcb = grand_composite(t1, t2, f, &b);
  const Commutator t2b(t2, b.b);
  for (int x = 0; x < N; ++x) {
    double best = 0.0, bestc = 0.0, bestb = 0.0;
    for (const Geo& q : geo) {
      if (x < q.clo || x >= q.chi) continue;
      SampledFunction far(g), u(g), ub(g);
      for (int j = 0; j < N; ++j) far[j] = inside(q, 9.0, j) ? 0.0 : f[j];
      for (int i = 0; i < N; ++i) {
        double s = 0.0, sb = 0.0;
        for (int j = 0; j < N; ++j) {
          s += t2.coef(i, j) * far[j];
          sb += (b.b[i] - b.b[j]) * t2.coef(i, j) * far[j];
        }
        u[i] = inside(q, 3.0, i) ? 0.0 : s;
        ub[i] = inside(q, 3.0, i) ? 0.0 : sb;
      }
      for (int xi = q.clo; xi < q.chi; ++xi) {
        best = std::max(best, std::abs(direct(t2, f, xi, [&](std::size_t j) { return !inside(q, 3.0, int(j)); })));
        bestc = std::max(bestc, std::abs(direct(t1, u, xi, [](std::size_t) { return true; })));
        bestb = std::max(bestb, std::abs(direct(t1, ub, xi, [](std::size_t) { return true; })));
      }
    }
    CHECK(mt[x] == doctest::Approx(best).epsilon(1e-10));
    CHECK(mc[x] == doctest::Approx(bestc).epsilon(1e-10));
    CHECK(mcb[x] == doctest::Approx(bestb).epsilon(1e-10));
  }

  SampledFunction f2 = f;
  for (auto& v : f2.values) v *= 2.0;
  const auto mt2 = grand_maximal(t2, f2);
  const auto mc2 = grand_composite(t1, t2, f2);
  for (int x = 0; x < N; ++x) {
    CHECK(mt2[x] == 2.0 * mt[x]);
    CHECK(mc2[x] == 2.0 * mc[x]);
  }
}

TEST_CASE("grand maximal vanishes on levels whose triples cover the support") {
  const GridSpec g = GridSpec::make(1, 6, 1.0);
  const CZOperator t(make_kernel("hilbert", g), g);
  SampledFunction f(g);
  f[31] = 1.0;
  f[32] = -2.0;
  // the root of the unshifted grid has 3Q covering everything
  const SingleProbe probe(t, f, root_cube(g).cells());
  CHECK(probe(root_cube(g), root_cube(g).cells()) == 0.0);
  for (const auto& q : cubes_at_level(g, 1)) CHECK(probe(q, q.cells()) == 0.0);
}

TEST_CASE("Calderon-Zygmund splitting") {
  std::mt19937_64 rng(131);
  const GridSpec g = GridSpec::make(1, 9, 1.0);
  SampledFunction f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g.cell_center(i)[0];
    f[i] = (std::abs(x - 0.5) < 0.1 ? 1.0 / std::sqrt(std::abs(x - 0.5)) : 0.0) *
           std::uniform_real_distribution<double>(0.5, 1.5)(rng);
  }
  const auto none = cz_decompose(f, 2.0 * f.sup_norm(), 2.0);
  CHECK(none.bad.empty());
  CHECK(none.good.values == f.values);

  const double level = 0.5 * f.l1_norm() / 0.2;
  const auto dec = cz_decompose(f, level, 2.0);
  CHECK_FALSE(dec.bad.empty());
  SampledFunction sum = dec.good;
  double covered = 0.0;
  const CZOperator t(make_kernel("hilbert", g), g);
  for (const auto& p : dec.bad) {
    double mean = 0.0, l1 = 0.0;
    p.cube.cells().for_each([&](std::size_t i) {
      mean += p.h[i];
      l1 += std::abs(f[i]);
    });
    CHECK(std::abs(mean) <= 1e-12 * l1);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!p.cube.cells().contains(i)) CHECK(p.h[i] == 0.0);
      sum[i] += p.h[i];
    }
    covered += p.cube.measure();
    CHECK(std::isfinite(mean_zero_decay_ratio(t, p)));
  }
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(sum[i] == doctest::Approx(f[i]).epsilon(1e-14).scale(1.0));
  CHECK(covered * level / f.l1_norm() < 10.0);
  // a Whitney cube sits within 15R diam of the complement, where Mf <= level,
  // so a shifted cube of side at most 6 (15R + 2) l(Q) bounds its average
  CHECK(dec.good.sup_norm() <= 6.0 * (15.0 * 2.0 + 2.0) * level);

  SampledFunction big(g, 1.0);
  CHECK_THROWS_AS(cz_decompose(big, 0.5, 2.0), Error);
}
