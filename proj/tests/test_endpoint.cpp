#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sparsedom/domination.hpp"
#include "sparsedom/endpoint.hpp"
#include "sparsedom/functions.hpp"
#include "sparsedom/orlicz.hpp"

using namespace sparsedom;

namespace {

struct Ops {
  GridSpec g;
  CZOperator t1, t2;
  Symbol b;
  Ops(int m, const char* k1 = "hilbert", const char* k2 = "bump")
      : g(GridSpec::make(1, m, 1.0)),
        t1(make_kernel(k1, g), g),
        t2(make_kernel(k2, g, std::vector<double>{0.5}), g),
        b(symbol_gallery("log", std::vector<double>{0.3}, g)) {}
};

Weight unit_weight(const GridSpec& g) { return weight_gallery("constant", std::vector<double>{1.0}, g); }

std::vector<SampledFunction> ensemble(const GridSpec& g, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<SampledFunction> out;
  for (int j = 0; j < count; ++j) {
    SampledFunction f(g);
    for (auto& v : f.values) v = N(rng);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

TEST_CASE("lambda grids are log-spaced") {
  const auto l = lambda_grid(4.0);
  REQUIRE(l.size() == 20);
  CHECK(l.front() == doctest::Approx(4e-3).epsilon(1e-14));
  CHECK(l.back() == doctest::Approx(40.0).epsilon(1e-14));
  for (std::size_t i = 2; i < l.size(); ++i)
    CHECK(l[i] / l[i - 1] == doctest::Approx(l[1] / l[0]).epsilon(1e-12));
  CHECK(lambda_grid(0.0).empty());
  CHECK(lambda_grid(1.0, 0).empty());
  CHECK_THROWS_AS(lambda_grid(1.0, 5, 2.0, 1.0), Error);
}

TEST_CASE("report statistics") {
  ExperimentReport r;
  r.add_row(1.0, 2.0, 4.0);
  r.add_row(2.0, 0.0, 0.0);
  r.add_row(3.0, 3.0, 1.0);
  r.add_row(4.0, 1.0, 0.0);
  r.finalize();
  CHECK(r.rows[0].ratio == 0.5);
  CHECK(r.rows[1].ratio == 0.0);
  CHECK(std::isinf(r.rows[3].ratio));
  CHECK(std::isinf(r.max_ratio));
  CHECK(r.median_ratio == doctest::Approx(1.75));
  r.extras.push_back({"x", 3.0});
  CHECK(r.extra("x") == 3.0);
  CHECK_THROWS_AS(r.extra("y"), Error);
}

TEST_CASE("monotonicity assertion") {
  ExperimentReport r;
  r.id = "t";
  r.add_row(1.0, 5.0, 5.0);
  r.add_row(2.0, 4.0, 4.0);
  CHECK_NOTHROW(check_distribution_monotone(r));
  r.add_row(3.0, 4.5, 1.0);
  try {
    check_distribution_monotone(r);
    FAIL("expected invariant failure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invariant_failure);
  }
}

TEST_CASE("weak type against direct distribution computation") {
  const Ops o(7);
  const auto f = function_gallery("log-spike", {}, o.g);
  const Weight w = weight_gallery("power", std::vector<double>{0.5}, o.g);
  const double hn = o.g.cell_measure();

  const auto inner = oracle::dense_apply(o.t2.kernel(), o.g, f.values);
  const auto uf = oracle::dense_apply(o.t1.kernel(), o.g, inner);
  double sup = 0.0;
  for (double v : uf) sup = std::max(sup, std::abs(v));
  // stay off the exact level values, where rounding decides membership
  auto lambdas = lambda_grid(sup * 1.0000001);

  for (WeakVariant v : {WeakVariant::composition, WeakVariant::commutator}) {
    const auto r = weak_type_experiment(v, o.t1, o.t2, &o.b, f, w, lambdas, "power(0.5)");
    REQUIRE(r.rows.size() == 20);
    const double a1 = w.a1(), ai = w.ainfty();
    const double le = std::log(std::exp(1.0) + ai);
    const double pref = v == WeakVariant::composition ? a1 * ai * le : a1 * ai * ai * le;
    CHECK(r.prefactor == doctest::Approx(pref).epsilon(1e-14));
    std::vector<double> target = uf;
    if (v == WeakVariant::commutator) {
      std::vector<double> bt(inner.size());
      for (std::size_t i = 0; i < bt.size(); ++i) bt[i] = o.b.b[i] * inner[i];
      const auto tb = oracle::dense_apply(o.t1.kernel(), o.g, bt);
      for (std::size_t i = 0; i < target.size(); ++i) target[i] = o.b.b[i] * uf[i] - tb[i];
    }
    const double k = v == WeakVariant::composition ? 1.0 : 2.0;
    for (const auto& row : r.rows) {
      CHECK(row.lhs == doctest::Approx(oracle::level_measure(target, row.param, &w.values().values, hn)).epsilon(1e-12));
      CHECK(row.rhs ==
            doctest::Approx(pref * oracle::orlicz_mass(f.values, row.param, k, &w.values().values, hn)).epsilon(1e-12));
      CHECK(row.lhs >= 0.0);
      CHECK(row.rhs > 0.0);
      CHECK(std::isfinite(row.ratio));
    }
    CHECK(r.max_ratio > 0.0);
  }
}

TEST_CASE("weak type trivial cases") {
  const Ops o(6);
  const auto f = function_gallery("indicator", {}, o.g);
  const Weight one = unit_weight(o.g);
  const double sup = apply_weak_variant(WeakVariant::composition, o.t1, o.t2, nullptr, f).sup_norm();
  const std::vector<double> above{sup * 1.5, sup * 2.0};
  const auto r = weak_type_experiment(WeakVariant::composition, o.t1, o.t2, nullptr, f, one, above);
  for (const auto& row : r.rows) {
    CHECK(row.lhs == 0.0);
    CHECK(row.ratio == 0.0);
  }
  // unit weight: every constant is 1 up to rounding
  CHECK(r.constants.a1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.constants.ainfty == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(weak_type_experiment(WeakVariant::composition_t1_cancel, o.t1, o.t2, nullptr, f, one, above),
                  Error);
  try {
    weak_type_experiment(WeakVariant::commutator, o.t1, o.t2, nullptr, f, one, above);
    FAIL("expected a hypothesis violation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::variant_hypothesis_violation);
  }
  const Ops p(6, "periodic-hilbert");
  const auto rp = weak_type_experiment(WeakVariant::composition_t1_cancel, p.t1, p.t2, nullptr, f, one,
                                       lambda_grid(sup));
  CHECK(std::isfinite(rp.max_ratio));
  CHECK(rp.id == "weak-type/composition-T1-cancel");
  CHECK(parse_weak_variant("commutator") == WeakVariant::commutator);
  CHECK_THROWS_AS(parse_weak_variant("nope"), Error);
}

TEST_CASE("Fefferman-Stein variants") {
  const Ops o(7);
  const auto f = function_gallery("tent", {}, o.g);
  const SampledFunction one(o.g, 1.0);
  const auto lam = lambda_grid(apply_weak_variant(WeakVariant::composition, o.t1, o.t2, nullptr, f).sup_norm());

  const auto r = fefferman_stein_experiment(WeakVariant::composition, 0.5, o.t1, o.t2, nullptr, f, one, lam);
  const double c = oracle::luxemburg_scan(std::vector<double>(8, 1.0), 1.5);
  CHECK(r.extra("min_orlicz_maximal") == doctest::Approx(c).epsilon(1e-7));
  CHECK(r.extra("min_orlicz_maximal") >= 1.0);
  CHECK(std::isfinite(r.max_ratio));

  CHECK(fefferman_stein_shape(WeakVariant::composition, 0.1).prefactor >
        fefferman_stein_shape(WeakVariant::composition, 0.5).prefactor);
  CHECK(fefferman_stein_shape(WeakVariant::composition_t1_cancel, 0.5).prefactor == 4.0);
  CHECK(fefferman_stein_shape(WeakVariant::commutator, 0.25).beta == 2.25);
  const auto r2 = fefferman_stein_experiment(WeakVariant::composition, 0.1, o.t1, o.t2, nullptr, f, one, lam);
  for (std::size_t i = 0; i < lam.size(); ++i) {
    CHECK(r2.rows[i].lhs == r.rows[i].lhs);
    CHECK(r2.rows[i].ratio <= r.rows[i].ratio);
  }
  CHECK_THROWS_AS(fefferman_stein_shape(WeakVariant::composition, 1.0), Error);

  const Weight w = weight_gallery("power", std::vector<double>{0.4}, o.g);
  const SampledFunction mw = maximal(w.values());
  const auto rc = fefferman_stein_experiment(WeakVariant::commutator, 0.3, o.t1, o.t2, &o.b, f, mw, lam, "M power");
  CHECK(std::isfinite(rc.max_ratio));
  CHECK(rc.max_ratio > 0.0);
}

TEST_CASE("sparse operator bounds") {
  const GridSpec g = GridSpec::make(1, 7, 1.0);
  SparseFamily s;
  s.grid = g;
  const DyadicCube q{g, 2, {1, 0}};
  s.add(q, q.cells().indices());
  const SampledFunction one(g, 1.0);
  auto gs = ensemble(g, 4, 17);
  gs.push_back(SampledFunction(g));

  const auto r = sparse_bound_experiment(s, 0.0, 2.0, 0.5, one, gs);
  for (std::size_t j = 0; j + 1 < gs.size(); ++j) {
    const double expect = local_avg(gs[j], q) * std::sqrt(q.measure());
    CHECK(r.rows[j].lhs == doctest::Approx(expect).epsilon(1e-13));
    CHECK(std::isfinite(r.rows[j].ratio));
  }
  CHECK(r.rows.back().lhs == 0.0);
  CHECK(r.rows.back().rhs == 0.0);
  CHECK(r.rows.back().ratio == 0.0);
  CHECK(r.prefactor == doctest::Approx(2.0 * 4.0 * std::sqrt(2.0)).epsilon(1e-14));

  const auto r1 = sparse_bound_experiment(s, 1.0, 2.0, 0.5, one, gs);
  for (std::size_t j = 0; j + 1 < gs.size(); ++j) CHECK(r1.rows[j].lhs >= r.rows[j].lhs);

  const Weight w = weight_gallery("power", std::vector<double>{0.5}, g);
  const auto a0 = sparse_bound_ap_experiment(s, 0.0, 2.0, w, gs);
  const auto a1 = sparse_bound_ap_experiment(s, 1.0, 2.0, w, gs);
  CHECK(a1.prefactor == doctest::Approx(a0.prefactor * a0.constants.sigma_ainfty).epsilon(1e-14));
  CHECK(a0.prefactor == doctest::Approx(ap_base_prefactor(w.constants(2.0))).epsilon(1e-14));
  CHECK(std::isfinite(a1.max_ratio));
  CHECK_THROWS_AS(sparse_bound_experiment(s, 0.0, 1.05, 0.5, one, gs), Error);
}

TEST_CASE("L^p ratio experiments") {
  const Ops o(7);
  const Weight one = unit_weight(o.g);
  auto fs = ensemble(o.g, 6, 3);
  fs.push_back(SampledFunction(o.g));

  const auto r = lp_bound_experiment(LpVariant::plain, 2.0, o.t1, o.t2, nullptr, one, fs);
  CHECK(r.prefactor == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.rows.back().ratio == 0.0);
  // prefactor * ratio is a lower estimate of the operator norm
  std::mt19937_64 rng(5);
  std::vector<double> x(o.g.cell_count());
  for (auto& v : x) v = std::normal_distribution<double>(0, 1)(rng);
  double norm = 0.0;
  for (int it = 0; it < 60; ++it) {
    const auto y = oracle::dense_apply(o.t1.kernel(), o.g, oracle::dense_apply(o.t2.kernel(), o.g, x));
    // adjoint of T1 T2 via transposed kernels
    auto tr = [](const Kernel& k) { return [&k](const Point& a, const Point& b) { return k(b, a); }; };
    const auto z = oracle::dense_apply(tr(o.t2.kernel()), o.g, oracle::dense_apply(tr(o.t1.kernel()), o.g, y));
    double nz = 0.0, ny = 0.0, nx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      nz += z[i] * z[i];
      ny += y[i] * y[i];
      nx += x[i] * x[i];
    }
    norm = std::sqrt(ny / nx);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = z[i] / std::sqrt(nz);
  }
  CHECK(r.max_ratio * r.prefactor <= norm * (1 + 1e-9));
  CHECK(r.max_ratio * r.prefactor > 0.1 * norm);

  const Symbol two = symbol_gallery("constant", std::vector<double>{2.0}, o.g);
  const auto rc = lp_bound_experiment(LpVariant::commutator, 2.0, o.t1, o.t2, &two, one, fs);
  for (const auto& row : rc.rows) CHECK(row.lhs == 0.0);

  CHECK_THROWS_AS(lp_bound_experiment(LpVariant::t1_cancel, 2.0, o.t1, o.t2, nullptr, one, fs), Error);
  CHECK_THROWS_AS(lp_bound_experiment(LpVariant::commutator, 2.0, o.t1, o.t2, nullptr, one, fs), Error);
  const Ops p(7, "periodic-hilbert", "periodic-hilbert");
  const Weight w = weight_gallery("power", std::vector<double>{0.3}, p.g);
  for (LpVariant v : {LpVariant::t1_cancel, LpVariant::t2star_cancel}) {
    const auto rv = lp_bound_experiment(v, 3.0, p.t1, p.t2, nullptr, w, fs, "power(0.3)");
    CHECK(std::isfinite(rv.max_ratio));
    CHECK(rv.max_ratio > 0.0);
  }
  CHECK(parse_lp_variant(lp_variant_name(LpVariant::t2star_cancel)) == LpVariant::t2star_cancel);
}

TEST_CASE("chains") {
  const Ops o(7);
  const CZOperator t3(make_kernel("hilbert", o.g), o.g);
  const auto f = function_gallery("log-spike", {}, o.g);
  const Weight w = weight_gallery("power", std::vector<double>{0.3}, o.g);
  const auto lam = lambda_grid(apply_weak_variant(WeakVariant::composition, o.t1, o.t2, nullptr, f).sup_norm());

  const CZOperator* two[] = {&o.t1, &o.t2};
  const auto c2 = chain_experiment(two, f, w, lam, false, "power(0.3)");
  const auto wt = weak_type_experiment(WeakVariant::composition, o.t1, o.t2, nullptr, f, w, lam, "power(0.3)");
  REQUIRE(c2.rows.size() == wt.rows.size());
  CHECK(c2.id == wt.id);
  CHECK(c2.prefactor == wt.prefactor);
  for (std::size_t i = 0; i < lam.size(); ++i) {
    CHECK(c2.rows[i].lhs == wt.rows[i].lhs);
    CHECK(c2.rows[i].rhs == wt.rows[i].rhs);
    CHECK(c2.rows[i].ratio == wt.rows[i].ratio);
  }

  const CZOperator* three[] = {&o.t1, &o.t2, &t3};
  const auto c3 = chain_experiment(three, f, unit_weight(o.g), lam, true);
  CHECK(std::isfinite(c3.max_ratio));
  CHECK(c3.extra("reconstruction_residual") <= 1e-10);
  CHECK(c3.extra("sparse_ok") == 1.0);
  CHECK(c3.extra("family_size") >= 1.0);

  SampledFunction u = f;
  for (const CZOperator* t : {&t3, &o.t2, &o.t1}) u = t->apply(u);
  const std::vector<double> tail{u.sup_norm() * 1.01, u.sup_norm() * 4};
  for (const auto& row : chain_experiment(three, f, w, tail).rows) CHECK(row.lhs == 0.0);

  const CZOperator* four[] = {&o.t1, &o.t2, &t3, &o.t1};
  try {
    chain_experiment(four, f, w, lam);
    FAIL("expected chain-too-long");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::chain_too_long);
  }
}

TEST_CASE("unweighted distribution bounds") {
  const Ops o(7);
  const auto f = function_gallery("indicator", std::vector<double>{0.5}, o.g);
  const double hn = o.g.cell_measure();
  for (auto k : {DistributionKind::composite_grand, DistributionKind::composite_grand_commutator,
                 DistributionKind::maximal_plus_truncated, DistributionKind::maximal_commutator_inner,
                 DistributionKind::power_maximal_truncated}) {
    const auto v = distribution_operand(k, o.t1, o.t2, &o.b, f);
    const auto lam = lambda_grid(v.sup_norm() * 1.0000001);
    const auto r = distribution_experiment(k, o.t1, o.t2, &o.b, f, lam);
    CHECK(parse_distribution_kind(distribution_kind_name(k)) == k);
    const bool sq = k != DistributionKind::composite_grand && k != DistributionKind::maximal_plus_truncated;
    for (const auto& row : r.rows) {
      CHECK(row.lhs == doctest::Approx(oracle::level_measure(v.values, row.param, nullptr, hn)).epsilon(1e-13));
      CHECK(row.rhs == doctest::Approx(oracle::orlicz_mass(f.values, row.param, sq ? 2.0 : 1.0, nullptr, hn))
                           .epsilon(1e-12));
    }
    CHECK(std::isfinite(r.max_ratio));
    CHECK(r.max_ratio > 0.0);
  }
  CHECK_THROWS_AS(distribution_operand(DistributionKind::maximal_commutator_inner, o.t1, o.t2, nullptr, f), Error);
}

TEST_CASE("pointwise ladders") {
  const Ops o(7);
  std::vector<SampledFunction> fs;
  for (const char* name : {"indicator", "tent", "log-spike"}) fs.push_back(function_gallery(name, {}, o.g));
  fs.push_back(function_gallery("random-signs", {}, o.g, 11));
  for (auto k : {LadderKind::grand_maximal, LadderKind::composite, LadderKind::composite_commutator}) {
    const auto r = ladder_experiment(k, o.t1, o.t2, &o.b, fs);
    REQUIRE(r.rows.size() == fs.size());
    CHECK(parse_ladder_kind(ladder_kind_name(k)) == k);
    for (std::size_t j = 0; j < fs.size(); ++j) {
      const auto [lhs, rhs] = ladder_sides(k, o.t1, o.t2, &o.b, fs[j]);
      CHECK(std::isfinite(r.rows[j].ratio));
      for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] <= r.rows[j].ratio * rhs[i] * (1 + 1e-14));
    }
  }
  CHECK_THROWS_AS(ladder_experiment(LadderKind::composite_commutator, o.t1, o.t2, nullptr, fs), Error);
}
