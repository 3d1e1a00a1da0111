#include "sparsedom/endpoint.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "sparsedom/domination.hpp"
#include "sparsedom/orlicz.hpp"

namespace sparsedom {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double log_e(double x) { return std::log(std::numbers::e + x); }

double conjugate(double p) { return p / (p - 1.0); }

void check_p(double p) {
  if (!(p > 1.1 && p <= 4.0)) throw Error(Errc::invalid_argument, "p must lie in (1.1, 4]");
}

const Symbol& need_symbol(const Symbol* b) {
  if (!b) throw Error(Errc::missing_symbol, "variant needs a symbol b");
  return *b;
}

// (int |g|^p u)^{1/p}; u = nullptr means u = 1
double lp_norm(const SampledFunction& g, double p, const SampledFunction* u) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += std::pow(std::abs(g[i]), p) * (u ? (*u)[i] : 1.0);
  return std::pow(s * g.grid.cell_measure(), 1.0 / p);
}

SampledFunction abs_sum(const SampledFunction& a, const SampledFunction& b) {
  SampledFunction out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::abs(a[i]) + std::abs(b[i]);
  return out;
}

// Rows over a lambda sweep: measure of {|uf| > lam} against prefactor * orlicz integral.
void distribution_rows(ExperimentReport& r, const SampledFunction& uf, const SampledFunction& f, double k,
                       double prefactor, const SampledFunction* measure_weight, const SampledFunction* rhs_weight,
                       std::span<const double> lambdas) {
  r.prefactor = prefactor;
  r.rows.reserve(lambdas.size());
  for (double lam : lambdas) {
    if (!(lam > 0.0)) throw Error(Errc::invalid_argument, "lambda must be positive");
    r.add_row(lam, level_set_measure(uf, lam, measure_weight), prefactor * orlicz_integral(f, lam, k, rhs_weight));
  }
  r.finalize();
  check_distribution_monotone(r);
}

double weak_prefactor(const WeightConstants& c, int chain_length) {
  return c.a1 * std::pow(c.ainfty, chain_length - 1) * log_e(c.ainfty);
}

}  // namespace

// ---- report -----------------------------------------------------------------

void ExperimentReport::add_row(double param, double lhs, double rhs) {
  double ratio = 0.0;
  if (rhs > 0.0)
    ratio = lhs / rhs;
  else if (lhs > 0.0)
    ratio = std::numeric_limits<double>::infinity();
  rows.push_back({param, lhs, rhs, ratio});
}

void ExperimentReport::finalize() {
  std::vector<double> r;
  r.reserve(rows.size());
  for (const auto& row : rows) r.push_back(row.ratio);
  if (r.empty()) {
    max_ratio = median_ratio = 0.0;
    return;
  }
  std::sort(r.begin(), r.end());
  max_ratio = r.back();
  const std::size_t h = r.size() / 2;
  median_ratio = r.size() % 2 ? r[h] : 0.5 * (r[h - 1] + r[h]);
}

double ExperimentReport::extra(const std::string& key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  throw Error(Errc::unknown_key, "report has no extra '" + key + "'");
}

std::vector<double> lambda_grid(double scale, std::size_t count, double lo, double hi) {
  if (!(lo > 0.0 && hi >= lo)) throw Error(Errc::invalid_argument, "lambda range needs 0 < lo <= hi");
  std::vector<double> out;
  if (!(scale > 0.0) || count == 0) return out;
  if (count == 1) return {lo * scale};
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(scale * std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1)));
  return out;
}

void check_distribution_monotone(const ExperimentReport& r) {
  std::vector<ReportRow> rows = r.rows;
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) { return a.param < b.param; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].lhs > rows[i - 1].lhs)
      throw Error(Errc::invariant_failure, r.id + ": distribution function increases in lambda");
    if (rows[i].rhs > rows[i - 1].rhs * (1.0 + 1e-12))
      throw Error(Errc::invariant_failure, r.id + ": right side increases in lambda");
  }
}

// ---- weak type ------------------------------------------------------------------

WeakVariant parse_weak_variant(const std::string& name) {
  if (name == "composition") return WeakVariant::composition;
  if (name == "composition-T1-cancel") return WeakVariant::composition_t1_cancel;
  if (name == "commutator") return WeakVariant::commutator;
  throw Error(Errc::unknown_name, "unknown variant '" + name + "'");
}

const char* weak_variant_name(WeakVariant v) {
  switch (v) {
    case WeakVariant::composition: return "composition";
    case WeakVariant::composition_t1_cancel: return "composition-T1-cancel";
    case WeakVariant::commutator: return "commutator";
  }
  return "?";
}

SampledFunction apply_weak_variant(WeakVariant v, const CZOperator& t1, const CZOperator& t2, const Symbol* b,
                                   const SampledFunction& f) {
  const SampledFunction inner = t2.apply(f);
  if (v != WeakVariant::commutator) return t1.apply(inner);
  return Commutator(t1, need_symbol(b).b).apply(inner);
}

ExperimentReport weak_type_experiment(WeakVariant v, const CZOperator& t1, const CZOperator& t2, const Symbol* b,
                                      const SampledFunction& f, const Weight& w, std::span<const double> lambdas,
                                      const std::string& weight_name) {
  const auto t0 = Clock::now();
  if (v == WeakVariant::composition_t1_cancel && !t1.annihilates_constants())
    throw Error(Errc::variant_hypothesis_violation, "composition-T1-cancel needs T1(1) = 0");
  if (v == WeakVariant::commutator && !b)
    throw Error(Errc::variant_hypothesis_violation, "commutator variant needs a symbol");
  ExperimentReport r;
  r.id = std::string("weak-type/") + weak_variant_name(v);
  r.weight = weight_name;
  r.m = f.grid.finest_level;
  r.constants = w.constants(2.0);
  if (!std::isfinite(r.constants.a1))
    throw Error(Errc::variant_hypothesis_violation, "weight has no finite A_1 constant");
  const double ai = r.constants.ainfty;
  double pref = 0.0, k = 1.0;
  switch (v) {
    case WeakVariant::composition: pref = weak_prefactor(r.constants, 2); break;
    case WeakVariant::composition_t1_cancel: pref = r.constants.a1 * log_e(ai) * log_e(ai); break;
    case WeakVariant::commutator:
      pref = r.constants.a1 * ai * ai * log_e(ai);
      k = 2.0;
      break;
  }
  const SampledFunction uf = apply_weak_variant(v, t1, t2, b, f);
  distribution_rows(r, uf, f, k, pref, &w.values(), &w.values(), lambdas);
  r.runtime_seconds = seconds_since(t0);
  return r;
}

FeffermanSteinShape fefferman_stein_shape(WeakVariant v, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::invalid_argument, "eps must lie in (0, 1)");
  switch (v) {
    case WeakVariant::composition: return {1.0 / eps, 1.0 + eps, 1.0};
    case WeakVariant::composition_t1_cancel: return {1.0 / (eps * eps), eps, 1.0};
    case WeakVariant::commutator: return {1.0 / eps, 2.0 + eps, 2.0};
  }
  return {1.0, 1.0, 1.0};
}

ExperimentReport fefferman_stein_experiment(WeakVariant v, double eps, const CZOperator& t1, const CZOperator& t2,
                                            const Symbol* b, const SampledFunction& f, const SampledFunction& u,
                                            std::span<const double> lambdas, const std::string& weight_name) {
  const auto t0 = Clock::now();
  const FeffermanSteinShape shape = fefferman_stein_shape(v, eps);
  if (v == WeakVariant::composition_t1_cancel && !t1.annihilates_constants())
    throw Error(Errc::variant_hypothesis_violation, "composition-T1-cancel needs T1(1) = 0");
  if (v == WeakVariant::commutator && !b)
    throw Error(Errc::variant_hypothesis_violation, "commutator variant needs a symbol");
  ExperimentReport r;
  r.id = std::string("fefferman-stein/") + weak_variant_name(v);
  r.weight = weight_name;
  r.m = f.grid.finest_level;
  const SampledFunction mu = maximal(u, shape.beta);
  r.extras.push_back({"eps", eps});
  r.extras.push_back({"orlicz_exponent", shape.beta});
  r.extras.push_back({"min_orlicz_maximal", *std::min_element(mu.values.begin(), mu.values.end())});
  const SampledFunction uf = apply_weak_variant(v, t1, t2, b, f);
  distribution_rows(r, uf, f, shape.k, shape.prefactor, &u, &mu, lambdas);
  r.runtime_seconds = seconds_since(t0);
  return r;
}

// ---- sparse operator bounds ---------------------------------------------------------

ExperimentReport sparse_bound_experiment(const SparseFamily& s, double beta, double p, double eps,
                                         const SampledFunction& u, std::span<const SampledFunction> gs,
                                         const std::string& weight_name) {
  const auto t0 = Clock::now();
  check_p(p);
  if (!(eps > 0.0 && eps <= 1.0)) throw Error(Errc::invalid_argument, "eps must lie in (0, 1]");
  if (beta < 0.0) throw Error(Errc::invalid_exponent_combination, "beta must be nonnegative");
  ExperimentReport r;
  r.id = "sparse-bound/orlicz-maximal";
  r.column = "function";
  r.weight = weight_name;
  r.m = s.grid.finest_level;
  const double pp = conjugate(p);
  r.prefactor = std::pow(pp, 1.0 + beta) * p * p * std::pow(eps, -1.0 / pp);
  const SampledFunction mu = maximal(u, p - 1.0 + eps);
  r.extras.push_back({"beta", beta});
  r.extras.push_back({"p", p});
  r.extras.push_back({"eps", eps});
  for (std::size_t j = 0; j < gs.size(); ++j) {
    const SampledFunction a = sparse_apply(s, gs[j], beta);
    r.add_row(static_cast<double>(j), lp_norm(a, p, &u), r.prefactor * lp_norm(gs[j], p, &mu));
  }
  r.finalize();
  r.runtime_seconds = seconds_since(t0);
  return r;
}

double ap_base_prefactor(const WeightConstants& c) {
  const double pp = conjugate(c.p);
  return std::pow(c.ap, 1.0 / c.p) * (std::pow(c.ainfty, 1.0 / pp) + std::pow(c.sigma_ainfty, 1.0 / c.p));
}

ExperimentReport sparse_bound_ap_experiment(const SparseFamily& s, double beta, double p, const Weight& w,
                                            std::span<const SampledFunction> gs, const std::string& weight_name) {
  const auto t0 = Clock::now();
  check_p(p);
  if (beta < 0.0) throw Error(Errc::invalid_exponent_combination, "beta must be nonnegative");
  ExperimentReport r;
  r.id = "sparse-bound/ap";
  r.column = "function";
  r.weight = weight_name;
  r.m = s.grid.finest_level;
  r.constants = w.constants(p);
  r.prefactor = ap_base_prefactor(r.constants) * std::pow(r.constants.sigma_ainfty, beta);
  r.extras.push_back({"beta", beta});
  r.extras.push_back({"p", p});
  for (std::size_t j = 0; j < gs.size(); ++j) {
    const SampledFunction a = sparse_apply(s, gs[j], beta);
    r.add_row(static_cast<double>(j), lp_norm(a, p, &w.values()), r.prefactor * lp_norm(gs[j], p, &w.values()));
  }
  r.finalize();
  r.runtime_seconds = seconds_since(t0);
  return r;
}

// ---- L^p ratios ---------------------------------------------------------------------

LpVariant parse_lp_variant(const std::string& name) {
  if (name == "T1T2-plain") return LpVariant::plain;
  if (name == "T1-cancel") return LpVariant::t1_cancel;
  if (name == "T2star-cancel") return LpVariant::t2star_cancel;
  if (name == "commutator") return LpVariant::commutator;
  throw Error(Errc::unknown_name, "unknown L^p variant '" + name + "'");
}

const char* lp_variant_name(LpVariant v) {
  switch (v) {
    case LpVariant::plain: return "T1T2-plain";
    case LpVariant::t1_cancel: return "T1-cancel";
    case LpVariant::t2star_cancel: return "T2star-cancel";
    case LpVariant::commutator: return "commutator";
  }
  return "?";
}

ExperimentReport lp_bound_experiment(LpVariant v, double p, const CZOperator& t1, const CZOperator& t2,
                                     const Symbol* b, const Weight& w, std::span<const SampledFunction> fs,
                                     const std::string& weight_name) {
  const auto t0 = Clock::now();
  check_p(p);
  if (v == LpVariant::t1_cancel && !t1.annihilates_constants())
    throw Error(Errc::variant_hypothesis_violation, "T1-cancel needs T1(1) = 0");
  if (v == LpVariant::t2star_cancel && !t2.adjoint().annihilates_constants())
    throw Error(Errc::variant_hypothesis_violation, "T2star-cancel needs T2*(1) = 0");
  if (v == LpVariant::commutator && !b)
    throw Error(Errc::variant_hypothesis_violation, "commutator variant needs a symbol");
  ExperimentReport r;
  r.id = std::string("lp-bound/") + lp_variant_name(v);
  r.column = "function";
  r.weight = weight_name;
  r.m = w.grid().finest_level;
  r.constants = w.constants(p);
  const WeightConstants& c = r.constants;
  const double base = ap_base_prefactor(c);
  switch (v) {
    case LpVariant::plain: r.prefactor = base; break;
    case LpVariant::t1_cancel: r.prefactor = base * c.sigma_ainfty; break;
    case LpVariant::t2star_cancel: r.prefactor = base * c.ainfty; break;
    case LpVariant::commutator: {
      const double bmo = bmo_norm(b->b);
      r.extras.push_back({"bmo", bmo});
      const double s = c.ainfty + c.sigma_ainfty;
      r.prefactor = bmo * base * s * s;
      break;
    }
  }
  r.extras.push_back({"p", p});
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const SampledFunction inner = t2.apply(fs[j]);
    const SampledFunction uf =
        v == LpVariant::commutator ? Commutator(t1, b->b).apply(inner) : t1.apply(inner);
    r.add_row(static_cast<double>(j), lp_norm(uf, p, &w.values()), r.prefactor * lp_norm(fs[j], p, &w.values()));
  }
  r.finalize();
  r.runtime_seconds = seconds_since(t0);
  return r;
}

// ---- chains -------------------------------------------------------------------------

ExperimentReport chain_experiment(std::span<const CZOperator* const> ops, const SampledFunction& f,
                                  const Weight& w, std::span<const double> lambdas, bool dominate,
                                  const std::string& weight_name) {
  const auto t0 = Clock::now();
  if (ops.size() > 3) throw Error(Errc::chain_too_long, "chains are limited to three operators");
  if (ops.size() < 2) throw Error(Errc::invalid_argument, "a chain needs at least two operators");
  const int m = static_cast<int>(ops.size());
  ExperimentReport r;
  r.id = m == 2 ? std::string("weak-type/composition") : "chain/" + std::to_string(m);
  r.weight = weight_name;
  r.m = f.grid.finest_level;
  r.constants = w.constants(2.0);
  if (!std::isfinite(r.constants.a1))
    throw Error(Errc::variant_hypothesis_violation, "weight has no finite A_1 constant");

  SampledFunction uf = f;
  for (std::size_t j = ops.size(); j-- > 0;) uf = ops[j]->apply(uf);
  distribution_rows(r, uf, f, m - 1.0, weak_prefactor(r.constants, m), &w.values(), &w.values(), lambdas);

  if (dominate) {
    std::optional<Composition> tail;
    const LinearOperator* inner = ops[1];
    if (m == 3) inner = &tail.emplace(*ops[1], *ops[2]);
    const DominationResult res = dominate_composition(*ops[0], *inner, f);
    const double residual = verify_reconstruction(res, uf);
    const SparseReport sr = verify_sparse(res.family);
    r.extras.push_back({"reconstruction_residual", residual});
    r.extras.push_back({"family_size", static_cast<double>(res.family.size())});
    r.extras.push_back({"sparse_ok", sr.ok ? 1.0 : 0.0});
    if (!(residual <= 1e-10)) throw Error(Errc::invariant_failure, "chain reconstruction residual too large");
    if (!sr.ok) throw Error(Errc::invariant_failure, "chain family is not sparse");
  }
  r.runtime_seconds = seconds_since(t0);
  return r;
}

// ---- unweighted distribution bounds ---------------------------------------------------

DistributionKind parse_distribution_kind(const std::string& name) {
  if (name == "composite-grand") return DistributionKind::composite_grand;
  if (name == "composite-grand-commutator") return DistributionKind::composite_grand_commutator;
  if (name == "maximal-plus-truncated") return DistributionKind::maximal_plus_truncated;
  if (name == "maximal-commutator-inner") return DistributionKind::maximal_commutator_inner;
  if (name == "power-maximal-truncated") return DistributionKind::power_maximal_truncated;
  throw Error(Errc::unknown_name, "unknown distribution kind '" + name + "'");
}

const char* distribution_kind_name(DistributionKind k) {
  switch (k) {
    case DistributionKind::composite_grand: return "composite-grand";
    case DistributionKind::composite_grand_commutator: return "composite-grand-commutator";
    case DistributionKind::maximal_plus_truncated: return "maximal-plus-truncated";
    case DistributionKind::maximal_commutator_inner: return "maximal-commutator-inner";
    case DistributionKind::power_maximal_truncated: return "power-maximal-truncated";
  }
  return "?";
}

SampledFunction distribution_operand(DistributionKind k, const CZOperator& t1, const CZOperator& t2,
                                     const Symbol* b, const SampledFunction& f) {
  switch (k) {
    case DistributionKind::composite_grand: return grand_composite(t1, t2, f);
    case DistributionKind::composite_grand_commutator: return grand_composite(t1, t2, f, &need_symbol(b));
    case DistributionKind::maximal_plus_truncated: {
      const SampledFunction inner = t2.apply(f);
      return abs_sum(maximal(inner), truncated_maximal(t1, inner));
    }
    case DistributionKind::maximal_commutator_inner:
      return maximal(commutator_apply(t2, need_symbol(b), f));
    case DistributionKind::power_maximal_truncated:
      return maximal(truncated_maximal(t1, commutator_apply(t2, need_symbol(b), f)), 0.0, 0.5);
  }
  return f;
}

ExperimentReport distribution_experiment(DistributionKind k, const CZOperator& t1, const CZOperator& t2,
                                         const Symbol* b, const SampledFunction& f,
                                         std::span<const double> lambdas) {
  const auto t0 = Clock::now();
  ExperimentReport r;
  r.id = std::string("distribution/") + distribution_kind_name(k);
  r.m = f.grid.finest_level;
  const bool squared = k != DistributionKind::composite_grand && k != DistributionKind::maximal_plus_truncated;
  const SampledFunction v = distribution_operand(k, t1, t2, b, f);
  distribution_rows(r, v, f, squared ? 2.0 : 1.0, 1.0, nullptr, nullptr, lambdas);
  r.runtime_seconds = seconds_since(t0);
  return r;
}

// ---- pointwise ladders ------------------------------------------------------------------

LadderKind parse_ladder_kind(const std::string& name) {
  if (name == "grand-maximal") return LadderKind::grand_maximal;
  if (name == "composite") return LadderKind::composite;
  if (name == "composite-commutator") return LadderKind::composite_commutator;
  throw Error(Errc::unknown_name, "unknown ladder '" + name + "'");
}

const char* ladder_kind_name(LadderKind k) {
  switch (k) {
    case LadderKind::grand_maximal: return "grand-maximal";
    case LadderKind::composite: return "composite";
    case LadderKind::composite_commutator: return "composite-commutator";
  }
  return "?";
}

std::pair<SampledFunction, SampledFunction> ladder_sides(LadderKind k, const CZOperator& t1, const CZOperator& t2,
                                                         const Symbol* b, const SampledFunction& f) {
  switch (k) {
    case LadderKind::grand_maximal:
      return {grand_maximal(t1, f), abs_sum(truncated_maximal(t1, f), maximal(f))};
    case LadderKind::composite: {
      const SampledFunction inner = t2.apply(f);
      SampledFunction rhs = abs_sum(maximal(truncated_maximal(t1, inner), 0.0, 0.5), maximal(f, 1.0));
      rhs = abs_sum(rhs, maximal(inner));
      return {grand_composite(t1, t2, f), std::move(rhs)};
    }
    case LadderKind::composite_commutator: {
      const Symbol& s = need_symbol(b);
      const SampledFunction inner = commutator_apply(t2, s, f);
      SampledFunction rhs = abs_sum(maximal(truncated_maximal(t1, inner), 0.0, 0.5), maximal(inner));
      rhs = abs_sum(rhs, maximal(f, 2.0));
      return {grand_composite(t1, t2, f, &s), std::move(rhs)};
    }
  }
  return {f, f};
}

ExperimentReport ladder_experiment(LadderKind k, const CZOperator& t1, const CZOperator& t2, const Symbol* b,
                                   std::span<const SampledFunction> fs) {
  const auto t0 = Clock::now();
  ExperimentReport r;
  r.id = std::string("ladder/") + ladder_kind_name(k);
  r.column = "function";
  r.m = t1.grid().finest_level;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const auto [lhs, rhs] = ladder_sides(k, t1, t2, b, fs[j]);
    double worst = -1.0, wl = 0.0, wr = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      double q = 0.0;
      if (rhs[i] > 0.0)
        q = lhs[i] / rhs[i];
      else if (lhs[i] > 0.0)
        q = std::numeric_limits<double>::infinity();
      if (q > worst) {
        worst = q;
        wl = lhs[i];
        wr = rhs[i];
      }
    }
    r.rows.push_back({static_cast<double>(j), wl, wr, std::max(worst, 0.0)});
  }
  r.finalize();
  r.runtime_seconds = seconds_since(t0);
  return r;
}

}  // namespace sparsedom
