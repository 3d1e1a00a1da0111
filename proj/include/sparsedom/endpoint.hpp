#pragma once

// Ratio experiments for the weighted weak-type, Fefferman-Stein, sparse and
// L^p inequalities, unweighted distribution bounds and pointwise ladders.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sparsedom/czo.hpp"
#include "sparsedom/sparse.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom {

struct ReportRow {
  double param = 0.0;  // lambda, or the index of the test function
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs; 0 when both vanish, +inf when only rhs does
};

struct ExperimentReport {
  std::string id;
  std::string column = "lambda";
  std::string weight = "constant(1)";
  WeightConstants constants;
  int m = 0;
  double prefactor = 1.0;
  std::vector<ReportRow> rows;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  double runtime_seconds = 0.0;  // kept out of emitted files
  std::vector<std::pair<std::string, double>> extras;

  void add_row(double param, double lhs, double rhs);
  /// Recomputes max and median over the rows.
  void finalize();
  double extra(const std::string& key) const;
};

/// count points log-spaced over [lo, hi] * scale; empty when scale is 0.
std::vector<double> lambda_grid(double scale, std::size_t count = 20, double lo = 1e-3, double hi = 10.0);

/// Throws invariant_failure unless lhs is non-increasing in lambda (exact)
/// and rhs is non-increasing up to a relative 1e-12.
void check_distribution_monotone(const ExperimentReport& r);

enum class WeakVariant { composition, composition_t1_cancel, commutator };

WeakVariant parse_weak_variant(const std::string& name);
const char* weak_variant_name(WeakVariant v);

/// T1 T2 f, or T_{1,b} T2 f for the commutator variant.
SampledFunction apply_weak_variant(WeakVariant v, const CZOperator& t1, const CZOperator& t2, const Symbol* b,
                                   const SampledFunction& f);

/// w({|Uf| > lam}) against the weighted L(log L)^k right side with its
/// A_1 / A_inf prefactor.
ExperimentReport weak_type_experiment(WeakVariant v, const CZOperator& t1, const CZOperator& t2, const Symbol* b,
                                      const SampledFunction& f, const Weight& w, std::span<const double> lambdas,
                                      const std::string& weight_name = "constant(1)");

/// u({|Uf| > lam}) against eps^{-a} int (|f|/lam) log^k(e + |f|/lam) M_{L(log L)^beta} u.
ExperimentReport fefferman_stein_experiment(WeakVariant v, double eps, const CZOperator& t1, const CZOperator& t2,
                                            const Symbol* b, const SampledFunction& f, const SampledFunction& u,
                                            std::span<const double> lambdas,
                                            const std::string& weight_name = "constant(1)");

/// (prefactor, Orlicz exponent of u, integrand power k) of the variant.
struct FeffermanSteinShape {
  double prefactor;
  double beta;
  double k;
};
FeffermanSteinShape fefferman_stein_shape(WeakVariant v, double eps);

/// ||A_{S,beta} g||_{L^p(u)} / (p'^{1+beta} p^2 eps^{-1/p'} ||g||_{L^p(M_{L(log L)^{p-1+eps}} u)}),
/// one row per g.
ExperimentReport sparse_bound_experiment(const SparseFamily& s, double beta, double p, double eps,
                                         const SampledFunction& u, std::span<const SampledFunction> gs,
                                         const std::string& weight_name = "constant(1)");
/// ||A_{S,beta} g||_{L^p(w)} / ([w]_{A_p}^{1/p}([w]_{A_inf}^{1/p'} + [sigma]_{A_inf}^{1/p}) [sigma]_{A_inf}^beta ||g||_{L^p(w)}).
ExperimentReport sparse_bound_ap_experiment(const SparseFamily& s, double beta, double p, const Weight& w,
                                            std::span<const SampledFunction> gs,
                                            const std::string& weight_name = "constant(1)");

enum class LpVariant { plain, t1_cancel, t2star_cancel, commutator };

LpVariant parse_lp_variant(const std::string& name);
const char* lp_variant_name(LpVariant v);

/// [w]_{A_p}^{1/p}([w]_{A_inf}^{1/p'} + [sigma]_{A_inf}^{1/p})
double ap_base_prefactor(const WeightConstants& c);

/// ||Uf||_{L^p(w)} / (prefactor ||f||_{L^p(w)}), one row per f.
ExperimentReport lp_bound_experiment(LpVariant v, double p, const CZOperator& t1, const CZOperator& t2,
                                     const Symbol* b, const Weight& w, std::span<const SampledFunction> fs,
                                     const std::string& weight_name = "constant(1)");

/// Weak type of T1 ... Tm f (2 <= m <= 3) with integrand log^{m-1}. With
/// dominate set, the chain is also decomposed and its reconstruction and
/// sparsity recorded as extras (invariant_failure when either fails).
ExperimentReport chain_experiment(std::span<const CZOperator* const> ops, const SampledFunction& f,
                                  const Weight& w, std::span<const double> lambdas, bool dominate = false,
                                  const std::string& weight_name = "constant(1)");

enum class DistributionKind {
  composite_grand,              // M*_{T1T2} f, log
  composite_grand_commutator,   // M*_{T1T2,b} f, log^2
  maximal_plus_truncated,       // M T2 f + T1* T2 f, log
  maximal_commutator_inner,     // M T_{2,b} f, log^2
  power_maximal_truncated       // M_{1/2} T1* T_{2,b} f, log^2
};

DistributionKind parse_distribution_kind(const std::string& name);
const char* distribution_kind_name(DistributionKind k);

/// The sampled function whose level sets the kind measures.
SampledFunction distribution_operand(DistributionKind k, const CZOperator& t1, const CZOperator& t2,
                                     const Symbol* b, const SampledFunction& f);

/// |{V f > lam}| against int (|f|/lam) log^k(e + |f|/lam).
ExperimentReport distribution_experiment(DistributionKind k, const CZOperator& t1, const CZOperator& t2,
                                         const Symbol* b, const SampledFunction& f,
                                         std::span<const double> lambdas);

enum class LadderKind {
  grand_maximal,          // M_T f <= C (T* f + M f)
  composite,              // M*_{T1T2} f <= C (M_{1/2} T1* T2 f + M_{L log L} f + M T2 f)
  composite_commutator    // M*_{T1T2,b} f <= C (M_{1/2} T1* T_{2,b} f + M T_{2,b} f + M_{L(log L)^2} f)
};

LadderKind parse_ladder_kind(const std::string& name);
const char* ladder_kind_name(LadderKind k);

/// Pointwise sides of a ladder; the grand_maximal kind uses t1 only.
std::pair<SampledFunction, SampledFunction> ladder_sides(LadderKind k, const CZOperator& t1, const CZOperator& t2,
                                                         const Symbol* b, const SampledFunction& f);

/// One row per f: lhs and rhs at the worst cell, ratio = max over cells of lhs / rhs.
ExperimentReport ladder_experiment(LadderKind k, const CZOperator& t1, const CZOperator& t2, const Symbol* b,
                                   std::span<const SampledFunction> fs);

}  // namespace sparsedom
