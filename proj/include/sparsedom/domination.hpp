#pragma once

// Recursive stopping-time construction producing a sparse family and the
// pieces of T1 T2 f (two parts) or T_{1,b} T2 f (three parts).

#include <iosfwd>
#include <optional>
#include <vector>

#include "sparsedom/czo.hpp"
#include "sparsedom/sparse.hpp"

namespace sparsedom {

enum class DominationVariant { composition, commutator };

struct LocalMaximals {
  SampledFunction m_t2;       // M_{T2,Q0} f, mask 3Q0 minus 3Q
  SampledFunction m_t1t2;     // M*_{T1T2;Q0} f, inner mask 9Q0 minus 9Q
  SampledFunction m_t1t2b;    // M*_{T1T2,b;Q0} f; empty without a symbol
};

/// Local grand maximal functions: sups over dyadic subcubes Q of Q0 containing
/// the cell, values zero outside Q0.
LocalMaximals local_grand_maximals(const DyadicCube& q0, const SampledFunction& f, const LinearOperator& t1,
                                   const LinearOperator& t2, const Symbol* b);

/// Per-stage data: reference norms on 9 Q0 and the maximal functions whose
/// superlevel sets form the exceptional set.
struct StageContext {
  DyadicCube q0;
  DominationVariant variant = DominationVariant::composition;
  CellBox cells;                 // cells of Q0
  double b_mean = 0.0;           // <b>_{Q0}
  double ref_llogl2 = 0.0;       // ||f||_{L(log L)^2, 9Q0}
  double ref_llogl = 0.0;        // ||f||_{L log L, 9Q0}
  double ref_avg = 0.0;          // <|f|>_{9Q0}
  SampledFunction target;        // U(f chi_{9Q0}), meaningful on Q0
  /// (values, reference) pairs; E is the union of {values > D reference} on Q0
  std::vector<std::pair<SampledFunction, double>> tests;
};

StageContext make_stage(const DyadicCube& q0, const SampledFunction& f, const LinearOperator& t1,
                        const LinearOperator& t2, const Symbol* b);

CellMask exceptional_set(const StageContext& ctx, double d);

/// Smallest D in {1, 2, 4, ...} with |E(D)| <= 2^{-(n+2)} |Q0|.
double choose_threshold(const StageContext& ctx);

struct StageSplit {
  std::vector<DyadicCube> stops;   // maximal subcubes P with |P cap E| > 2^{-(n+1)} |P|
  std::vector<SampledFunction> parts;  // G0, G1, G2 (commutator) or G0, G2 (composition)
};

StageSplit decompose_once(const StageContext& ctx, const CellMask& e, const SampledFunction& f,
                          const LinearOperator& t1, const LinearOperator& t2, const Symbol* b);

struct DominationResult {
  DominationVariant variant = DominationVariant::composition;
  SparseFamily family;                  // dilation 9, eta 9^{-n}/2
  std::vector<SampledFunction> parts;   // J0, J1 or H0, H1, H2
  std::vector<double> thresholds;       // D per family cube
  std::vector<int> stage;               // generation per family cube
  std::size_t clamp_count = 0;          // stage cubes at the finest level
  DyadicCube root;

  SampledFunction sum() const;
};

DominationResult dominate_composition(const LinearOperator& t1, const LinearOperator& t2,
                                      const SampledFunction& f);
DominationResult dominate_commutator_composition(const LinearOperator& t1, const Symbol& b,
                                                 const LinearOperator& t2, const SampledFunction& f);

/// ||sum parts - target||_inf / (||target||_inf + 1e-30)
double verify_reconstruction(const DominationResult& res, const SampledFunction& target);

/// Orlicz exponents (beta_f, beta_g) paired with part j.
std::pair<double, double> part_exponents(DominationVariant v, std::size_t j);

/// (|int (sum parts) g|, sum_j A_{S; beta_f(j), beta_g(j)}(f, g))
std::pair<double, double> domination_sides(const DominationResult& res, const SampledFunction& f,
                                           const SampledFunction& g);
/// |int (sum parts) g| / sum_j A_{S; beta_f(j), beta_g(j)}(f, g); 0 when both vanish.
double domination_ratio(const DominationResult& res, const SampledFunction& f, const SampledFunction& g);
/// Same for a single part against its own form.
double part_ratio(const DominationResult& res, std::size_t j, const SampledFunction& f, const SampledFunction& g);

void write_result(std::ostream& os, const DominationResult& res);
DominationResult read_result(std::istream& is);

}  // namespace sparsedom
