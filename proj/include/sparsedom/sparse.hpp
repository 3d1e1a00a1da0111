#pragma once

// Sparse families of cubes with explicit witness sets, the sparse operators
// and bilinear forms built on them, and the G operator.

#include <iosfwd>
#include <string>
#include <vector>

#include "sparsedom/grid.hpp"

namespace sparsedom {

/// Member q stands for the region dilate(cubes[q], dilation) clipped to the
/// box; witnesses[q] are sorted cell indices inside that region.
struct SparseFamily {
  GridSpec grid;  // sample grid (unshifted)
  double eta = 1.0;
  double dilation = 1.0;
  std::vector<DyadicCube> cubes;
  std::vector<std::vector<std::size_t>> witnesses;

  std::size_t size() const { return cubes.size(); }
  CellBox region(std::size_t q) const;
  void add(const DyadicCube& q, std::vector<std::size_t> witness);
};

struct SparseReport {
  bool ok = true;
  double worst_ratio = 1.0;             // min |E_Q| / |Q|, 1 for the empty family
  std::size_t overlap_violations = 0;   // cells claimed by more than one witness
  std::size_t containment_violations = 0;  // witness cells outside their region
};

SparseReport verify_sparse(const SparseFamily& s);

/// sum_Q ||f||_{L(log L)^beta, Q} chi_Q
SampledFunction sparse_apply(const SparseFamily& s, const SampledFunction& f, double beta);

/// sum_Q |Q| ||f||_{beta1, Q} ||g||_{beta2, Q}
double bilinear_form(const SparseFamily& s, const SampledFunction& f, const SampledFunction& g, double beta1,
                     double beta2);

/// |Q|^{-1} int_Q |u - <u>_Q|
double oscillation(const SampledFunction& u, const DyadicCube& q);
double oscillation(const SampledFunction& u, const CellBox& region);

/// Gf = sum_{k >= 1} 2^{-k eps} sum_Q <|f|>_{2^k Q} chi_Q, with 2^k Q clipped to
/// the box and k running up to the first dilate that covers the box.
SampledFunction g_operator(const SparseFamily& s, const SampledFunction& f, double eps);

/// Cubes of the shifted grids, one per (Q, k) pair of the G operator, each
/// containing 2^k Q with side at most 6 * 2^k l(Q).
std::vector<DyadicCube> g_operator_cover(const SparseFamily& s);

/// Splits cubes by shifted grid and, per grid, keeps them coarse to fine while
/// the smallest kept ancestor retains half its measure outside kept children.
/// Witnesses are E_Q = Q minus its kept children; each family is 1/2-sparse.
std::vector<SparseFamily> resparsify(const GridSpec& grid, const std::vector<DyadicCube>& cubes);

/// Text format: header line, then per cube
/// "shift_id level i0 [i1] witness_count cell..." ; floats as hex.
void write_family(std::ostream& os, const SparseFamily& s);
SparseFamily read_family(std::istream& is);

}  // namespace sparsedom
