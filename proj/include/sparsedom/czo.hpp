#pragma once

// Discretized singular integral operators on the finest grid, their
// truncations, commutators and grand maximal functions, and the good/bad
// splitting of a function at a given height.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/orlicz.hpp"

namespace sparsedom {

enum class KernelMode { compact, periodic };

/// K(x, y) = left(x) * profile(x - y). In periodic mode x - y is reduced to
/// (-L/2, L/2] before the profile is evaluated.
struct Kernel {
  std::string name;
  int dim = 1;
  double epsilon = 1.0;        // regularity exponent
  double size_constant = 0.0;  // sup |K(x,y)| |x-y|^n claimed for the kernel
  KernelMode mode = KernelMode::compact;
  bool odd = true;             // profile(-z) = -profile(z)
  std::function<double(const Point&)> left;  // empty means 1
  std::function<double(const Point&)> profile;

  double operator()(const Point& x, const Point& y) const;
};

/// hilbert, periodic-hilbert, riesz1, riesz2, bump (params: epsilon), zero.
Kernel make_kernel(const std::string& name, const GridSpec& grid, std::span<const double> params = {});

/// A linear map on sampled functions given through blocks of its matrix.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual const GridSpec& grid() const = 0;

  /// out[k] = sum_{j in src} A(dst[k], j) g[j]
  virtual void apply_block(std::span<const double> g, std::span<const std::size_t> src,
                           std::span<const std::size_t> dst, std::span<double> out) const = 0;

  virtual SampledFunction apply(const SampledFunction& f) const;
  SampledFunction apply(const SampledFunction& f, const CellMask& support) const;
  /// Values of A(f chi_src) on dst only.
  std::vector<double> apply_restricted(const SampledFunction& f, std::span<const std::size_t> src,
                                       std::span<const std::size_t> dst) const;
};

/// Midpoint quadrature of a kernel with the diagonal cell removed, stored as a
/// table indexed by the cell offset i - j.
class CZOperator final : public LinearOperator {
 public:
  CZOperator(Kernel kernel, const GridSpec& grid);

  const Kernel& kernel() const { return *kernel_; }
  const GridSpec& grid() const override { return grid_; }
  bool transposed() const { return transposed_; }

  /// A(i, j); zero on the diagonal.
  double coef(std::size_t i, std::size_t j) const {
    return transposed_ ? raw(j, i) : raw(i, j);
  }

  void apply_block(std::span<const double> g, std::span<const std::size_t> src,
                   std::span<const std::size_t> dst, std::span<double> out) const override;
  /// Full application; periodic odd operators pair +d and -d offsets so T(1) = 0 exactly.
  SampledFunction apply(const SampledFunction& f) const override;
  using LinearOperator::apply;

  /// Same routine with the serial reference kernels.
  SampledFunction apply_serial(const SampledFunction& f) const;

  /// Operator with kernel K(y, x).
  CZOperator adjoint() const;

  bool annihilates_constants() const;

  /// Distance used for truncations: Euclidean, or periodic in periodic mode.
  double distance(std::size_t i, std::size_t j) const;

 private:
  double raw(std::size_t i, std::size_t j) const;

  std::shared_ptr<const Kernel> kernel_;
  GridSpec grid_;
  bool transposed_ = false;
  std::shared_ptr<const std::vector<double>> offsets_;  // profile(i - j) h^n
  std::shared_ptr<const std::vector<double>> left_;     // left(x_i), empty if trivial
};

/// b T f - T(b f)
class Commutator final : public LinearOperator {
 public:
  Commutator(const LinearOperator& op, SampledFunction b);
  const GridSpec& grid() const override { return op_->grid(); }
  void apply_block(std::span<const double> g, std::span<const std::size_t> src,
                   std::span<const std::size_t> dst, std::span<double> out) const override;
  SampledFunction apply(const SampledFunction& f) const override;
  using LinearOperator::apply;

 private:
  const LinearOperator* op_;
  SampledFunction b_;
};

/// outer(inner f)
class Composition final : public LinearOperator {
 public:
  Composition(const LinearOperator& outer, const LinearOperator& inner);
  const GridSpec& grid() const override { return outer_->grid(); }
  void apply_block(std::span<const double> g, std::span<const std::size_t> src,
                   std::span<const std::size_t> dst, std::span<double> out) const override;
  SampledFunction apply(const SampledFunction& f) const override;
  using LinearOperator::apply;

 private:
  const LinearOperator* outer_;
  const LinearOperator* inner_;
};

/// Symbol b, optionally rescaled to unit BMO norm.
struct Symbol {
  SampledFunction b;
  bool normalized = false;
};

/// log(|x - x0|) (params: x0 as a fraction of L, default 1/2, rounded to a cell boundary), sawtooth (params:
/// number of terms K), constant (params: c). Nonconstant symbols are normalized.
Symbol symbol_gallery(const std::string& name, std::span<const double> params, const GridSpec& grid);

SampledFunction adjoint_apply(const CZOperator& t, const SampledFunction& g);
SampledFunction commutator_apply(const CZOperator& t, const Symbol& b, const SampledFunction& f);
SampledFunction commutator_apply(const CZOperator& t, const Symbol& b, const SampledFunction& f,
                                 const CellMask& support);

/// Truncation radii h 2^k, k = 0..m.
std::vector<double> truncation_radii(const GridSpec& grid);

/// T* f(x) = max over the radii of |sum_{|x - y| > r} A(x, y) f(y)|.
SampledFunction truncated_maximal(const CZOperator& t, const SampledFunction& f);
/// Same with the commutator kernel (b(x) - b(y)) A(x, y).
SampledFunction maximal_commutator(const CZOperator& t, const Symbol& b, const SampledFunction& f);

/// Reference versions evaluating every radius with its own full sum.
SampledFunction truncated_maximal_reference(const CZOperator& t, const SampledFunction& f,
                                            const SampledFunction* b = nullptr);

/// max over cells of Q of |T(f chi_{A minus 3Q})| where A = outer_region cells,
/// using T(f chi_A) - T(f chi_{3Q}). Requires 3Q inside A (clipped).
class SingleProbe {
 public:
  SingleProbe(const LinearOperator& t, const SampledFunction& f, const CellBox& region);
  double operator()(const DyadicCube& q, const CellBox& cells) const;

 private:
  const LinearOperator* t_;
  const SampledFunction* f_;
  SampledFunction full_;
};

/// max over cells of Q of |T1(chi_{box minus 3Q} T2(f chi_{A minus 9Q}))|, A = region.
class CompositeProbe {
 public:
  CompositeProbe(const LinearOperator& t1, const LinearOperator& t2, const SampledFunction& f,
                 const CellBox& region);
  double operator()(const DyadicCube& q, const CellBox& cells) const;

 private:
  const LinearOperator* t1_;
  const LinearOperator* t2_;
  const SampledFunction* f_;
  SampledFunction inner_;  // T2(f chi_A) on all cells
  SampledFunction outer_;  // T1 of it
};

/// M_T f(x) = sup_{Q ∋ x} max_{xi in Q} |T(f chi_{box minus 3Q})(xi)|
SampledFunction grand_maximal(const LinearOperator& t, const SampledFunction& f);
/// M*_{T1 T2} f, or with inner commutator T_{2,b} when b is given.
SampledFunction grand_composite(const LinearOperator& t1, const CZOperator& t2, const SampledFunction& f,
                                const Symbol* b = nullptr);

struct KernelReport {
  double size_ratio = 0.0;        // max |K| |x - y|^n
  double regularity_y = 0.0;      // max |K(x,y) - K(x,y')| |x-y|^{n+eps} / |y-y'|^eps
  double regularity_x = 0.0;      // same with x perturbed
  std::size_t samples = 0;
};

/// Random triples in the ambient box with |x - y| >= 2 |y - y'|.
KernelReport kernel_conditions_check(const Kernel& k, const GridSpec& grid, std::size_t samples,
                                     std::uint64_t seed);

struct BadPart {
  DyadicCube cube;
  bool clamped = false;
  SampledFunction h;
};

struct CZDecomposition {
  SampledFunction good;
  std::vector<BadPart> bad;
  int overlap = 0;
};

/// f = good + sum of bad parts, bad parts supported on the Whitney cubes of
/// {Mf > level} with zero mean.
CZDecomposition cz_decompose(const SampledFunction& f, double level, double R);

/// max over y outside 5Q of |T h(y)| |y - z_Q|^{n+eps} / (l(Q)^eps ||h||_1), +0 for h = 0.
double mean_zero_decay_ratio(const CZOperator& t, const BadPart& part);

}  // namespace sparsedom
