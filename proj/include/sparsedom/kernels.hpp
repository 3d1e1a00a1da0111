#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an OpenMP
// version; both evaluate every output with the same summation order, so their
// results agree bit for bit and the serial one can serve as a test oracle.

#include <algorithm>
#include <cstddef>
#include <span>

#include "sparsedom/grid.hpp"

namespace sparsedom::kernels {

template <class F>
void serial_for(std::size_t n, F&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

template <class F>
void parallel_for(std::size_t n, F&& fn) {
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

/// out[k] = sum_{j in src} coef(dst[k], j) * g[j]
template <class Coef>
void gather_apply_serial(const Coef& coef, std::span<const double> g,
                         std::span<const std::size_t> src, std::span<const std::size_t> dst,
                         std::span<double> out) {
  serial_for(dst.size(), [&](std::size_t k) {
    const std::size_t i = dst[k];
    double acc = 0.0;
    for (std::size_t j : src) acc += coef(i, j) * g[j];
    out[k] = acc;
  });
}

template <class Coef>
void gather_apply_omp(const Coef& coef, std::span<const double> g,
                      std::span<const std::size_t> src, std::span<const std::size_t> dst,
                      std::span<double> out) {
  parallel_for(dst.size(), [&](std::size_t k) {
    const std::size_t i = dst[k];
    double acc = 0.0;
    for (std::size_t j : src) acc += coef(i, j) * g[j];
    out[k] = acc;
  });
}

/// Odd circulant on n points: out[i] = sum_{d=1}^{n/2-1} k[d] (g[i-d] - g[i+d]),
/// indices mod n. Pairing the +d and -d terms makes constants map to exact 0.
inline void odd_circulant_apply_serial(std::span<const double> k, std::span<const double> g,
                                       std::span<double> out) {
  const std::size_t n = g.size();
  serial_for(n, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t d = 1; d < n / 2; ++d) acc += k[d] * (g[(i + n - d) % n] - g[(i + d) % n]);
    out[i] = acc;
  });
}

inline void odd_circulant_apply_omp(std::span<const double> k, std::span<const double> g,
                                    std::span<double> out) {
  const std::size_t n = g.size();
  parallel_for(n, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t d = 1; d < n / 2; ++d) acc += k[d] * (g[(i + n - d) % n] - g[(i + d) % n]);
    out[i] = acc;
  });
}

/// out[x] = max(out[x], vals[q]) for every cell x of boxes[q]. The boxes of
/// one call must be pairwise disjoint (one level of one grid).
inline void scatter_max_serial(std::span<const CellBox> boxes, std::span<const double> vals,
                               std::span<double> out) {
  serial_for(boxes.size(), [&](std::size_t q) {
    boxes[q].for_each([&](std::size_t x) { out[x] = std::max(out[x], vals[q]); });
  });
}

inline void scatter_max_omp(std::span<const CellBox> boxes, std::span<const double> vals,
                            std::span<double> out) {
  parallel_for(boxes.size(), [&](std::size_t q) {
    boxes[q].for_each([&](std::size_t x) { out[x] = std::max(out[x], vals[q]); });
  });
}

}  // namespace sparsedom::kernels
