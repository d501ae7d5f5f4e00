#pragma once

/**
 * Discrete Fourier analysis on G^d with the normalization
 *
 *   fhat(m) = q^{-d} sum_x f(x) chi(-x.m),     f(x) = sum_m fhat(m) chi(x.m),
 *
 * where x.m is the G-valued dot product and chi is the canonical additive
 * character of the domain. The pairing is separable across coordinates, so
 * transforms apply a q x q character matrix along each axis in turn.
 */

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "starcensus/geometry.hpp"

namespace starcensus {

/// Dense function on G^d indexed by GridShape.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid(DomainPtr ctx, int dim) : shape_(std::move(ctx), dim), values_(shape_.size()) {}
  explicit Grid(GridShape shape) : shape_(std::move(shape)), values_(shape_.size()) {}

  const GridShape& shape() const noexcept { return shape_; }
  const Domain& domain() const noexcept { return shape_.domain(); }
  int dim() const noexcept { return shape_.dim(); }
  std::size_t size() const noexcept { return values_.size(); }

  T& operator[](std::size_t i) noexcept { return values_[i]; }
  const T& operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }

  T mass() const {
    T acc{};
    for (const T& v : values_) acc += v;
    return acc;
  }

 private:
  GridShape shape_;
  std::vector<T> values_;
};

using IntGrid = Grid<std::int64_t>;
using ComplexGrid = Grid<std::complex<double>>;

/// Fourier coefficients fhat(m), indexed by frequency m.
class Spectrum : public ComplexGrid {
 public:
  using ComplexGrid::ComplexGrid;
  explicit Spectrum(ComplexGrid grid) : ComplexGrid(std::move(grid)) {}
};

/// Indicator of a point set.
IntGrid indicator(const PointSet& set);

Spectrum dft_forward(const ComplexGrid& f);
Spectrum dft_forward(const IntGrid& f);
ComplexGrid dft_inverse(const Spectrum& spectrum);

/// Result of rounding a floating grid that is known to be integer valued.
struct RoundedGrid {
  IntGrid values;
  /// max |v - round(v)| over the grid, imaginary parts included.
  double residual = 0.0;
};

/// Rounds; throws RoundingResidualExceeded when residual > tolerance.
RoundedGrid round_to_integers(const ComplexGrid& f, double tolerance = 1e-6);

/// Cyclic convolution (f*g)(x) = sum_y f(y) g(x - y) through the transform.
/// Errors: ShapeMismatch, RoundingResidualExceeded.
RoundedGrid convolve(const IntGrid& f, const IntGrid& g);
ComplexGrid convolve(const ComplexGrid& f, const ComplexGrid& g);

/// Direct O(q^{2d}) convolution; the exact reference path.
/// Errors: ShapeMismatch, BudgetExceeded when q^{2d} > max_ops.
IntGrid convolve_direct(const IntGrid& f, const IntGrid& g, std::uint64_t max_ops = 100'000'000);

/// Matrix W with W[x * q + m] = chi(x * m) on a single axis.
std::vector<std::complex<double>> pairing_matrix(const Domain& ctx);

}  // namespace starcensus
