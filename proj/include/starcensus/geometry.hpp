#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "starcensus/algebra.hpp"

namespace starcensus {

/// Mixed-radix indexing of G^d. Coordinate 0 is the most significant digit,
/// so index order matches lexicographic order of coordinate vectors.
class GridShape {
 public:
  GridShape(DomainPtr ctx, int dim);

  const Domain& domain() const noexcept { return *ctx_; }
  const DomainPtr& domain_ptr() const noexcept { return ctx_; }
  int dim() const noexcept { return dim_; }
  std::uint32_t radix() const noexcept { return q_; }
  std::size_t size() const noexcept { return size_; }

  std::size_t encode(std::span<const Elem> coords) const noexcept;
  void decode(std::size_t index, std::span<Elem> coords) const noexcept;
  std::vector<Elem> decode(std::size_t index) const;

  /// Coordinate-wise a + b and -a on encoded indices.
  std::size_t add(std::size_t a, std::size_t b) const noexcept;
  std::size_t neg(std::size_t a) const noexcept;

  bool same_as(const GridShape& other) const noexcept {
    return ctx_ == other.ctx_ && dim_ == other.dim_;
  }

 private:
  DomainPtr ctx_;
  int dim_;
  std::uint32_t q_;
  std::size_t size_;
};

/// q^d with overflow saturation to SIZE_MAX.
std::size_t space_size(std::uint32_t q, int dim) noexcept;

/// A deduplicated set of points of G^d, kept sorted by grid index.
class PointSet {
 public:
  PointSet(DomainPtr ctx, int dim);

  /// Builds from grid indices; duplicates are dropped.
  static PointSet from_indices(DomainPtr ctx, int dim, std::vector<std::size_t> indices);

  const Domain& domain() const noexcept { return *ctx_; }
  const DomainPtr& domain_ptr() const noexcept { return ctx_; }
  int dim() const noexcept { return dim_; }
  GridShape shape() const { return GridShape(ctx_, dim_); }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }

  /// Coordinates of the i-th point.
  std::span<const Elem> coords(std::size_t i) const noexcept {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  Point point(std::size_t i) const;
  std::span<const std::size_t> indices() const noexcept { return indices_; }

  bool contains(std::span<const Elem> coords) const;
  /// Inserts a point; returns false if it was already present.
  bool insert(std::span<const Elem> coords);

  /// E + z.
  PointSet translated(std::span<const Elem> z) const;

  bool operator==(const PointSet& other) const {
    return ctx_ == other.ctx_ && dim_ == other.dim_ && indices_ == other.indices_;
  }

 private:
  void rebuild_coords();

  DomainPtr ctx_;
  int dim_;
  std::vector<std::size_t> indices_;
  std::vector<Elem> coords_;
};

}  // namespace starcensus
