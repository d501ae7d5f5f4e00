#include "starcensus/geometry.hpp"

#include <algorithm>
#include <limits>

#include "starcensus/error.hpp"

namespace starcensus {

std::size_t space_size(std::uint32_t q, int dim) noexcept {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) {
    if (n > std::numeric_limits<std::size_t>::max() / q) return std::numeric_limits<std::size_t>::max();
    n *= q;
  }
  return n;
}

GridShape::GridShape(DomainPtr ctx, int dim)
    : ctx_(std::move(ctx)), dim_(dim), q_(ctx_->size()), size_(space_size(q_, dim)) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
}

std::size_t GridShape::encode(std::span<const Elem> coords) const noexcept {
  std::size_t index = 0;
  for (Elem c : coords) index = index * q_ + c;
  return index;
}

void GridShape::decode(std::size_t index, std::span<Elem> coords) const noexcept {
  for (int i = dim_ - 1; i >= 0; --i) {
    coords[i] = static_cast<Elem>(index % q_);
    index /= q_;
  }
}

std::vector<Elem> GridShape::decode(std::size_t index) const {
  std::vector<Elem> coords(dim_);
  decode(index, coords);
  return coords;
}

std::size_t GridShape::add(std::size_t a, std::size_t b) const noexcept {
  std::size_t result = 0, scale = 1;
  for (int i = 0; i < dim_; ++i) {
    result += ctx_->add(static_cast<Elem>(a % q_), static_cast<Elem>(b % q_)) * scale;
    a /= q_;
    b /= q_;
    scale *= q_;
  }
  return result;
}

std::size_t GridShape::neg(std::size_t a) const noexcept {
  std::size_t result = 0, scale = 1;
  for (int i = 0; i < dim_; ++i) {
    result += ctx_->neg(static_cast<Elem>(a % q_)) * scale;
    a /= q_;
    scale *= q_;
  }
  return result;
}

PointSet::PointSet(DomainPtr ctx, int dim) : ctx_(std::move(ctx)), dim_(dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
}

PointSet PointSet::from_indices(DomainPtr ctx, int dim, std::vector<std::size_t> indices) {
  PointSet set(std::move(ctx), dim);
  const std::size_t total = space_size(set.ctx_->size(), dim);
  for (std::size_t idx : indices) {
    if (idx >= total) throw Error(ErrorCode::InvalidElement, "grid index out of range");
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  set.indices_ = std::move(indices);
  set.rebuild_coords();
  return set;
}

void PointSet::rebuild_coords() {
  const GridShape grid(ctx_, dim_);
  coords_.resize(indices_.size() * static_cast<std::size_t>(dim_));
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    grid.decode(indices_[i], std::span<Elem>(coords_.data() + i * dim_, dim_));
  }
}

Point PointSet::point(std::size_t i) const {
  const auto c = coords(i);
  return Point{{c.begin(), c.end()}};
}

bool PointSet::contains(std::span<const Elem> coords) const {
  const std::size_t idx = GridShape(ctx_, dim_).encode(coords);
  return std::binary_search(indices_.begin(), indices_.end(), idx);
}

bool PointSet::insert(std::span<const Elem> coords) {
  if (coords.size() != static_cast<std::size_t>(dim_)) {
    throw Error(ErrorCode::ShapeMismatch, "point has wrong dimension");
  }
  for (Elem c : coords) ctx_->check(c);
  const std::size_t idx = GridShape(ctx_, dim_).encode(coords);
  auto it = std::lower_bound(indices_.begin(), indices_.end(), idx);
  if (it != indices_.end() && *it == idx) return false;
  const auto pos = static_cast<std::size_t>(it - indices_.begin());
  indices_.insert(it, idx);
  coords_.insert(coords_.begin() + static_cast<std::ptrdiff_t>(pos * dim_), coords.begin(), coords.end());
  return true;
}

PointSet PointSet::translated(std::span<const Elem> z) const {
  const GridShape grid(ctx_, dim_);
  const std::size_t shift = grid.encode(z);
  std::vector<std::size_t> moved;
  moved.reserve(indices_.size());
  for (std::size_t idx : indices_) moved.push_back(grid.add(idx, shift));
  return from_indices(ctx_, dim_, std::move(moved));
}

}  // namespace starcensus
