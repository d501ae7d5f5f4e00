#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "starcensus/geometry.hpp"

namespace starcensus {

/// Uniform size-subset of G^d: the first `size` slots of a seeded
/// Fisher-Yates shuffle of the grid indices 0..q^d-1. Slot j is drawn as
/// j + below(q^d - j). Sets for the same seed are nested in size.
/// Errors: SizeExceedsSpace.
PointSet sample_random_set(const DomainPtr& ctx, int dim, std::size_t size, std::uint64_t seed);

/// All G-linear combinations of the spanning vectors.
PointSet subspace_set(const DomainPtr& ctx, int dim, const std::vector<std::vector<Elem>>& spanning);

/// round(fraction * |S_t|) points of S_t chosen by the same seeded shuffle.
PointSet sphere_subset(const DomainPtr& ctx, int dim, Elem t, double fraction, std::uint64_t seed);

/// {x : x_i < widths[i]} on element codes; |set| = prod widths.
PointSet coordinate_slab(const DomainPtr& ctx, int dim, const std::vector<std::uint32_t>& widths);

/// Parses "KIND:PARAMS":
///   subspace:1,0,0;0,1,0          spanning vectors separated by ';'
///   sphere-subset:T,FRACTION,SEED
///   coordinate-slab:W1,...,Wd
/// Errors: InvalidParams.
PointSet structured_set(const DomainPtr& ctx, int dim, std::string_view spec);

}  // namespace starcensus
