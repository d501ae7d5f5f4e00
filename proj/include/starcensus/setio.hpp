#pragma once

// Point-set text format:
//
//   domain=F3^2 d=2
//   # comment
//   0,1
//   2,0
//
// The first non-blank, non-comment line is the header; each following line is
// one point as comma-separated element codes. '#' starts a comment anywhere.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "starcensus/geometry.hpp"

namespace starcensus {

struct LoadedSet {
  PointSet set;
  /// Points listed more than once; they are kept once.
  std::size_t duplicates = 0;
};

std::string format_set(const PointSet& set);

/// Errors: ParseError (with line number), DomainMismatch when expected_domain
/// or expected_dim is given and differs from the header.
LoadedSet parse_set(std::string_view text, const DomainPtr& expected_domain = nullptr,
                    std::optional<int> expected_dim = std::nullopt);

void save_set(const PointSet& set, const std::filesystem::path& path);
LoadedSet load_set(const std::filesystem::path& path, const DomainPtr& expected_domain = nullptr,
                   std::optional<int> expected_dim = std::nullopt);

}  // namespace starcensus
