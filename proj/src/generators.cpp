#include "starcensus/generators.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <string>
#include <unordered_map>

#include "starcensus/error.hpp"
#include "starcensus/rng.hpp"
#include "starcensus/spheres.hpp"

namespace starcensus {

namespace {

// Partial Fisher-Yates over a virtual array 0..n-1; only displaced slots are
// stored, so huge spaces are fine when `take` is small.
std::vector<std::uint64_t> shuffled_prefix(std::uint64_t n, std::size_t take, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::unordered_map<std::uint64_t, std::uint64_t> moved;
  auto slot = [&](std::uint64_t i) {
    auto it = moved.find(i);
    return it == moved.end() ? i : it->second;
  };
  std::vector<std::uint64_t> out;
  out.reserve(take);
  for (std::uint64_t j = 0; j < take; ++j) {
    const std::uint64_t r = j + rng.below(n - j);
    const std::uint64_t picked = slot(r);
    moved[r] = slot(j);
    out.push_back(picked);
  }
  return out;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  if constexpr (std::is_floating_point_v<T>) {
    try {
      std::size_t used = 0;
      value = static_cast<T>(std::stod(std::string(text), &used));
      if (used != text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidParams, fmt::format("bad {} '{}'", what, text));
    }
  } else {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::InvalidParams, fmt::format("bad {} '{}'", what, text));
    }
  }
  return value;
}

}  // namespace

PointSet sample_random_set(const DomainPtr& ctx, int dim, std::size_t size, std::uint64_t seed) {
  const std::size_t total = space_size(ctx->size(), dim);
  if (size > total) {
    throw Error(ErrorCode::SizeExceedsSpace,
                fmt::format("cannot draw {} points from a space of {}", size, total));
  }
  const auto picks = shuffled_prefix(total, size, seed);
  return PointSet::from_indices(ctx, dim, {picks.begin(), picks.end()});
}

PointSet subspace_set(const DomainPtr& ctx, int dim, const std::vector<std::vector<Elem>>& spanning) {
  for (const auto& v : spanning) {
    if (v.size() != static_cast<std::size_t>(dim)) {
      throw Error(ErrorCode::InvalidParams, "spanning vector has wrong dimension");
    }
    for (Elem c : v) {
      if (!ctx->valid(c)) throw Error(ErrorCode::InvalidParams, fmt::format("coordinate {} out of range", c));
    }
  }
  const double combos = std::pow(static_cast<double>(ctx->size()), static_cast<double>(spanning.size()));
  if (combos > static_cast<double>(kMaxGridPoints)) {
    throw Error(ErrorCode::InvalidParams, "too many spanning vectors");
  }
  const GridShape shape(ctx, dim);
  std::vector<std::size_t> indices;
  std::vector<Elem> coeff(spanning.size(), 0), point(dim);
  while (true) {
    std::fill(point.begin(), point.end(), 0);
    for (std::size_t j = 0; j < spanning.size(); ++j) {
      for (int i = 0; i < dim; ++i) point[i] = ctx->add(point[i], ctx->mul(coeff[j], spanning[j][i]));
    }
    indices.push_back(shape.encode(point));
    std::size_t pos = 0;
    while (pos < coeff.size() && ++coeff[pos] == ctx->size()) coeff[pos++] = 0;
    if (pos == coeff.size()) break;
  }
  return PointSet::from_indices(ctx, dim, std::move(indices));
}

PointSet sphere_subset(const DomainPtr& ctx, int dim, Elem t, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidParams, "fraction must lie in [0, 1]");
  }
  if (!ctx->valid(t)) throw Error(ErrorCode::InvalidParams, fmt::format("t = {} out of range", t));
  const SphereTable sphere = enumerate_sphere(ctx, dim, t);
  const auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(sphere.cardinality)));
  const auto picks = shuffled_prefix(sphere.cardinality, take, seed);
  std::vector<std::size_t> indices;
  indices.reserve(take);
  for (std::uint64_t i : picks) indices.push_back(sphere.points.indices()[i]);
  return PointSet::from_indices(ctx, dim, std::move(indices));
}

PointSet coordinate_slab(const DomainPtr& ctx, int dim, const std::vector<std::uint32_t>& widths) {
  if (widths.size() != static_cast<std::size_t>(dim)) {
    throw Error(ErrorCode::InvalidParams, "need one width per coordinate");
  }
  double count = 1;
  for (std::uint32_t w : widths) {
    if (w < 1 || w > ctx->size()) throw Error(ErrorCode::InvalidParams, fmt::format("width {} out of range", w));
    count *= w;
  }
  if (count > static_cast<double>(kMaxGridPoints)) throw Error(ErrorCode::InvalidParams, "slab too large");
  const GridShape shape(ctx, dim);
  std::vector<std::size_t> indices;
  std::vector<Elem> point(dim, 0);
  while (true) {
    indices.push_back(shape.encode(point));
    int pos = dim - 1;
    while (pos >= 0 && ++point[pos] == widths[pos]) point[pos--] = 0;
    if (pos < 0) break;
  }
  return PointSet::from_indices(ctx, dim, std::move(indices));
}

PointSet structured_set(const DomainPtr& ctx, int dim, std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::InvalidParams, fmt::format("expected KIND:PARAMS, got '{}'", spec));
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view params = spec.substr(colon + 1);
  if (kind == "subspace") {
    std::vector<std::vector<Elem>> vectors;
    for (auto vec : split(params, ';')) {
      std::vector<Elem> v;
      for (auto c : split(vec, ',')) v.push_back(parse_number<Elem>(c, "coordinate"));
      vectors.push_back(std::move(v));
    }
    return subspace_set(ctx, dim, vectors);
  }
  if (kind == "sphere-subset") {
    const auto fields = split(params, ',');
    if (fields.size() != 3) throw Error(ErrorCode::InvalidParams, "sphere-subset needs T,FRACTION,SEED");
    return sphere_subset(ctx, dim, parse_number<Elem>(fields[0], "t"), parse_number<double>(fields[1], "fraction"),
                         parse_number<std::uint64_t>(fields[2], "seed"));
  }
  if (kind == "coordinate-slab") {
    std::vector<std::uint32_t> widths;
    for (auto w : split(params, ',')) widths.push_back(parse_number<std::uint32_t>(w, "width"));
    return coordinate_slab(ctx, dim, widths);
  }
  throw Error(ErrorCode::InvalidParams, fmt::format("unknown structured set kind '{}'", kind));
}

}  // namespace starcensus
