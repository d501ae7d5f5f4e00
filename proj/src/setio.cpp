#include "starcensus/setio.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "starcensus/error.hpp"

namespace starcensus {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::ParseError, fmt::format("line {}: {}", line, why));
}

}  // namespace

std::string format_set(const PointSet& set) {
  std::string out = fmt::format("domain={} d={}\n", set.domain().descriptor(), set.dim());
  for (std::size_t i = 0; i < set.size(); ++i) out += fmt::format("{}\n", fmt::join(set.coords(i), ","));
  return out;
}

LoadedSet parse_set(std::string_view text, const DomainPtr& expected_domain, std::optional<int> expected_dim) {
  std::optional<PointSet> set;
  std::optional<GridShape> shape;
  std::vector<std::size_t> indices;
  std::size_t line_no = 0;
  std::vector<Elem> coords;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (!set) {
      std::istringstream header{std::string(line)};
      std::string domain_field, dim_field;
      header >> domain_field >> dim_field;
      std::string rest;
      if (domain_field.rfind("domain=", 0) != 0 || dim_field.rfind("d=", 0) != 0 || (header >> rest)) {
        parse_error(line_no, "expected header 'domain=<descriptor> d=<dim>'");
      }
      DomainPtr ctx;
      int dim = 0;
      try {
        ctx = parse_domain(domain_field.substr(7));
        dim = std::stoi(dim_field.substr(2));
      } catch (const std::exception& e) {
        parse_error(line_no, e.what());
      }
      if (dim < 1) parse_error(line_no, "dimension must be >= 1");
      if (expected_domain && expected_domain != ctx) {
        throw Error(ErrorCode::DomainMismatch, fmt::format("file domain {} but expected {}", ctx->descriptor(),
                                                           expected_domain->descriptor()));
      }
      if (expected_dim && *expected_dim != dim) {
        throw Error(ErrorCode::DomainMismatch, fmt::format("file dimension {} but expected {}", dim, *expected_dim));
      }
      set.emplace(ctx, dim);
      shape.emplace(ctx, dim);
      continue;
    }

    coords.clear();
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const std::string_view field = trim(line.substr(start, comma - start));
      Elem value = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        parse_error(line_no, fmt::format("bad coordinate '{}'", field));
      }
      if (!set->domain().valid(value)) {
        parse_error(line_no, fmt::format("coordinate {} out of range for {}", value, set->domain().descriptor()));
      }
      coords.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (coords.size() != static_cast<std::size_t>(set->dim())) {
      parse_error(line_no, fmt::format("expected {} coordinates, got {}", set->dim(), coords.size()));
    }
    indices.push_back(shape->encode(coords));
  }
  if (!set) parse_error(line_no, "missing header");
  const std::size_t listed = indices.size();
  PointSet points = PointSet::from_indices(set->domain_ptr(), set->dim(), std::move(indices));
  const std::size_t duplicates = listed - points.size();
  return LoadedSet{std::move(points), duplicates};
}

void save_set(const PointSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot write {}", path.string()));
  out << format_set(set);
  if (!out) throw Error(ErrorCode::IoError, fmt::format("write to {} failed", path.string()));
}

LoadedSet load_set(const std::filesystem::path& path, const DomainPtr& expected_domain,
                   std::optional<int> expected_dim) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot read {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_set(buffer.str(), expected_domain, expected_dim);
}

}  // namespace starcensus
