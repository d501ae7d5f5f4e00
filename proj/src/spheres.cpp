#include "starcensus/spheres.hpp"

#include <fmt/format.h>

#include <cmath>

#include "starcensus/error.hpp"

namespace starcensus {

void require_budget(double ops, std::uint64_t budget, std::string_view what) {
  if (ops > static_cast<double>(budget)) {
    throw Error(ErrorCode::BudgetExceeded,
                fmt::format("{} needs ~{:.3g} operations, budget is {}", what, ops, budget));
  }
}

namespace {

void require_grid(const GridShape& shape, std::uint64_t budget) {
  const double points = std::pow(static_cast<double>(shape.radix()), shape.dim());
  require_budget(points, budget, "scanning G^d");
  if (points > static_cast<double>(kMaxGridPoints)) {
    throw Error(ErrorCode::BudgetExceeded, fmt::format("grid of {:.3g} points is too large", points));
  }
}

}  // namespace

std::vector<Elem> norm_grid(const GridShape& shape) {
  const Domain& ctx = shape.domain();
  const std::uint32_t q = shape.radix();
  std::vector<Elem> norms(1, 0);
  // Extend one coordinate at a time: index' = index * q + c.
  for (int axis = 0; axis < shape.dim(); ++axis) {
    std::vector<Elem> next(norms.size() * q);
    for (std::size_t i = 0; i < norms.size(); ++i) {
      for (Elem c = 0; c < q; ++c) next[i * q + c] = ctx.add(norms[i], ctx.square(c));
    }
    norms.swap(next);
  }
  return norms;
}

std::vector<std::uint64_t> sphere_sizes(const DomainPtr& ctx, int dim, std::uint64_t budget) {
  const GridShape shape(ctx, dim);
  require_grid(shape, budget);
  std::vector<std::uint64_t> sizes(ctx->size(), 0);
  for (Elem n : norm_grid(shape)) ++sizes[n];
  return sizes;
}

IntGrid sphere_indicator(const DomainPtr& ctx, int dim, Elem t) {
  ctx->check(t);
  IntGrid grid(ctx, dim);
  const auto norms = norm_grid(grid.shape());
  for (std::size_t i = 0; i < norms.size(); ++i) grid[i] = norms[i] == t ? 1 : 0;
  return grid;
}

SphereTable enumerate_sphere(const DomainPtr& ctx, int dim, Elem t, bool with_spectrum,
                             std::uint64_t budget) {
  ctx->check(t);
  const GridShape shape(ctx, dim);
  require_grid(shape, budget);
  const auto norms = norm_grid(shape);
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (norms[i] == t) indices.push_back(i);
  }
  SphereTable table{ctx, dim, t, PointSet::from_indices(ctx, dim, std::move(indices)), 0, {}, 0.0, {}, 0.0};
  table.cardinality = table.points.size();
  if (with_spectrum) {
    const Spectrum spectrum = dft_forward(indicator(table.points));
    std::size_t best = 0;
    for (std::size_t m = 1; m < spectrum.size(); ++m) {
      const double mag = std::abs(spectrum[m]);
      if (mag > table.max_nonzero_fourier) {
        table.max_nonzero_fourier = mag;
        best = m;
      }
    }
    for (std::size_t m = 0; m < spectrum.size(); ++m) {
      table.imag_residue = std::max(table.imag_residue, std::abs(spectrum[m].imag()));
    }
    if (best != 0) table.argmax_frequency = shape.decode(best);
    table.spectrum = spectrum;
  }
  return table;
}

std::uint64_t sphere_count_oracle(const Domain& ctx, int dim, Elem t) {
  if (ctx.kind() != DomainKind::PrimeField) {
    throw Error(ErrorCode::UnsupportedDomain, "closed-form sphere count is for prime fields only");
  }
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  ctx.check(t);
  if (t == 0) throw Error(ErrorCode::InvalidArgument, "closed-form sphere count needs t != 0");
  const auto q = static_cast<std::int64_t>(ctx.size());
  auto qpow = [q](int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= q;
    return r;
  };
  const Elem minus_one = ctx.neg(1);
  std::int64_t count;
  if (dim % 2 == 1) {
    const Elem sign = ((dim - 1) / 2) % 2 == 0 ? 1 : minus_one;
    count = qpow(dim - 1) + qpow((dim - 1) / 2) * ctx.quadratic_character(ctx.mul(sign, t));
  } else {
    const Elem sign = (dim / 2) % 2 == 0 ? 1 : minus_one;
    count = qpow(dim - 1) - qpow((dim - 2) / 2) * ctx.quadratic_character(sign);
  }
  return static_cast<std::uint64_t>(count);
}

double sphere_bound(const Domain& ctx, int dim) {
  const double q = ctx.size();
  if (ctx.is_field()) return 2.0 * std::pow(q, -(dim + 1) / 2.0);
  const double l = ctx.ring_exponent();
  return l * (l + 1) * std::pow(q, -(dim + 2 * l - 1) / (2 * l));
}

bool sphere_hypothesis(const Domain& ctx, Elem t) { return ctx.is_unit(t); }

BoundReport verify_sphere_bound(const DomainPtr& ctx, int dim, Elem t, std::uint64_t budget) {
  const SphereTable table = enumerate_sphere(ctx, dim, t, /*with_spectrum=*/true, budget);
  BoundReport report;
  report.domain = ctx->descriptor();
  report.q = ctx->size();
  report.dim = dim;
  report.t = t;
  report.cardinality = table.cardinality;
  report.max_nonzero_fourier = table.max_nonzero_fourier;
  report.argmax_frequency = table.argmax_frequency;
  report.bound = sphere_bound(*ctx, dim);
  report.ratio = report.max_nonzero_fourier / report.bound;
  report.in_hypothesis = sphere_hypothesis(*ctx, t);
  report.violation = report.in_hypothesis && report.ratio > 1.0 + 1e-9;
  report.imag_residue = table.imag_residue;
  return report;
}

}  // namespace starcensus
