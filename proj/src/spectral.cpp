#include "starcensus/spectral.hpp"

#include <fmt/format.h>

#include <cmath>

#include "starcensus/error.hpp"

namespace starcensus {

namespace {

constexpr std::uint32_t kMaxTransformRadix = 4096;

// Applies out[m] = sum_x in[x] * W(x, m) along every axis, in place.
// conjugate selects chi(-x.m) instead of chi(x.m).
void transform_axes(std::span<std::complex<double>> values, const GridShape& shape, bool conjugate) {
  const std::uint32_t q = shape.radix();
  if (q > kMaxTransformRadix) {
    throw Error(ErrorCode::SizeTooLarge, fmt::format("transform radix {} too large", q));
  }
  auto w = pairing_matrix(shape.domain());
  if (conjugate) {
    for (auto& v : w) v = std::conj(v);
  }
  std::vector<std::complex<double>> line(q), out(q);
  std::size_t stride = 1;
  for (int axis = shape.dim() - 1; axis >= 0; --axis) {
    const std::size_t block = stride * q;
    for (std::size_t base = 0; base < values.size(); base += block) {
      for (std::size_t offset = 0; offset < stride; ++offset) {
        const std::size_t start = base + offset;
        for (std::uint32_t x = 0; x < q; ++x) line[x] = values[start + x * stride];
        std::fill(out.begin(), out.end(), std::complex<double>{});
        for (std::uint32_t x = 0; x < q; ++x) {
          const auto v = line[x];
          if (v == std::complex<double>{}) continue;
          const auto* row = w.data() + static_cast<std::size_t>(x) * q;
          for (std::uint32_t m = 0; m < q; ++m) out[m] += v * row[m];
        }
        for (std::uint32_t m = 0; m < q; ++m) values[start + m * stride] = out[m];
      }
    }
    stride = block;
  }
}

void require_same_shape(const GridShape& a, const GridShape& b) {
  if (!a.same_as(b)) throw Error(ErrorCode::ShapeMismatch, "grids live on different spaces");
}

}  // namespace

std::vector<std::complex<double>> pairing_matrix(const Domain& ctx) {
  const std::uint32_t q = ctx.size();
  const auto roots = ctx.roots();
  std::vector<std::complex<double>> w(static_cast<std::size_t>(q) * q);
  for (Elem x = 0; x < q; ++x) {
    for (Elem m = 0; m < q; ++m) w[static_cast<std::size_t>(x) * q + m] = roots[ctx.phase(ctx.mul(x, m))];
  }
  return w;
}

IntGrid indicator(const PointSet& set) {
  IntGrid grid(set.domain_ptr(), set.dim());
  for (std::size_t idx : set.indices()) grid[idx] = 1;
  return grid;
}

Spectrum dft_forward(const ComplexGrid& f) {
  Spectrum out(f.shape());
  std::copy(f.values().begin(), f.values().end(), out.values().begin());
  transform_axes(out.values(), out.shape(), /*conjugate=*/true);
  const double scale = 1.0 / static_cast<double>(f.size());
  for (auto& v : out.values()) v *= scale;
  return out;
}

Spectrum dft_forward(const IntGrid& f) {
  ComplexGrid g(f.shape());
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = static_cast<double>(f[i]);
  return dft_forward(g);
}

ComplexGrid dft_inverse(const Spectrum& spectrum) {
  ComplexGrid out(spectrum.shape());
  std::copy(spectrum.values().begin(), spectrum.values().end(), out.values().begin());
  transform_axes(out.values(), out.shape(), /*conjugate=*/false);
  return out;
}

RoundedGrid round_to_integers(const ComplexGrid& f, double tolerance) {
  RoundedGrid result{IntGrid(f.shape()), 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double re = f[i].real();
    const double rounded = std::round(re);
    result.values[i] = static_cast<std::int64_t>(rounded);
    result.residual = std::max({result.residual, std::abs(re - rounded), std::abs(f[i].imag())});
  }
  if (result.residual > tolerance) {
    throw Error(ErrorCode::RoundingResidualExceeded,
                fmt::format("rounding residual {:.3e} exceeds {:.1e}", result.residual, tolerance));
  }
  return result;
}

ComplexGrid convolve(const ComplexGrid& f, const ComplexGrid& g) {
  require_same_shape(f.shape(), g.shape());
  Spectrum fh = dft_forward(f);
  const Spectrum gh = dft_forward(g);
  // f*g = q^d * inverse(fhat * ghat) under this normalization.
  const double scale = static_cast<double>(f.size());
  for (std::size_t i = 0; i < fh.size(); ++i) fh[i] *= gh[i] * scale;
  return dft_inverse(fh);
}

RoundedGrid convolve(const IntGrid& f, const IntGrid& g) {
  require_same_shape(f.shape(), g.shape());
  ComplexGrid fc(f.shape()), gc(g.shape());
  for (std::size_t i = 0; i < f.size(); ++i) {
    fc[i] = static_cast<double>(f[i]);
    gc[i] = static_cast<double>(g[i]);
  }
  return round_to_integers(convolve(fc, gc));
}

IntGrid convolve_direct(const IntGrid& f, const IntGrid& g, std::uint64_t max_ops) {
  require_same_shape(f.shape(), g.shape());
  const auto n = static_cast<double>(f.size());
  if (n * n > static_cast<double>(max_ops)) {
    throw Error(ErrorCode::BudgetExceeded,
                fmt::format("direct convolution needs {:.3g} operations", n * n));
  }
  const GridShape& shape = f.shape();
  IntGrid out(shape);
  for (std::size_t y = 0; y < f.size(); ++y) {
    if (f[y] == 0) continue;
    for (std::size_t z = 0; z < g.size(); ++z) {
      if (g[z] == 0) continue;
      out[shape.add(y, z)] += f[y] * g[z];
    }
  }
  return out;
}

}  // namespace starcensus
