#include <gtest/gtest.h>

#include "oracles.hpp"
#include "starcensus/error.hpp"
#include "starcensus/generators.hpp"
#include "starcensus/spectral.hpp"
#include "starcensus/spheres.hpp"

using namespace starcensus;

namespace {

void expect_near(std::complex<double> a, std::complex<double> b, double tol = 1e-12) {
  EXPECT_NEAR(a.real(), b.real(), tol);
  EXPECT_NEAR(a.imag(), b.imag(), tol);
}

ComplexGrid to_complex(const IntGrid& f) {
  ComplexGrid out(f.shape());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = static_cast<double>(f[i]);
  return out;
}

}  // namespace

TEST(Dft, DeltaAtOrigin) {
  const auto f3 = parse_domain("F3");
  IntGrid delta(f3, 1);
  delta[0] = 1;
  const Spectrum s = dft_forward(delta);
  for (std::size_t m = 0; m < 3; ++m) expect_near(s[m], 1.0 / 3.0);
}

TEST(Dft, ZeroFrequencyIsDensity) {
  const auto ctx = parse_domain("F5");
  const PointSet set = sample_random_set(ctx, 2, 7, 3);
  const Spectrum s = dft_forward(indicator(set));
  expect_near(s[0], 7.0 / 25.0);
}

TEST(Dft, SphereCoefficientsF3Plane) {
  const auto f3 = parse_domain("F3");
  const Spectrum s = dft_forward(sphere_indicator(f3, 2, 1));
  const GridShape shape(f3, 2);
  expect_near(s[shape.encode(std::vector<Elem>{1, 0})], 1.0 / 9.0);
  EXPECT_NEAR(std::abs(s[shape.encode(std::vector<Elem>{1, 1})]), 2.0 / 9.0, 1e-12);
}

TEST(Dft, RoundTrip) {
  for (const char* name : {"F7", "F9", "Z9", "Z25"}) {
    const auto ctx = parse_domain(name);
    const PointSet set = sample_random_set(ctx, 2, 20, 11);
    const IntGrid f = indicator(set);
    const RoundedGrid back = round_to_integers(dft_inverse(dft_forward(f)));
    EXPECT_LT(back.residual, 1e-9);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(back.values[i], f[i]);
  }
}

TEST(Dft, ConstantSpectrumInvertsToDelta) {
  const auto ctx = parse_domain("F5");
  Spectrum s(ctx, 2);
  for (auto& v : s.values()) v = 1.0 / 25.0;
  const ComplexGrid f = dft_inverse(s);
  for (std::size_t i = 0; i < f.size(); ++i) expect_near(f[i], i == 0 ? 1.0 : 0.0);
}

class DftAgainstDirectSum : public ::testing::TestWithParam<std::pair<const char*, int>> {};

TEST_P(DftAgainstDirectSum, Matches) {
  const auto [name, d] = GetParam();
  const auto ctx = parse_domain(name);
  const auto ref = oracle::Arith::of(*ctx);
  const std::size_t n = space_size(ctx->size(), d);
  ASSERT_LE(n, 4096u);
  ComplexGrid f(ctx, d);
  std::vector<std::complex<double>> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[i] = {std::sin(1.0 + 3.0 * i), std::cos(2.0 * i * i + 1.0)};
    f[i] = raw[i];
  }
  const Spectrum fast = dft_forward(f);
  const auto direct = oracle::direct_dft(ref, d, raw);
  for (std::size_t m = 0; m < n; ++m) expect_near(fast[m], direct[m], 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Domains, DftAgainstDirectSum,
                         ::testing::Values(std::pair{"F3", 1}, std::pair{"F3", 3}, std::pair{"F5", 2},
                                           std::pair{"F7", 3}, std::pair{"F9", 2}, std::pair{"F27", 2},
                                           std::pair{"Z9", 2}, std::pair{"Z27", 2}, std::pair{"Z25", 2},
                                           std::pair{"F13", 3}, std::pair{"F3^4", 1}));

TEST(Dft, Plancherel) {
  for (const char* name : {"F7", "F9", "Z9"}) {
    const auto ctx = parse_domain(name);
    const PointSet set = sample_random_set(ctx, 3, 40, 5);
    const Spectrum s = dft_forward(indicator(set));
    double energy = 0.0;
    for (const auto& v : s.values()) energy += std::norm(v);
    // sum |fhat|^2 = q^{-d} sum |f|^2
    EXPECT_NEAR(energy, 40.0 / static_cast<double>(s.size()), 1e-12);
  }
}

TEST(Dft, TranslationMultipliesByCharacter) {
  const auto ctx = parse_domain("F9");
  const PointSet set = sample_random_set(ctx, 2, 15, 8);
  const std::vector<Elem> z{4, 7};
  const Spectrum s = dft_forward(indicator(set));
  const Spectrum st = dft_forward(indicator(set.translated(z)));
  const GridShape shape(ctx, 2);
  for (std::size_t m = 0; m < shape.size(); ++m) {
    const auto mc = shape.decode(m);
    const Elem dot = ctx->add(ctx->mul(z[0], mc[0]), ctx->mul(z[1], mc[1]));
    expect_near(st[m], ctx->char_value(ctx->neg(dot)) * s[m], 1e-12);
  }
}

TEST(Convolve, DeltaIsIdentity) {
  const auto ctx = parse_domain("F7");
  IntGrid delta(ctx, 2);
  delta[0] = 1;
  const IntGrid g = indicator(sample_random_set(ctx, 2, 12, 4));
  const RoundedGrid out = convolve(delta, g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(out.values[i], g[i]);
}

TEST(Convolve, SphereWithItself) {
  const auto f3 = parse_domain("F3");
  const IntGrid s1 = sphere_indicator(f3, 2, 1);
  const RoundedGrid out = convolve(s1, s1);
  const GridShape shape(f3, 2);
  // (0,1) = a - b with ||a|| = ||b|| = 1: only a = (0,2), b = (0,1).
  EXPECT_EQ(out.values[shape.encode(std::vector<Elem>{0, 1})], 1);
  EXPECT_EQ(out.values.mass(), 16);
}

TEST(Convolve, MatchesDirect) {
  for (const char* name : {"F5", "F9", "Z9", "Z25"}) {
    const auto ctx = parse_domain(name);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const IntGrid f = indicator(sample_random_set(ctx, 2, 10 + seed, seed));
      const IntGrid g = indicator(sample_random_set(ctx, 2, 20, seed + 10));
      const RoundedGrid fast = convolve(f, g);
      const IntGrid slow = convolve_direct(f, g);
      EXPECT_LT(fast.residual, 1e-9);
      for (std::size_t i = 0; i < f.size(); ++i) ASSERT_EQ(fast.values[i], slow[i]) << name;
      EXPECT_EQ(fast.values.mass(), f.mass() * g.mass());
    }
  }
}

TEST(Convolve, ComplexAgreesWithInteger) {
  const auto ctx = parse_domain("F7");
  const IntGrid f = indicator(sample_random_set(ctx, 2, 9, 1));
  const IntGrid g = sphere_indicator(ctx, 2, 3);
  const ComplexGrid c = convolve(to_complex(f), to_complex(g));
  const IntGrid direct = convolve_direct(f, g);
  for (std::size_t i = 0; i < f.size(); ++i) expect_near(c[i], static_cast<double>(direct[i]), 1e-9);
}

TEST(Convolve, ShapeMismatch) {
  const IntGrid a(parse_domain("F5"), 2), b(parse_domain("F5"), 3), c(parse_domain("F7"), 2);
  EXPECT_THROW(convolve(a, b), Error);
  EXPECT_THROW(convolve(a, c), Error);
  try {
    convolve_direct(a, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(Rounding, ResidualTooLarge) {
  ComplexGrid f(parse_domain("F3"), 1);
  f[1] = 0.4;
  try {
    round_to_integers(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RoundingResidualExceeded);
  }
  const RoundedGrid loose = round_to_integers(f, 0.5);
  EXPECT_NEAR(loose.residual, 0.4, 1e-15);
}

TEST(PairingMatrix, Symmetric) {
  for (const char* name : {"F9", "Z9", "F7"}) {
    const auto ctx = parse_domain(name);
    const auto w = pairing_matrix(*ctx);
    const Elem q = ctx->size();
    ASSERT_EQ(w.size(), static_cast<std::size_t>(q) * q);
    for (Elem x = 0; x < q; ++x) {
      for (Elem m = 0; m < q; ++m) {
        expect_near(w[x * q + m], w[m * q + x]);
        expect_near(w[x * q + m], ctx->char_value(ctx->mul(x, m)));
      }
    }
  }
}
