#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "starcensus/algebra.hpp"
#include "starcensus/error.hpp"

using namespace starcensus;

namespace {

std::complex<double> root(double num, double den) { return std::polar(1.0, 2.0 * std::numbers::pi * num / den); }

void expect_near(std::complex<double> a, std::complex<double> b, double tol = 1e-12) {
  EXPECT_NEAR(a.real(), b.real(), tol);
  EXPECT_NEAR(a.imag(), b.imag(), tol);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::IoError;
}

}  // namespace

TEST(MakeDomain, PrimeFieldCharacter) {
  const auto f3 = make_domain(DomainKind::PrimeField, 3, 1);
  EXPECT_EQ(f3->size(), 3u);
  expect_near(f3->char_value(1), root(1, 3));
}

TEST(MakeDomain, ResidueRingUnits) {
  const auto z9 = make_domain(DomainKind::ResidueRing, 3, 2);
  EXPECT_EQ(z9->size(), 9u);
  EXPECT_EQ(z9->unit_count(), 6u);
  int units = 0;
  for (Elem a = 0; a < 9; ++a) units += z9->is_unit(a);
  EXPECT_EQ(units, 6);
}

TEST(MakeDomain, ExtensionTraceMatchesFrobenius) {
  const auto f9 = make_domain(DomainKind::ExtensionField, 3, 2);
  const auto ref = oracle::Arith::of(*f9);
  for (Elem a = 0; a < 9; ++a) {
    // Tr(a) = a + a^3
    EXPECT_EQ(f9->trace(a), ref.add(a, ref.pow(a, 3))) << a;
    EXPECT_LT(f9->trace(a), 3u);
  }
}

TEST(MakeDomain, Errors) {
  EXPECT_EQ(code_of([] { make_domain(DomainKind::PrimeField, 9, 1); }), ErrorCode::NonPrime);
  EXPECT_EQ(code_of([] { make_domain(DomainKind::PrimeField, 1, 1); }), ErrorCode::NonPrime);
  EXPECT_EQ(code_of([] { make_domain(DomainKind::ResidueRing, 2, 3); }), ErrorCode::EvenCharacteristic);
  EXPECT_EQ(code_of([] { make_domain(DomainKind::ExtensionField, 3, 11); }), ErrorCode::SizeTooLarge);
  EXPECT_EQ(code_of([] { make_domain(DomainKind::ResidueRing, 3, 0); }), ErrorCode::InvalidArgument);
}

TEST(MakeDomain, InternedContexts) {
  EXPECT_EQ(make_domain(DomainKind::PrimeField, 7, 1), parse_domain("F7"));
  EXPECT_EQ(make_domain(DomainKind::ExtensionField, 3, 2), parse_domain("F9"));
  EXPECT_NE(parse_domain("F3^2"), parse_domain("Z3^2"));
}

TEST(ParseDomain, Descriptors) {
  EXPECT_EQ(parse_domain("F7")->descriptor(), "F7");
  EXPECT_EQ(parse_domain("F3^2")->descriptor(), "F3^2");
  EXPECT_EQ(parse_domain("Z3^2")->descriptor(), "Z3^2");
  EXPECT_EQ(parse_domain("Z25")->descriptor(), "Z5^2");
  EXPECT_EQ(parse_domain("F27")->kind(), DomainKind::ExtensionField);
  EXPECT_EQ(parse_domain("Z7")->kind(), DomainKind::ResidueRing);
  EXPECT_EQ(code_of([] { parse_domain("G7"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_domain("F"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_domain("Fx"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_domain("F7^"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_domain("F2"); }), ErrorCode::EvenCharacteristic);
  EXPECT_EQ(code_of([] { parse_domain("F6"); }), ErrorCode::NonPrime);
  EXPECT_EQ(code_of([] { parse_domain("F4"); }), ErrorCode::EvenCharacteristic);
}

TEST(CharValue, Examples) {
  expect_near(parse_domain("F3")->char_value(0), 1.0);
  expect_near(parse_domain("Z9")->char_value(3), root(1, 3));
  const auto f9 = parse_domain("F9");
  int trivial = 0;
  for (Elem a = 0; a < 9; ++a) trivial += std::abs(f9->char_value(a) - 1.0) < 1e-12;
  EXPECT_EQ(trivial, 3);
  EXPECT_EQ(code_of([&] { f9->char_value(9); }), ErrorCode::InvalidElement);
}

TEST(CharValue, MatchesIndependentCharacter) {
  for (const char* name : {"F7", "F9", "F27", "F25", "Z9", "Z27", "Z25"}) {
    const auto ctx = parse_domain(name);
    const auto ref = oracle::Arith::of(*ctx);
    for (Elem a = 0; a < ctx->size(); ++a) expect_near(ctx->char_value(a), ref.chi(a), 1e-9);
  }
}

class CharacterLaws : public ::testing::TestWithParam<const char*> {};

TEST_P(CharacterLaws, HomomorphismAndOrthogonality) {
  const auto ctx = parse_domain(GetParam());
  const Elem q = ctx->size();
  expect_near(ctx->char_value(0), 1.0);
  for (Elem a = 0; a < q; ++a) {
    EXPECT_NEAR(std::abs(ctx->char_value(a)), 1.0, 1e-12);
    for (Elem b = 0; b < q; ++b) {
      expect_near(ctx->char_value(ctx->add(a, b)), ctx->char_value(a) * ctx->char_value(b), 1e-9);
    }
  }
  // sum_x chi(a x) = q [a = 0]
  for (Elem a = 0; a < q; ++a) {
    std::complex<double> sum = 0;
    for (Elem x = 0; x < q; ++x) sum += ctx->char_value(ctx->mul(a, x));
    expect_near(sum, a == 0 ? static_cast<double>(q) : 0.0, 1e-8);
  }
}

INSTANTIATE_TEST_SUITE_P(SmallDomains, CharacterLaws,
                         ::testing::Values("F3", "F5", "F7", "F31", "F9", "F25", "F27", "F49", "F125", "F243", "F343",
                                           "Z9", "Z27", "Z25", "Z49", "Z125", "Z343"));

TEST(NormForm, Examples) {
  const auto f3 = parse_domain("F3");
  EXPECT_EQ(norm_form(*f3, Point{{1, 1}}), 2u);
  EXPECT_EQ(norm_form(*f3, Point{{0, 2}}), 1u);
  const auto z9 = parse_domain("Z9");
  EXPECT_EQ(norm_form(*z9, Point{{4, 5}}), 5u);
}

TEST(IsUnit, Examples) {
  const auto z9 = parse_domain("Z9");
  EXPECT_FALSE(z9->is_unit(3));
  EXPECT_TRUE(z9->is_unit(4));
  EXPECT_FALSE(parse_domain("F7")->is_unit(0));
  EXPECT_TRUE(parse_domain("F9")->is_unit(5));
}

TEST(IsUnit, RingUnitCount) {
  for (auto [p, l] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {3, 3}, {5, 2}, {7, 2}, {3, 5}}) {
    const auto ctx = make_domain(DomainKind::ResidueRing, p, l);
    std::uint32_t count = 0;
    for (Elem a = 0; a < ctx->size(); ++a) {
      EXPECT_EQ(ctx->is_unit(a), std::gcd(a, static_cast<Elem>(p)) == 1);
      count += ctx->is_unit(a);
    }
    EXPECT_EQ(count, ctx->size() - ctx->size() / p);
    EXPECT_EQ(count, ctx->unit_count());
  }
}

TEST(ExtensionField, ModulusIsPrimitive) {
  for (const char* name : {"F9", "F27", "F81", "F243", "F25", "F125", "F49", "F343", "F121", "F169", "F289", "F3^7"}) {
    const auto ctx = parse_domain(name);
    const auto ref = oracle::Arith::of(*ctx);
    ASSERT_EQ(ref.modulus.size(), ref.n + 1) << name;
    EXPECT_EQ(ref.modulus.back(), 1u);
    // x generates the multiplicative group: x^e != 1 for 0 < e < q - 1.
    const Elem x = ref.p;
    Elem power = 1;
    for (std::uint32_t e = 1; e < ctx->size() - 1; ++e) {
      power = ref.mul(power, x);
      ASSERT_NE(power, 1u) << name << " order divides " << e;
    }
    EXPECT_EQ(ref.mul(power, x), 1u);
  }
}

TEST(ExtensionField, ConwayModuli) {
  const std::vector<Elem> f9{2, 2, 1}, f27{1, 2, 0, 1}, f25{2, 4, 1}, f49{3, 6, 1};
  auto modulus = [](const char* name) {
    const auto m = parse_domain(name)->modulus_polynomial();
    return std::vector<Elem>(m.begin(), m.end());
  };
  EXPECT_EQ(modulus("F9"), f9);
  EXPECT_EQ(modulus("F27"), f27);
  EXPECT_EQ(modulus("F25"), f25);
  EXPECT_EQ(modulus("F49"), f49);
}

class FieldAxioms : public ::testing::TestWithParam<const char*> {};

TEST_P(FieldAxioms, ExhaustiveAgainstPolynomialArithmetic) {
  const auto ctx = parse_domain(GetParam());
  const auto ref = oracle::Arith::of(*ctx);
  const Elem q = ctx->size();
  for (Elem a = 0; a < q; ++a) {
    EXPECT_EQ(ctx->add(a, ctx->neg(a)), 0u);
    if (a != 0) {
      bool has_inverse = false;
      for (Elem b = 1; b < q && !has_inverse; ++b) has_inverse = ctx->mul(a, b) == 1;
      EXPECT_TRUE(has_inverse) << a;
    }
    for (Elem b = 0; b < q; ++b) {
      ASSERT_EQ(ctx->mul(a, b), ref.mul(a, b));
      ASSERT_EQ(ctx->add(a, b), ref.add(a, b));
      ASSERT_EQ(ctx->mul(a, b), ctx->mul(b, a));
      for (Elem c = 0; c < q; ++c) {
        ASSERT_EQ(ctx->mul(ctx->mul(a, b), c), ctx->mul(a, ctx->mul(b, c)));
        ASSERT_EQ(ctx->mul(a, ctx->add(b, c)), ctx->add(ctx->mul(a, b), ctx->mul(a, c)));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(UpTo49, FieldAxioms, ::testing::Values("F9", "F25", "F27", "F49", "F3^3"));

TEST(ExtensionField, RandomTriplesLargerFields) {
  std::mt19937_64 gen(20240611);
  for (const char* name : {"F125", "F243", "F343", "F3^8", "F5^5", "F13^3"}) {
    const auto ctx = parse_domain(name);
    const auto ref = oracle::Arith::of(*ctx);
    std::uniform_int_distribution<Elem> pick(0, ctx->size() - 1);
    for (int i = 0; i < 10000; ++i) {
      const Elem a = pick(gen), b = pick(gen), c = pick(gen);
      ASSERT_EQ(ctx->mul(a, b), ref.mul(a, b)) << name;
      ASSERT_EQ(ctx->mul(ctx->mul(a, b), c), ctx->mul(a, ctx->mul(b, c)));
      ASSERT_EQ(ctx->mul(a, ctx->add(b, c)), ctx->add(ctx->mul(a, b), ctx->mul(a, c)));
      ASSERT_EQ(ctx->add(ctx->add(a, b), c), ctx->add(a, ctx->add(b, c)));
    }
  }
}

TEST(ExtensionField, TraceIsLinear) {
  for (const char* name : {"F9", "F27", "F25", "F49", "F81"}) {
    const auto ctx = parse_domain(name);
    const Elem p = ctx->characteristic();
    EXPECT_EQ(ctx->trace(1), ctx->exponent() % p) << name;
    for (Elem a = 0; a < ctx->size(); ++a) {
      for (Elem c = 0; c < p; ++c) EXPECT_EQ(ctx->trace(ctx->mul(c, a)), c * ctx->trace(a) % p);
      for (Elem b = 0; b < ctx->size(); b += 7) {
        EXPECT_EQ(ctx->trace(ctx->add(a, b)), (ctx->trace(a) + ctx->trace(b)) % p);
      }
    }
  }
}

TEST(QuadraticCharacter, EulerCriterion) {
  for (const char* name : {"F7", "F13", "F9", "F25"}) {
    const auto ctx = parse_domain(name);
    std::vector<bool> square(ctx->size(), false);
    for (Elem x = 0; x < ctx->size(); ++x) square[ctx->square(x)] = true;
    EXPECT_EQ(ctx->quadratic_character(0), 0);
    for (Elem a = 1; a < ctx->size(); ++a) EXPECT_EQ(ctx->quadratic_character(a), square[a] ? 1 : -1);
  }
  EXPECT_EQ(code_of([] { parse_domain("Z9")->quadratic_character(1); }), ErrorCode::UnsupportedDomain);
}
