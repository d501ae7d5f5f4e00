#pragma once

/**
 * Exact arithmetic over the coefficient structures used throughout the
 * library: prime fields F_p, extension fields F_{p^n} and residue rings
 * Z_{p^l}, all of odd characteristic.
 *
 * Elements are integer codes in [0, q). For prime fields and residue rings the
 * code is the residue itself. For extension fields the code packs the
 * coefficients of the polynomial-basis representation as base-p digits,
 * lowest degree first, so F_p sits inside F_{p^n} as the codes 0..p-1.
 *
 * Extension-field multiplication is table driven (log/antilog with respect to
 * the root of a primitive modulus polynomial). The modulus is the Conway
 * polynomial when (p, n) is in the built-in table, otherwise the first
 * primitive polynomial in lexicographic coefficient order.
 */

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace starcensus {

using Elem = std::uint32_t;

enum class DomainKind { PrimeField, ExtensionField, ResidueRing };

class Domain;
using DomainPtr = std::shared_ptr<const Domain>;

/// Largest q accepted by make_domain. Every table is O(q).
inline constexpr std::uint32_t kMaxDomainSize = 1u << 16;

/// Immutable arithmetic context. Construct through make_domain.
class Domain {
 public:
  DomainKind kind() const noexcept { return kind_; }
  bool is_field() const noexcept { return kind_ != DomainKind::ResidueRing; }
  std::uint32_t characteristic() const noexcept { return p_; }
  /// n for fields, l for residue rings.
  std::uint32_t exponent() const noexcept { return exponent_; }
  /// Ring exponent l for residue rings, 1 for fields.
  std::uint32_t ring_exponent() const noexcept { return is_field() ? 1 : exponent_; }
  std::uint32_t size() const noexcept { return q_; }

  /// Canonical descriptor, e.g. "F7", "F3^2", "Z3^2".
  std::string descriptor() const;

  bool valid(Elem a) const noexcept { return a < q_; }
  void check(Elem a) const;

  Elem add(Elem a, Elem b) const noexcept;
  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg_[b]); }
  Elem neg(Elem a) const noexcept { return neg_[a]; }
  Elem mul(Elem a, Elem b) const noexcept;
  Elem square(Elem a) const noexcept { return square_[a]; }
  Elem pow(Elem a, std::uint64_t e) const noexcept;

  bool is_unit(Elem a) const noexcept;
  std::uint32_t unit_count() const noexcept;

  /// Absolute trace to F_p (identity on prime fields). Fields only.
  Elem trace(Elem a) const;

  /// Order N of the character values: p for fields, q for rings.
  std::uint32_t phase_modulus() const noexcept { return is_field() ? p_ : q_; }
  /// chi(a) = exp(2 pi i phase(a) / N).
  std::uint32_t phase(Elem a) const noexcept { return is_field() ? trace_[a] : a; }
  /// Canonical additive character; throws InvalidElement for a >= q.
  std::complex<double> char_value(Elem a) const;
  /// exp(2 pi i j / N) for j in [0, N).
  std::span<const std::complex<double>> roots() const noexcept { return roots_; }

  /// Sum of squares of the coordinates.
  Elem norm(std::span<const Elem> x) const noexcept;

  /// Quadratic character eta(a) in {-1, 0, 1}. Fields only.
  int quadratic_character(Elem a) const;

  /// Modulus polynomial coefficients, constant term first, monic.
  /// Empty unless kind() == ExtensionField.
  std::span<const Elem> modulus_polynomial() const noexcept { return modulus_; }

 private:
  friend struct DomainBuilder;
  Domain() = default;
  void build_extension_tables();

  DomainKind kind_ = DomainKind::PrimeField;
  std::uint32_t p_ = 0;
  std::uint32_t exponent_ = 1;
  std::uint32_t q_ = 0;

  std::vector<Elem> neg_;
  std::vector<Elem> square_;
  std::vector<Elem> trace_;
  std::vector<std::complex<double>> roots_;

  // Extension fields only.
  std::vector<Elem> modulus_;
  std::vector<Elem> antilog_;  // 2(q-1) entries
  std::vector<std::uint32_t> log_;
  std::vector<std::uint16_t> add_table_;  // q*q entries when q is small
};

/// Builds a context. n_or_ell is the extension degree for fields and the
/// exponent for residue rings. An extension field with n = 1 is a prime field.
/// Errors: NonPrime, EvenCharacteristic, SizeTooLarge, InvalidArgument.
DomainPtr make_domain(DomainKind kind, std::uint32_t p, std::uint32_t n_or_ell);

/// Parses "F7", "F3^2", "Z3^2"; also accepts a prime-power size such as "F9"
/// or "Z25".
DomainPtr parse_domain(std::string_view descriptor);

bool is_prime(std::uint64_t n) noexcept;

/// Element of G^d as a coordinate vector.
struct Point {
  std::vector<Elem> coords;
  auto operator<=>(const Point&) const = default;
};

inline Elem norm_form(const Domain& ctx, const Point& x) { return ctx.norm(x.coords); }

}  // namespace starcensus
