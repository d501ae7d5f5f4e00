#include "starcensus/algebra.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "starcensus/error.hpp"

namespace starcensus {

namespace {

// Conway polynomials C_{p,n} from Luebeck's tables, constant term first.
struct PublishedModulus {
  std::uint32_t p;
  std::uint32_t n;
  std::vector<Elem> coeffs;
};

const std::vector<PublishedModulus>& published_moduli() {
  static const std::vector<PublishedModulus> table = {
      {3, 2, {2, 2, 1}},        {3, 3, {1, 2, 0, 1}},       {3, 4, {2, 0, 0, 2, 1}},
      {3, 5, {1, 2, 0, 0, 0, 1}}, {5, 2, {2, 4, 1}},        {5, 3, {3, 3, 0, 1}},
      {7, 2, {3, 6, 1}},        {7, 3, {4, 0, 6, 1}},       {11, 2, {2, 7, 1}},
      {13, 2, {2, 12, 1}},
  };
  return table;
}

// Multiplication by x modulo a monic polynomial, on digit vectors.
void times_x(std::vector<Elem>& digits, const std::vector<Elem>& modulus, std::uint32_t p) {
  const std::size_t n = digits.size();
  const Elem top = digits[n - 1];
  for (std::size_t i = n - 1; i > 0; --i) digits[i] = digits[i - 1];
  digits[0] = 0;
  if (top == 0) return;
  for (std::size_t i = 0; i < n; ++i) {
    digits[i] = static_cast<Elem>((digits[i] + (p - top) * modulus[i]) % p);
  }
}

Elem pack(const std::vector<Elem>& digits, std::uint32_t p) {
  Elem code = 0;
  for (std::size_t i = digits.size(); i-- > 0;) code = code * p + digits[i];
  return code;
}

// Fills antilog with powers of x; returns false if x is not primitive.
bool powers_of_x(const std::vector<Elem>& modulus, std::uint32_t p, std::uint32_t q,
                 std::vector<Elem>& antilog) {
  const std::size_t n = modulus.size() - 1;
  std::vector<Elem> digits(n, 0);
  digits[0] = 1;
  std::vector<bool> seen(q, false);
  antilog.assign(q - 1, 0);
  for (std::uint32_t e = 0; e + 1 < q; ++e) {
    const Elem code = pack(digits, p);
    if (code == 0 || seen[code]) return false;
    seen[code] = true;
    antilog[e] = code;
    times_x(digits, modulus, p);
  }
  return pack(digits, p) == 1;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

struct DomainBuilder {
  static DomainPtr build(DomainKind kind, std::uint32_t p, std::uint32_t n_or_ell);
};

// Contexts are interned: equal (kind, p, exponent) share one immutable
// instance, so spaces can be compared by pointer.
DomainPtr make_domain(DomainKind kind, std::uint32_t p, std::uint32_t n_or_ell) {
  if (n_or_ell < 1) throw Error(ErrorCode::InvalidArgument, "exponent must be >= 1");
  if (kind == DomainKind::ExtensionField && n_or_ell == 1) kind = DomainKind::PrimeField;
  if (kind == DomainKind::PrimeField && n_or_ell != 1) kind = DomainKind::ExtensionField;
  static std::mutex mutex;
  static std::map<std::tuple<int, std::uint32_t, std::uint32_t>, DomainPtr> cache;
  const auto key = std::make_tuple(static_cast<int>(kind), p, n_or_ell);
  std::lock_guard lock(mutex);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  DomainPtr ctx = DomainBuilder::build(kind, p, n_or_ell);
  cache.emplace(key, ctx);
  return ctx;
}

DomainPtr DomainBuilder::build(DomainKind kind, std::uint32_t p, std::uint32_t n_or_ell) {
  if (p == 2) throw Error(ErrorCode::EvenCharacteristic, "characteristic 2 is not supported");
  if (!is_prime(p)) throw Error(ErrorCode::NonPrime, fmt::format("{} is not prime", p));
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < n_or_ell; ++i) {
    q *= p;
    if (q > kMaxDomainSize) {
      throw Error(ErrorCode::SizeTooLarge,
                  fmt::format("{}^{} exceeds the table limit {}", p, n_or_ell, kMaxDomainSize));
    }
  }

  auto ctx = std::shared_ptr<Domain>(new Domain());
  ctx->kind_ = kind;
  ctx->p_ = p;
  ctx->exponent_ = n_or_ell;
  ctx->q_ = static_cast<std::uint32_t>(q);

  if (kind == DomainKind::ExtensionField) ctx->build_extension_tables();

  const std::uint32_t qq = ctx->q_;
  ctx->neg_.resize(qq);
  ctx->square_.resize(qq);
  for (Elem a = 0; a < qq; ++a) {
    if (kind == DomainKind::ExtensionField) {
      Elem r = 0, scale = 1, rest = a;
      for (std::uint32_t i = 0; i < n_or_ell; ++i) {
        const Elem digit = rest % p;
        rest /= p;
        r += ((p - digit) % p) * scale;
        scale *= p;
      }
      ctx->neg_[a] = r;
    } else {
      ctx->neg_[a] = (qq - a) % qq;
    }
  }
  for (Elem a = 0; a < qq; ++a) ctx->square_[a] = ctx->mul(a, a);

  ctx->trace_.resize(qq);
  if (kind == DomainKind::ExtensionField) {
    for (Elem a = 0; a < qq; ++a) {
      Elem acc = 0, conj = a;
      for (std::uint32_t i = 0; i < n_or_ell; ++i) {
        acc = ctx->add(acc, conj);
        conj = ctx->pow(conj, p);
      }
      ctx->trace_[a] = acc;  // lands in the prime subfield, codes 0..p-1
    }
  } else if (kind == DomainKind::PrimeField) {
    for (Elem a = 0; a < qq; ++a) ctx->trace_[a] = a;
  }

  const std::uint32_t modulus = ctx->phase_modulus();
  ctx->roots_.resize(modulus);
  for (std::uint32_t j = 0; j < modulus; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / modulus;
    ctx->roots_[j] = {std::cos(angle), std::sin(angle)};
  }
  return ctx;
}

void Domain::build_extension_tables() {
  const std::uint32_t n = exponent_;
  bool found = false;
  for (const auto& entry : published_moduli()) {
    if (entry.p == p_ && entry.n == n) {
      modulus_ = entry.coeffs;
      found = powers_of_x(modulus_, p_, q_, antilog_);
      break;
    }
  }
  if (!found) {
    // Lexicographic search over monic degree-n polynomials with nonzero
    // constant term.
    modulus_.assign(n + 1, 0);
    modulus_[n] = 1;
    for (std::uint64_t code = 1; code < q_ && !found; ++code) {
      std::uint64_t rest = code;
      for (std::uint32_t i = 0; i < n; ++i) {
        modulus_[i] = static_cast<Elem>(rest % p_);
        rest /= p_;
      }
      if (modulus_[0] == 0) continue;
      found = powers_of_x(modulus_, p_, q_, antilog_);
    }
  }
  if (!found) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("no primitive polynomial found for {}^{}", p_, n));
  }

  log_.assign(q_, 0);
  for (std::uint32_t e = 0; e + 1 < q_; ++e) log_[antilog_[e]] = e;
  const std::size_t period = q_ - 1;
  antilog_.resize(2 * period);
  for (std::size_t e = 0; e < period; ++e) antilog_[period + e] = antilog_[e];

  if (q_ <= 1024) {
    add_table_.resize(static_cast<std::size_t>(q_) * q_);
    for (Elem a = 0; a < q_; ++a) {
      for (Elem b = 0; b < q_; ++b) {
        Elem r = 0, scale = 1, ra = a, rb = b;
        for (std::uint32_t i = 0; i < n; ++i) {
          r += ((ra % p_ + rb % p_) % p_) * scale;
          ra /= p_;
          rb /= p_;
          scale *= p_;
        }
        add_table_[static_cast<std::size_t>(a) * q_ + b] = static_cast<std::uint16_t>(r);
      }
    }
  }
}

std::string Domain::descriptor() const {
  const char letter = kind_ == DomainKind::ResidueRing ? 'Z' : 'F';
  if (exponent_ == 1) return fmt::format("{}{}", letter, p_);
  return fmt::format("{}{}^{}", letter, p_, exponent_);
}

void Domain::check(Elem a) const {
  if (a >= q_) {
    throw Error(ErrorCode::InvalidElement,
                fmt::format("element code {} out of range for {}", a, descriptor()));
  }
}

Elem Domain::add(Elem a, Elem b) const noexcept {
  if (kind_ != DomainKind::ExtensionField) {
    const Elem s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
  Elem r = 0, scale = 1;
  for (std::uint32_t i = 0; i < exponent_; ++i) {
    r += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return r;
}

Elem Domain::mul(Elem a, Elem b) const noexcept {
  if (kind_ != DomainKind::ExtensionField) {
    return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % q_);
  }
  if (a == 0 || b == 0) return 0;
  return antilog_[log_[a] + log_[b]];
}

Elem Domain::pow(Elem a, std::uint64_t e) const noexcept {
  Elem result = 1 % q_;
  Elem base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

bool Domain::is_unit(Elem a) const noexcept {
  if (a >= q_) return false;
  if (is_field()) return a != 0;
  return a % p_ != 0;
}

std::uint32_t Domain::unit_count() const noexcept {
  return is_field() ? q_ - 1 : q_ - q_ / p_;
}

Elem Domain::trace(Elem a) const {
  if (!is_field()) throw Error(ErrorCode::UnsupportedDomain, "trace is defined for fields only");
  check(a);
  return trace_[a];
}

std::complex<double> Domain::char_value(Elem a) const {
  check(a);
  return roots_[phase(a)];
}

Elem Domain::norm(std::span<const Elem> x) const noexcept {
  Elem acc = 0;
  for (Elem c : x) acc = add(acc, square_[c]);
  return acc;
}

int Domain::quadratic_character(Elem a) const {
  if (!is_field()) {
    throw Error(ErrorCode::UnsupportedDomain, "quadratic character is defined for fields only");
  }
  check(a);
  if (a == 0) return 0;
  return pow(a, (q_ - 1) / 2) == 1 ? 1 : -1;
}

DomainPtr parse_domain(std::string_view text) {
  auto fail = [&](const std::string& why) -> DomainPtr {
    throw Error(ErrorCode::ParseError, fmt::format("bad domain '{}': {}", text, why));
  };
  if (text.size() < 2) return fail("too short");
  DomainKind kind;
  switch (text[0]) {
    case 'F': kind = DomainKind::PrimeField; break;
    case 'Z': kind = DomainKind::ResidueRing; break;
    default: return fail("expected leading 'F' or 'Z'");
  }
  auto parse_uint = [&](std::string_view s) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) fail("expected an integer");
    return v;
  };
  const std::string_view body = text.substr(1);
  const auto caret = body.find('^');
  std::uint32_t base = parse_uint(body.substr(0, caret));
  std::uint32_t exponent = caret == std::string_view::npos ? 1 : parse_uint(body.substr(caret + 1));
  if (exponent == 0) return fail("exponent must be >= 1");

  if (caret == std::string_view::npos && base > 2 && !is_prime(base)) {
    // Prime-power size such as F9 or Z25.
    std::uint32_t p = 2;
    while (base % p != 0) ++p;
    std::uint32_t rest = base, e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (rest != 1) {
      throw Error(ErrorCode::NonPrime, fmt::format("{} is not a prime power", base));
    }
    base = p;
    exponent = e;
  }
  if (kind == DomainKind::PrimeField && exponent > 1) kind = DomainKind::ExtensionField;
  return make_domain(kind, base, exponent);
}

}  // namespace starcensus
