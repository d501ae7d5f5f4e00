#include "starcensus/stars.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <set>

#include "starcensus/error.hpp"
#include "starcensus/spectral.hpp"
#include "starcensus/spheres.hpp"

namespace starcensus {

namespace {

// Exact counter: 64-bit fast path, spilling into a big integer on overflow.
class Tally {
 public:
  void add(std::uint64_t v) {
    std::uint64_t sum;
    if (__builtin_add_overflow(fast_, v, &sum)) {
      slow_ += fast_;
      fast_ = v;
    } else {
      fast_ = sum;
    }
  }
  void add(const BigInt& v) { slow_ += v; }

  // Adds the product of the factors, escalating when it overflows 64 bits.
  void add_product(std::span<const std::uint64_t> factors) {
    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i] == 0) return;
      if (__builtin_mul_overflow(prod, factors[i], &prod)) {
        BigInt big = 1;
        for (std::uint64_t f : factors) big *= f;
        add(big);
        return;
      }
    }
    add(prod);
  }

  BigInt value() const { return slow_ + fast_; }

 private:
  std::uint64_t fast_ = 0;
  BigInt slow_ = 0;
};

// ||x - y|| on coordinate spans.
class DistanceKernel {
 public:
  explicit DistanceKernel(const Domain& ctx) : ctx_(ctx), q_(ctx.size()) {
    modular_ = ctx.kind() != DomainKind::ExtensionField;
    if (q_ <= 1024) {
      table_.resize(static_cast<std::size_t>(q_) * q_);
      for (Elem a = 0; a < q_; ++a) {
        for (Elem b = 0; b < q_; ++b) table_[a * q_ + b] = ctx.square(ctx.sub(a, b));
      }
    }
  }

  Elem operator()(std::span<const Elem> x, std::span<const Elem> y) const noexcept {
    if (table_.empty()) {
      Elem acc = 0;
      for (std::size_t i = 0; i < x.size(); ++i) acc = ctx_.add(acc, ctx_.square(ctx_.sub(x[i], y[i])));
      return acc;
    }
    if (modular_) {
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < x.size(); ++i) acc += table_[x[i] * q_ + y[i]];
      return static_cast<Elem>(acc % q_);
    }
    Elem acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) acc = ctx_.add(acc, table_[x[i] * q_ + y[i]]);
    return acc;
  }

 private:
  const Domain& ctx_;
  std::uint32_t q_;
  bool modular_;
  std::vector<Elem> table_;
};

void require_same_space(const PointSet& set, const StarSpec& spec) {
  if (set.domain_ptr() != spec.domain_ptr() || set.dim() != spec.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "point set and star spec live on different spaces");
  }
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

CountReport make_report(const PointSet& set, const StarSpec& spec, CountMethod method, BigInt count) {
  CountReport report{spec, set.size(), method, std::move(count), main_term(set, spec), 0.0, 0.0,
                     spec.in_hypothesis()};
  if (report.main_term != 0) {
    const Rational diff = abs(Rational(report.count) - report.main_term);
    report.relative_deviation = to_double(diff / report.main_term);
  }
  return report;
}

std::uint64_t binomial(int n, int r) {
  std::uint64_t b = 1;
  for (int i = 1; i <= r; ++i) b = b * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  return b;
}

}  // namespace

StarSpec::StarSpec(DomainPtr ctx, int dim, std::vector<Elem> distances)
    : ctx_(std::move(ctx)), dim_(dim), distances_(std::move(distances)) {
  if (dim_ < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (distances_.empty()) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  for (Elem t : distances_) ctx_->check(t);
}

std::vector<Elem> StarSpec::distinct_distances() const {
  std::vector<Elem> ts = distances_;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

bool StarSpec::in_hypothesis() const noexcept {
  return std::all_of(distances_.begin(), distances_.end(), [&](Elem t) { return ctx_->is_unit(t); });
}

std::string_view to_string(CountMethod method) {
  switch (method) {
    case CountMethod::Brute: return "brute";
    case CountMethod::Pinned: return "pinned";
    case CountMethod::Spectral: return "spectral";
  }
  return "unknown";
}

CountMethod parse_count_method(std::string_view name) {
  if (name == "brute") return CountMethod::Brute;
  if (name == "pinned") return CountMethod::Pinned;
  if (name == "spectral") return CountMethod::Spectral;
  throw Error(ErrorCode::ParseError, fmt::format("unknown method '{}'", name));
}

Rational main_term(const PointSet& set, const StarSpec& spec) {
  require_same_space(set, spec);
  const auto sizes = sphere_sizes(spec.domain_ptr(), spec.dim());
  const BigInt volume = boost::multiprecision::pow(BigInt(spec.domain().size()), spec.dim());
  BigInt numer = boost::multiprecision::pow(BigInt(set.size()), spec.k() + 1);
  BigInt denom = 1;
  for (Elem t : spec.distances()) {
    numer *= sizes[t];
    denom *= volume;
  }
  return Rational(numer, denom);
}

double estimated_ops(const PointSet& set, const StarSpec& spec, CountMethod method) {
  const double n = static_cast<double>(set.size());
  const double q = spec.domain().size();
  const int d = spec.dim();
  switch (method) {
    case CountMethod::Brute: return std::pow(n, spec.k() + 1);
    case CountMethod::Pinned: return n * n;
    case CountMethod::Spectral: {
      const double transforms = 1.0 + 2.0 * static_cast<double>(spec.distinct_distances().size());
      return transforms * d * std::pow(q, d + 1) + n * spec.k();
    }
  }
  return 0.0;
}

CountReport count_stars_brute(const PointSet& set, const StarSpec& spec, std::uint64_t budget) {
  require_same_space(set, spec);
  require_budget(estimated_ops(set, spec, CountMethod::Brute), budget, "brute-force star count");
  const DistanceKernel dist(spec.domain());
  const std::size_t n = set.size();
  const int k = spec.k();
  const auto& ts = spec.distances();
  std::vector<Elem> row(n);
  Tally tally;

  // Walks leaves x^1..x^k in order; a branch continues only while every
  // chosen leaf sits at its prescribed distance from the hub.
  std::function<void(int)> walk = [&](int level) {
    const Elem t = ts[level];
    if (level == k - 1) {
      std::uint64_t leaves = 0;
      for (std::size_t y = 0; y < n; ++y) leaves += row[y] == t;
      tally.add(leaves);
      return;
    }
    for (std::size_t y = 0; y < n; ++y) {
      if (row[y] == t) walk(level + 1);
    }
  };

  for (std::size_t x = 0; x < n; ++x) {
    const auto hub = set.coords(x);
    for (std::size_t y = 0; y < n; ++y) row[y] = dist(hub, set.coords(y));
    walk(0);
  }
  return make_report(set, spec, CountMethod::Brute, tally.value());
}

CountReport count_stars_pinned(const PointSet& set, const StarSpec& spec, std::uint64_t budget) {
  require_same_space(set, spec);
  require_budget(estimated_ops(set, spec, CountMethod::Pinned), budget, "pinned star count");
  const DistanceKernel dist(spec.domain());
  const std::size_t n = set.size();
  const auto& ts = spec.distances();
  std::vector<std::uint64_t> neighbors(spec.domain().size());
  std::vector<std::uint64_t> factors(ts.size());
  Tally tally;
  for (std::size_t x = 0; x < n; ++x) {
    std::fill(neighbors.begin(), neighbors.end(), 0);
    const auto hub = set.coords(x);
    for (std::size_t y = 0; y < n; ++y) ++neighbors[dist(hub, set.coords(y))];
    for (std::size_t i = 0; i < ts.size(); ++i) factors[i] = neighbors[ts[i]];
    tally.add_product(factors);
  }
  return make_report(set, spec, CountMethod::Pinned, tally.value());
}

CountReport count_stars_spectral(const PointSet& set, const StarSpec& spec, std::uint64_t budget) {
  require_same_space(set, spec);
  require_budget(estimated_ops(set, spec, CountMethod::Spectral), budget, "spectral star count");
  const GridShape shape = set.shape();
  if (shape.size() > kMaxGridPoints) {
    throw Error(ErrorCode::BudgetExceeded, "grid too large for the spectral method");
  }
  const Spectrum set_hat = dft_forward(indicator(set));
  const auto norms = norm_grid(shape);
  const double scale = static_cast<double>(shape.size());

  // n_t = E * S_t for each distinct t, evaluated only on E afterwards.
  const auto distinct = spec.distinct_distances();
  std::vector<std::vector<std::uint64_t>> neighbor_counts;
  double residual = 0.0;
  for (Elem t : distinct) {
    IntGrid sphere(shape);
    for (std::size_t i = 0; i < norms.size(); ++i) sphere[i] = norms[i] == t;
    Spectrum product = dft_forward(sphere);
    for (std::size_t m = 0; m < product.size(); ++m) product[m] *= set_hat[m] * scale;
    const RoundedGrid conv = round_to_integers(dft_inverse(product));
    residual = std::max(residual, conv.residual);
    std::vector<std::uint64_t> on_set(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
      on_set[i] = static_cast<std::uint64_t>(conv.values[set.indices()[i]]);
    }
    neighbor_counts.push_back(std::move(on_set));
  }

  std::vector<std::size_t> slot(spec.k());
  for (int i = 0; i < spec.k(); ++i) {
    slot[i] = static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), spec.distances()[i]) - distinct.begin());
  }
  std::vector<std::uint64_t> factors(spec.k());
  Tally tally;
  for (std::size_t x = 0; x < set.size(); ++x) {
    for (int i = 0; i < spec.k(); ++i) factors[i] = neighbor_counts[slot[i]][x];
    tally.add_product(factors);
  }
  CountReport report = make_report(set, spec, CountMethod::Spectral, tally.value());
  report.residual = residual;
  const double limit = 1e-6 * (1.0 + report.count.convert_to<double>());
  if (residual > limit) {
    throw Error(ErrorCode::RoundingResidualExceeded,
                fmt::format("spectral residual {:.3e} exceeds {:.3e}", residual, limit));
  }
  return report;
}

CountReport count_stars(const PointSet& set, const StarSpec& spec, CountMethod method,
                        std::uint64_t budget) {
  switch (method) {
    case CountMethod::Brute: return count_stars_brute(set, spec, budget);
    case CountMethod::Pinned: return count_stars_pinned(set, spec, budget);
    case CountMethod::Spectral: return count_stars_spectral(set, spec, budget);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method");
}

double threshold_exponent(const Domain& ctx, int dim) {
  const double l = ctx.ring_exponent();
  return (dim * (2 * l - 1) + 1) / (2 * l);
}

double remainder_scale(const Domain& ctx, int dim, int k, std::size_t set_size) {
  const double q = ctx.size();
  return std::pow(q, threshold_exponent(ctx, dim) - k) * std::pow(static_cast<double>(set_size), k);
}

DecompReport decompose(const PointSet& set, const StarSpec& spec, std::uint64_t budget) {
  require_same_space(set, spec);
  const GridShape shape = set.shape();
  const int k = spec.k();
  const int d = spec.dim();
  const double terms = std::pow(static_cast<double>(shape.size()), k);
  require_budget(terms, static_cast<std::uint64_t>(std::min(kMaxFrequencyTerms, static_cast<double>(budget))),
                 "frequency-space decomposition");

  DecompReport report;
  // Coefficients this small are rounding noise of an exact zero.
  constexpr double kSnap = 1e-12;
  auto snap = [&](Spectrum& s) {
    for (auto& v : s.values()) {
      if (v != std::complex<double>{} && std::abs(v) < kSnap) {
        v = {};
        ++report.snapped;
      }
    }
  };

  Spectrum set_hat = dft_forward(indicator(set));
  snap(set_hat);
  const auto distinct = spec.distinct_distances();
  std::vector<Spectrum> sphere_hats;
  for (Elem t : distinct) {
    sphere_hats.push_back(dft_forward(sphere_indicator(spec.domain_ptr(), d, t)));
    snap(sphere_hats.back());
  }
  std::vector<const Spectrum*> leg(k);
  for (int i = 0; i < k; ++i) {
    const auto pos = std::lower_bound(distinct.begin(), distinct.end(), spec.distances()[i]) - distinct.begin();
    leg[i] = &sphere_hats[static_cast<std::size_t>(pos)];
  }

  const std::size_t volume = shape.size();
  std::vector<Elem> freq_coords(volume * d);
  for (std::size_t m = 0; m < volume; ++m) shape.decode(m, std::span<Elem>(freq_coords.data() + m * d, d));
  const Domain& ctx = spec.domain();
  const std::uint32_t q = ctx.size();

  // sum over nonzero m^a (a in free) of Ehat(-sum m) prod Ehat(m^a) Shat_a(m^a)
  auto free_sum = [&](const std::vector<int>& free) {
    const std::size_t r = free.size();
    if (r == 0) return std::complex<long double>(set_hat[0].real(), set_hat[0].imag());
    std::vector<Elem> partial((r + 1) * d, 0);
    std::complex<long double> acc = 0;
    std::function<void(std::size_t, std::complex<double>)> walk = [&](std::size_t level,
                                                                      std::complex<double> weight) {
      const Elem* sum = partial.data() + level * d;
      if (level == r) {
        std::size_t idx = 0;
        for (int c = 0; c < d; ++c) idx = idx * q + ctx.neg(sum[c]);
        const std::complex<double> term = weight * set_hat[idx];
        acc += std::complex<long double>(term.real(), term.imag());
        return;
      }
      const Spectrum& s_hat = *leg[free[level]];
      Elem* next = partial.data() + (level + 1) * d;
      for (std::size_t m = 1; m < volume; ++m) {
        const std::complex<double> w = weight * set_hat[m] * s_hat[m];
        if (w == std::complex<double>{}) continue;
        const Elem* mc = freq_coords.data() + m * d;
        for (int c = 0; c < d; ++c) next[c] = ctx.add(sum[c], mc[c]);
        walk(level + 1, w);
      }
    };
    walk(0, {1.0, 0.0});
    return acc;
  };

  const long double outer = std::pow(static_cast<long double>(volume), k + 1);
  report.remainders.assign(k, 0.0);
  report.binomials.resize(k);
  for (int j = 0; j < k; ++j) report.binomials[j] = binomial(k, j);
  std::vector<long double> by_zeros(k + 1, 0.0L);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> free;
    std::complex<long double> prefactor = 1.0L;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        const std::complex<double> z = set_hat[0] * (*leg[i])[0];
        prefactor *= std::complex<long double>(z.real(), z.imag());
      } else {
        free.push_back(i);
      }
    }
    const int zeros = k - static_cast<int>(free.size());
    if (zeros == k) continue;  // the main term, taken exactly below
    const std::complex<long double> value = outer * prefactor * free_sum(free);
    report.imag_residue = std::max(report.imag_residue, static_cast<double>(std::abs(value.imag())));
    by_zeros[zeros] += value.real();
  }
  for (int j = 0; j < k; ++j) {
    report.remainders[j] = static_cast<double>(by_zeros[j] / static_cast<long double>(report.binomials[j]));
  }

  report.main_term = main_term(set, spec);
  report.count = count_stars_pinned(set, spec, budget).count;
  long double recon = report.main_term.convert_to<long double>();
  for (int j = 0; j < k; ++j) recon += static_cast<long double>(report.binomials[j]) * report.remainders[j];
  report.reconstruction = static_cast<double>(recon);
  report.reconstruction_error =
      static_cast<double>(std::abs(report.count.convert_to<long double>() - recon));
  report.remainder_scale = remainder_scale(ctx, d, k, set.size());
  if (report.remainder_scale > 0) {
    const double gap = to_double(abs(Rational(report.count) - report.main_term));
    report.c_meas = gap / report.remainder_scale;
  }
  return report;
}

std::vector<Elem> distance_set(const PointSet& set, std::uint64_t budget) {
  const double n = static_cast<double>(set.size());
  require_budget(n * n / 2, budget, "distance set");
  const DistanceKernel dist(set.domain());
  std::vector<bool> seen(set.domain().size(), false);
  if (!set.empty()) seen[0] = true;
  for (std::size_t x = 0; x < set.size(); ++x) {
    for (std::size_t y = x + 1; y < set.size(); ++y) seen[dist(set.coords(x), set.coords(y))] = true;
  }
  std::vector<Elem> out;
  for (Elem t = 0; t < seen.size(); ++t) {
    if (seen[t]) out.push_back(t);
  }
  return out;
}

Rational pinned_volume_average(const PointSet& set, int k, std::uint64_t budget) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  const std::size_t n = set.size();
  if (n == 0) return 0;
  require_budget(std::pow(static_cast<double>(n), k + 1), budget, "pinned volume average");
  const DistanceKernel dist(set.domain());
  const std::uint32_t q = set.domain().size();

  // Distance matrix when affordable; otherwise distances are recomputed.
  const bool cached = static_cast<double>(n) * n <= static_cast<double>(1u << 24);
  std::vector<Elem> matrix;
  if (cached) {
    matrix.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) matrix[a * n + b] = dist(set.coords(a), set.coords(b));
    }
  }
  auto distance = [&](std::size_t a, std::size_t b) {
    return cached ? matrix[a * n + b] : dist(set.coords(a), set.coords(b));
  };

  const double cells = std::pow(static_cast<double>(q), k);
  const bool dense = cells <= kMaxStarSetCells;
  std::vector<std::uint64_t> stamp(dense ? static_cast<std::size_t>(cells) : 0, 0);
  std::uint64_t generation = 0;
  std::vector<std::uint64_t> codes(n);
  std::vector<std::size_t> pins(k, 0);
  BigInt total = 0;

  while (true) {
    for (std::size_t x = 0; x < n; ++x) {
      std::uint64_t code = 0;
      for (int i = 0; i < k; ++i) code = code * q + distance(x, pins[i]);
      codes[x] = code;
    }
    std::uint64_t distinct = 0;
    if (dense) {
      ++generation;
      for (std::uint64_t c : codes) {
        if (stamp[c] != generation) {
          stamp[c] = generation;
          ++distinct;
        }
      }
    } else {
      std::sort(codes.begin(), codes.end());
      distinct = static_cast<std::uint64_t>(std::unique(codes.begin(), codes.end()) - codes.begin());
    }
    total += distinct;

    int pos = k - 1;
    while (pos >= 0 && ++pins[pos] == n) pins[pos--] = 0;
    if (pos < 0) break;
  }
  return Rational(total, boost::multiprecision::pow(BigInt(n), k));
}

bool StarSet::contains(std::span<const Elem> distances) const {
  if (distances.size() != static_cast<std::size_t>(k)) return false;
  std::size_t code = 0;
  for (Elem t : distances) {
    if (t >= q) return false;
    code = code * q + t;
  }
  return members[code];
}

StarSet star_set(const PointSet& set, int k, std::uint64_t budget) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  const std::uint32_t q = set.domain().size();
  const double cells = std::pow(static_cast<double>(q), k);
  if (cells > kMaxStarSetCells) {
    throw Error(ErrorCode::BudgetExceeded, fmt::format("star set over {:.3g} cells is too large", cells));
  }
  const double n = static_cast<double>(set.size());
  require_budget(n * n, budget, "star set");

  StarSet out{q, k, std::vector<bool>(static_cast<std::size_t>(cells), false), 0, 0};
  const DistanceKernel dist(set.domain());
  // The leaves range independently, so each hub contributes D_x^k.
  std::set<std::vector<Elem>> hub_sets;
  std::vector<bool> seen(q);
  for (std::size_t x = 0; x < set.size(); ++x) {
    std::fill(seen.begin(), seen.end(), false);
    for (std::size_t y = 0; y < set.size(); ++y) seen[dist(set.coords(x), set.coords(y))] = true;
    std::vector<Elem> dx;
    for (Elem t = 0; t < q; ++t) {
      if (seen[t]) dx.push_back(t);
    }
    out.max_hub_distances = std::max(out.max_hub_distances, dx.size());
    hub_sets.insert(std::move(dx));
  }
  for (const auto& dx : hub_sets) {
    std::vector<std::size_t> digit(k, 0);
    while (true) {
      std::size_t code = 0;
      for (int i = 0; i < k; ++i) code = code * q + dx[digit[i]];
      if (!out.members[code]) {
        out.members[code] = true;
        ++out.cardinality;
      }
      int pos = k - 1;
      while (pos >= 0 && ++digit[pos] == dx.size()) digit[pos--] = 0;
      if (pos < 0) break;
    }
  }
  return out;
}

}  // namespace starcensus
