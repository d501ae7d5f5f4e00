#pragma once

/**
 * k-star counting. For a point set E, a hub x and k leaves x^1..x^k form a
 * k-star with distance vector T = (t_1..t_k) when ||x - x^i|| = t_i for all i.
 * nu_k(T) counts such (k+1)-tuples in E^{k+1}.
 *
 * Three independent counting routes are provided:
 *   brute     explicit enumeration of the tuples,
 *   pinned    sum over hubs x of prod_i n_{t_i}(x), n_t(x) = #{y in E : ||x-y|| = t},
 *   spectral  the same product with n_t = E * S_t evaluated by Fourier transform.
 *
 * decompose() evaluates the frequency-space expansion
 *   nu_k = M + sum_j C(k, j) R_j
 * term by term, where R_j collects frequency tuples with exactly j zeros.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string_view>
#include <vector>

#include "starcensus/budget.hpp"
#include "starcensus/geometry.hpp"

namespace starcensus {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class StarSpec {
 public:
  StarSpec(DomainPtr ctx, int dim, std::vector<Elem> distances);

  const Domain& domain() const noexcept { return *ctx_; }
  const DomainPtr& domain_ptr() const noexcept { return ctx_; }
  int dim() const noexcept { return dim_; }
  int k() const noexcept { return static_cast<int>(distances_.size()); }
  const std::vector<Elem>& distances() const noexcept { return distances_; }
  /// Sorted distinct values of T.
  std::vector<Elem> distinct_distances() const;
  /// Every t_i nonzero (fields) or a unit (rings).
  bool in_hypothesis() const noexcept;

 private:
  DomainPtr ctx_;
  int dim_;
  std::vector<Elem> distances_;
};

enum class CountMethod { Brute, Pinned, Spectral };

std::string_view to_string(CountMethod method);
CountMethod parse_count_method(std::string_view name);

struct CountReport {
  StarSpec spec;
  std::size_t set_size = 0;
  CountMethod method = CountMethod::Brute;
  BigInt count = 0;
  /// |E|^{k+1} prod_i |S_{t_i}| / q^{dk}
  Rational main_term = 0;
  /// |nu_k - M| / M, or 0 when M = 0.
  double relative_deviation = 0.0;
  /// Spectral method only: max rounding residual of the convolutions.
  double residual = 0.0;
  bool in_hypothesis = true;
};

/// Expected count |E|^{k+1} prod_i (|S_{t_i}| / q^d).
Rational main_term(const PointSet& set, const StarSpec& spec);

CountReport count_stars_brute(const PointSet& set, const StarSpec& spec,
                              std::uint64_t budget = kDefaultBudget);
CountReport count_stars_pinned(const PointSet& set, const StarSpec& spec,
                               std::uint64_t budget = kDefaultBudget);
CountReport count_stars_spectral(const PointSet& set, const StarSpec& spec,
                                 std::uint64_t budget = kDefaultBudget);
CountReport count_stars(const PointSet& set, const StarSpec& spec, CountMethod method,
                        std::uint64_t budget = kDefaultBudget);

/// Elementary operations each method is expected to spend.
double estimated_ops(const PointSet& set, const StarSpec& spec, CountMethod method);

/// (d(2l-1)+1)/(2l), with l = 1 for fields: the exponent of q in the
/// size threshold for the main-term asymptotics.
double threshold_exponent(const Domain& ctx, int dim);

/// q^{threshold - k} |E|^k, the scale of the remainder bound.
double remainder_scale(const Domain& ctx, int dim, int k, std::size_t set_size);

struct DecompReport {
  Rational main_term = 0;
  /// R_j for j = 0..k-1. With unequal t_i the subsets of j zero positions
  /// are not interchangeable; R_j is then their average, so that
  /// C(k, j) R_j is their sum.
  std::vector<double> remainders;
  std::vector<std::uint64_t> binomials;
  double reconstruction = 0.0;
  BigInt count = 0;
  double reconstruction_error = 0.0;
  double remainder_scale = 0.0;
  double c_meas = 0.0;
  /// Largest |Im| among the summed remainders.
  double imag_residue = 0.0;
  /// Fourier coefficients flushed to exact zero.
  std::size_t snapped = 0;
};

/// Largest q^{dk} decompose() will sum over.
inline constexpr double kMaxFrequencyTerms = 1e8;

DecompReport decompose(const PointSet& set, const StarSpec& spec,
                       std::uint64_t budget = kDefaultBudget);

/// Delta(E) = {||x - y|| : x, y in E}, sorted.
std::vector<Elem> distance_set(const PointSet& set, std::uint64_t budget = kDefaultBudget);

/// |E|^{-k} sum over pins (x^1..x^k) in E^k of |Delta_{x^1..x^k}(E)|.
Rational pinned_volume_average(const PointSet& set, int k, std::uint64_t budget = kDefaultBudget);

/// Dense membership over G^k, indexed in mixed radix with t_1 most significant.
struct StarSet {
  std::uint32_t q = 0;
  int k = 0;
  std::vector<bool> members;
  std::uint64_t cardinality = 0;
  /// max over hubs x of |D_x|, D_x = {||x - y|| : y in E}.
  std::size_t max_hub_distances = 0;

  bool contains(std::span<const Elem> distances) const;
};

/// Largest q^k star_set() will materialize.
inline constexpr double kMaxStarSetCells = 1e7;

StarSet star_set(const PointSet& set, int k, std::uint64_t budget = kDefaultBudget);

}  // namespace starcensus
