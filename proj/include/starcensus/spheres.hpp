#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "starcensus/budget.hpp"
#include "starcensus/spectral.hpp"

namespace starcensus {

/// The level set S_t = {x in G^d : x_1^2 + ... + x_d^2 = t}.
struct SphereTable {
  DomainPtr ctx;
  int dim = 0;
  Elem t = 0;
  PointSet points;
  std::uint64_t cardinality = 0;
  std::optional<Spectrum> spectrum;
  /// max over m != 0 of |S_t^(m)|; set only when the spectrum is computed.
  double max_nonzero_fourier = 0.0;
  std::vector<Elem> argmax_frequency;
  /// max |Im S_t^(m)|; zero up to rounding because S_t = -S_t.
  double imag_residue = 0.0;
};

/// ||x|| for every point of the grid, in index order.
std::vector<Elem> norm_grid(const GridShape& shape);

/// |S_t| for every t in G, by one scan of G^d.
std::vector<std::uint64_t> sphere_sizes(const DomainPtr& ctx, int dim,
                                        std::uint64_t budget = kDefaultBudget);

/// Full scan of G^d. Errors: BudgetExceeded when q^d > budget, InvalidElement.
SphereTable enumerate_sphere(const DomainPtr& ctx, int dim, Elem t, bool with_spectrum = false,
                             std::uint64_t budget = kDefaultBudget);

IntGrid sphere_indicator(const DomainPtr& ctx, int dim, Elem t);

/// Closed-form |S_t| over a prime field for t != 0:
///   d odd:  q^{d-1} + q^{(d-1)/2} eta((-1)^{(d-1)/2} t)
///   d even: q^{d-1} - q^{(d-2)/2} eta((-1)^{d/2})
/// Errors: UnsupportedDomain for rings and extension fields, InvalidArgument
/// for t = 0.
std::uint64_t sphere_count_oracle(const Domain& ctx, int dim, Elem t);

/// Fourier decay bound on S_t^(m), m != 0: 2 q^{-(d+1)/2} over fields and
/// l(l+1) q^{-(d+2l-1)/(2l)} over Z_{p^l}.
double sphere_bound(const Domain& ctx, int dim);

/// Whether t satisfies the hypothesis of the Fourier decay bound (t != 0, resp. t a unit).
bool sphere_hypothesis(const Domain& ctx, Elem t);

struct BoundReport {
  std::string domain;
  std::uint32_t q = 0;
  int dim = 0;
  Elem t = 0;
  std::uint64_t cardinality = 0;
  double max_nonzero_fourier = 0.0;
  std::vector<Elem> argmax_frequency;
  double bound = 0.0;
  double ratio = 0.0;
  bool in_hypothesis = true;
  /// ratio > 1 + 1e-9 for an in-hypothesis t.
  bool violation = false;
  double imag_residue = 0.0;
};

BoundReport verify_sphere_bound(const DomainPtr& ctx, int dim, Elem t,
                                std::uint64_t budget = kDefaultBudget);

}  // namespace starcensus
