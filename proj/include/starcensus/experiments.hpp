#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "starcensus/budget.hpp"
#include "starcensus/spheres.hpp"
#include "starcensus/stars.hpp"

namespace starcensus {

/// Runs fn(0..count-1) on up to `workers` threads. Exceptions propagate
/// (the first one wins) after all workers stop.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

enum class SetSource { File, Random, Structured };

/// Everything needed to re-run a sweep. Random sets are the seeded shuffle
/// prefixes of sample_random_set, so the sizes of one seed are nested.
struct ExperimentPlan {
  std::string domain;  // descriptor, e.g. "F29"
  int dim = 2;
  std::vector<Elem> distances{1};
  SetSource source = SetSource::Random;
  std::string set_path;        // SetSource::File
  std::string structured;      // SetSource::Structured, "KIND:PARAMS"
  std::vector<std::uint64_t> seeds{1};
  /// |E| = ceil(multiplier * q^{threshold exponent}) for each entry ...
  std::vector<double> multipliers;
  /// ... or these absolute sizes when multipliers is empty.
  std::vector<std::size_t> sizes;
  std::vector<CountMethod> methods{CountMethod::Spectral};
  std::string output;  // CSV path; empty means no files
  unsigned workers = 1;
  std::uint64_t budget = kDefaultBudget;

  std::string to_json() const;
  static ExperimentPlan from_json(std::string_view text);
};

struct SweepRow {
  std::uint32_t q = 0;
  int d = 0;
  int k = 0;
  std::uint32_t ell = 1;
  std::string distances;  // "1;1"
  std::size_t set_size = 0;
  std::uint64_t seed = 0;
  CountMethod method = CountMethod::Spectral;
  bool ok = true;
  std::string error;
  BigInt nu = 0;
  double main_term = 0.0;
  double ratio = 0.0;
  double c_meas = 0.0;
  double residual = 0.0;
  double ms = 0.0;
};

inline constexpr const char* kSweepHeader = "q,d,k,ell,T,setsize,seed,method,nu,M,ratio,c_meas,residual,ms";

/// One row per (size, seed, method), in plan order. Failed rows are kept
/// with ok = false.
std::vector<SweepRow> run_sweep(const ExperimentPlan& plan);

/// Writes the header and rows. Without timing the ms column is left empty.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool with_timing = true);
/// Two columns "setsize ratio", first successful method per (size, seed).
void write_ratio_file(std::ostream& out, const std::vector<SweepRow>& rows);

/// Runs the plan and, if plan.output is set, writes the CSV and
/// "<output>.ratio.dat".
std::vector<SweepRow> run_sweep_to_files(const ExperimentPlan& plan);

struct CampaignResult {
  std::vector<BoundReport> rows;
  std::size_t violations = 0;
};

inline constexpr const char* kVerifyHeader =
    "domain,q,d,t,in_hypothesis,cardinality,card_over_qd1,max_fourier,bound,ratio,argmax,violation";

/// Every (domain, d, t) with t != 0; non-unit ring t are reported but flagged
/// out of hypothesis and never counted as violations.
CampaignResult run_verify_spheres(const std::vector<std::string>& domains, const std::vector<int>& dims,
                                  unsigned workers = 1, std::uint64_t budget = kDefaultBudget);

void write_verify_csv(std::ostream& out, const CampaignResult& result);

}  // namespace starcensus
