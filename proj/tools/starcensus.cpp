// starcensus: count k-star configurations over finite fields and residue
// rings, and run the sphere and main-term verification campaigns.
//
// Exit codes: 0 success, 1 bound violation, 2 usage or parse error,
// 3 budget exceeded.

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "starcensus/error.hpp"
#include "starcensus/experiments.hpp"
#include "starcensus/generators.hpp"
#include "starcensus/setio.hpp"
#include "starcensus/spheres.hpp"
#include "starcensus/stars.hpp"

using namespace starcensus;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct CommonOptions {
  std::string domain;
  int dim = 2;
  int k = 0;
  std::vector<Elem> distances;
  std::string set_path;
  std::size_t random_size = 0;
  bool random_given = false;
  std::uint64_t seed = 1;
  std::string structured;
  std::string out;
  unsigned workers = 1;
  std::uint64_t budget = 0;
};

std::uint64_t default_budget() {
  if (const char* env = std::getenv("STARCENSUS_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, fmt::format("STARCENSUS_BUDGET='{}' is not an integer", env));
    }
  }
  return kDefaultBudget;
}

void add_space_options(CLI::App& cmd, CommonOptions& opt) {
  cmd.add_option("--domain", opt.domain, "Domain descriptor: F7, F3^2, Z3^2")->required();
  cmd.add_option("--dim", opt.dim, "Dimension d")->check(CLI::PositiveNumber);
  cmd.add_option("--budget", opt.budget, "Operation budget (default: $STARCENSUS_BUDGET or 1e9)");
  cmd.add_option("--workers", opt.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd.add_option("--out", opt.out, "Output path");
}

void add_set_options(CLI::App& cmd, CommonOptions& opt) {
  auto* set = cmd.add_option("--set", opt.set_path, "Point-set file");
  auto* random = cmd.add_option("--random", opt.random_size, "Random set of N points");
  cmd.add_option("--seed", opt.seed, "Seed for --random");
  auto* structured = cmd.add_option("--structured", opt.structured, "KIND:PARAMS structured set");
  set->excludes(random)->excludes(structured);
  random->excludes(structured);
}

void add_star_options(CLI::App& cmd, CommonOptions& opt) {
  cmd.add_option("--k", opt.k, "Star arity k (repeats a single --t value)");
  cmd.add_option("--t", opt.distances, "Distance vector T, e.g. 1,1,2")->delimiter(',')->required();
}

std::uint64_t budget_of(const CommonOptions& opt) { return opt.budget ? opt.budget : default_budget(); }

PointSet build_set(const CommonOptions& opt, const DomainPtr& ctx) {
  if (!opt.set_path.empty()) {
    auto loaded = load_set(opt.set_path, ctx, opt.dim);
    if (loaded.duplicates > 0) std::cerr << fmt::format("warning: {} duplicate points dropped\n", loaded.duplicates);
    return std::move(loaded.set);
  }
  if (!opt.structured.empty()) return structured_set(ctx, opt.dim, opt.structured);
  if (opt.random_given) return sample_random_set(ctx, opt.dim, opt.random_size, opt.seed);
  throw Error(ErrorCode::InvalidArgument, "one of --set, --random or --structured is required");
}

StarSpec build_spec(const CommonOptions& opt, const DomainPtr& ctx) {
  std::vector<Elem> ts = opt.distances;
  if (opt.k > 0 && ts.size() == 1) ts.assign(opt.k, ts[0]);
  if (opt.k > 0 && ts.size() != static_cast<std::size_t>(opt.k)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("--k {} but --t has {} entries", opt.k, ts.size()));
  }
  return StarSpec(ctx, opt.dim, ts);
}

// Writes to --out when given, stdout otherwise.
void emit(const CommonOptions& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(opt.out);
  if (!file) throw Error(ErrorCode::IoError, fmt::format("cannot write {}", opt.out));
  file << text;
}

std::string join_elems(const std::vector<Elem>& v) { return fmt::format("{}", fmt::join(v, ",")); }

int cmd_count(const CommonOptions& opt, const std::string& method_name) {
  const DomainPtr ctx = parse_domain(opt.domain);
  const PointSet set = build_set(opt, ctx);
  const StarSpec spec = build_spec(opt, ctx);
  const CountReport r = count_stars(set, spec, parse_count_method(method_name), budget_of(opt));
  std::string text;
  text += fmt::format("domain={} d={} k={} T={} setsize={}\n", ctx->descriptor(), spec.dim(), spec.k(),
                      join_elems(spec.distances()), r.set_size);
  text += fmt::format("method={}\nnu={}\nM={:.17g}\n", to_string(r.method), r.count.str(),
                      r.main_term.convert_to<double>());
  text += fmt::format("relative_deviation={:.6g}\nresidual={:.3g}\nin_hypothesis={}\n", r.relative_deviation,
                      r.residual, r.in_hypothesis);
  emit(opt, text);
  return 0;
}

int cmd_decompose(const CommonOptions& opt) {
  const DomainPtr ctx = parse_domain(opt.domain);
  const PointSet set = build_set(opt, ctx);
  const StarSpec spec = build_spec(opt, ctx);
  const DecompReport r = decompose(set, spec, budget_of(opt));
  std::string text = fmt::format("nu={}\nM={:.17g}\n", r.count.str(), r.main_term.convert_to<double>());
  for (std::size_t j = 0; j < r.remainders.size(); ++j) {
    text += fmt::format("R_{}={:.17g} weight={}\n", j, r.remainders[j], r.binomials[j]);
  }
  text += fmt::format("reconstruction={:.17g}\nreconstruction_error={:.3g}\nc_meas={:.6g}\n", r.reconstruction,
                      r.reconstruction_error, r.c_meas);
  emit(opt, text);
  return 0;
}

int cmd_spheres(const CommonOptions& opt, Elem t, bool spectrum) {
  const DomainPtr ctx = parse_domain(opt.domain);
  if (spectrum) {
    const BoundReport r = verify_sphere_bound(ctx, opt.dim, t, budget_of(opt));
    std::cout << fmt::format(
        "cardinality={}\nmax_fourier={:.17g}\nbound={:.17g}\nratio={:.6g}\nargmax={}\nin_hypothesis={}\n"
        "violation={}\n",
        r.cardinality, r.max_nonzero_fourier, r.bound, r.ratio, join_elems(r.argmax_frequency), r.in_hypothesis,
        r.violation);
    if (!opt.out.empty()) save_set(enumerate_sphere(ctx, opt.dim, t, false, budget_of(opt)).points, opt.out);
    return r.violation ? kExitViolation : 0;
  }
  const SphereTable table = enumerate_sphere(ctx, opt.dim, t, false, budget_of(opt));
  std::cerr << fmt::format("|S_{}| = {}\n", t, table.cardinality);
  emit(opt, format_set(table.points));
  return 0;
}

int cmd_verify(const CommonOptions& opt, const std::vector<std::string>& domains, const std::vector<int>& dims) {
  const CampaignResult result = run_verify_spheres(domains, dims, opt.workers, budget_of(opt));
  std::ostringstream csv;
  write_verify_csv(csv, result);
  emit(opt, csv.str());
  std::cerr << fmt::format("{} rows, {} violations\n", result.rows.size(), result.violations);
  return result.violations ? kExitViolation : 0;
}

int cmd_sweep(const CommonOptions& opt, const std::string& plan_path, ExperimentPlan plan,
              const std::string& save_plan) {
  if (!plan_path.empty()) {
    std::ifstream in(plan_path);
    if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot read {}", plan_path));
    std::ostringstream text;
    text << in.rdbuf();
    plan = ExperimentPlan::from_json(text.str());
    if (!opt.out.empty()) plan.output = opt.out;
  } else {
    if (opt.domain.empty()) throw Error(ErrorCode::InvalidArgument, "--domain or --plan is required");
    plan.domain = opt.domain;
    plan.dim = opt.dim;
    plan.distances = build_spec(opt, parse_domain(opt.domain)).distances();
    plan.output = opt.out;
    plan.workers = opt.workers;
    plan.budget = budget_of(opt);
    if (!opt.set_path.empty()) {
      plan.source = SetSource::File;
      plan.set_path = opt.set_path;
    } else if (!opt.structured.empty()) {
      plan.source = SetSource::Structured;
      plan.structured = opt.structured;
    }
  }
  if (!save_plan.empty()) {
    std::ofstream out(save_plan);
    out << plan.to_json() << '\n';
  }
  const auto rows = run_sweep_to_files(plan);
  if (plan.output.empty()) write_sweep_csv(std::cout, rows);
  bool budget_failure = false;
  for (const auto& r : rows) {
    if (!r.ok) {
      std::cerr << fmt::format("row setsize={} seed={} method={} failed: {}\n", r.set_size, r.seed,
                               to_string(r.method), r.error);
      budget_failure |= r.error.find("BudgetExceeded") != std::string::npos;
    }
  }
  return budget_failure ? kExitBudget : 0;
}

int cmd_starset(const CommonOptions& opt) {
  const DomainPtr ctx = parse_domain(opt.domain);
  const PointSet set = build_set(opt, ctx);
  const StarSet s = star_set(set, opt.k, budget_of(opt));
  const double cells = std::pow(static_cast<double>(ctx->size()), opt.k);
  emit(opt, fmt::format("setsize={}\nk={}\nstar_set_size={}\nq^k={:.0f}\nproportion={:.6g}\nmax_hub_distances={}\n",
                        set.size(), opt.k, s.cardinality, cells, static_cast<double>(s.cardinality) / cells,
                        s.max_hub_distances));
  return 0;
}

int cmd_distset(const CommonOptions& opt) {
  const DomainPtr ctx = parse_domain(opt.domain);
  const PointSet set = build_set(opt, ctx);
  const auto dist = distance_set(set, budget_of(opt));
  emit(opt, fmt::format("setsize={}\ndistance_set_size={}\nfull={}\ndistances={}\n", set.size(), dist.size(),
                        dist.size() == ctx->size(), join_elems(dist)));
  return 0;
}

int cmd_pinned_avg(const CommonOptions& opt) {
  const DomainPtr ctx = parse_domain(opt.domain);
  const PointSet set = build_set(opt, ctx);
  const Rational avg = pinned_volume_average(set, opt.k, budget_of(opt));
  const double cells = std::pow(static_cast<double>(ctx->size()), opt.k);
  emit(opt, fmt::format("setsize={}\nk={}\naverage={}\naverage_value={:.17g}\nover_q^k={:.6g}\n", set.size(), opt.k,
                        avg.str(), avg.convert_to<double>(), avg.convert_to<double>() / cells));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-star configuration counting over finite fields and residue rings"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string method = "spectral";
  Elem sphere_t = 1;
  bool with_spectrum = false;
  std::vector<std::string> verify_domains;
  std::vector<int> verify_dims{2, 3};
  std::string plan_path, save_plan;
  ExperimentPlan sweep_plan;
  std::vector<std::string> sweep_methods{"spectral"};

  auto* count = app.add_subcommand("count", "Count k-stars nu_k(T)");
  add_space_options(*count, opt);
  add_set_options(*count, opt);
  add_star_options(*count, opt);
  count->add_option("--method", method, "brute | pinned | spectral")
      ->check(CLI::IsMember({"brute", "pinned", "spectral"}));

  auto* decomp = app.add_subcommand("decompose", "Main term and remainders R_j");
  add_space_options(*decomp, opt);
  add_set_options(*decomp, opt);
  add_star_options(*decomp, opt);

  auto* spheres = app.add_subcommand("spheres", "Enumerate S_t and export it as a point set");
  add_space_options(*spheres, opt);
  spheres->add_option("--t", sphere_t, "Sphere radius t")->required();
  spheres->add_flag("--spectrum", with_spectrum, "Also check the Fourier decay bound");

  auto* verify = app.add_subcommand("verify", "Sphere Fourier-bound campaign (CSV)");
  verify->add_option("--domains", verify_domains, "Domains, e.g. F3,F5,Z9")->delimiter(',')->required();
  verify->add_option("--dims", verify_dims, "Dimensions")->delimiter(',');
  verify->add_option("--out", opt.out, "CSV path");
  verify->add_option("--workers", opt.workers, "Worker threads");
  verify->add_option("--budget", opt.budget, "Operation budget");

  auto* sweep = app.add_subcommand("sweep", "Main-term sweep over set sizes and seeds (CSV)");
  sweep->add_option("--plan", plan_path, "JSON experiment plan");
  sweep->add_option("--save-plan", save_plan, "Write the effective plan as JSON");
  sweep->add_option("--domain", opt.domain, "Domain descriptor");
  sweep->add_option("--dim", opt.dim, "Dimension d");
  add_star_options(*sweep, opt);
  sweep->get_option("--t")->required(false);
  sweep->add_option("--set", opt.set_path, "Point-set file");
  sweep->add_option("--structured", opt.structured, "KIND:PARAMS structured set");
  sweep->add_option("--multipliers", sweep_plan.multipliers, "|E| = ceil(m * q^threshold)")->delimiter(',');
  sweep->add_option("--sizes", sweep_plan.sizes, "Absolute set sizes")->delimiter(',');
  sweep->add_option("--seeds", sweep_plan.seeds, "Seeds")->delimiter(',');
  sweep->add_option("--methods", sweep_methods, "Methods")->delimiter(',');
  sweep->add_option("--out", opt.out, "CSV path (also writes <out>.ratio.dat)");
  sweep->add_option("--workers", opt.workers, "Worker threads");
  sweep->add_option("--budget", opt.budget, "Operation budget");

  auto* starset = app.add_subcommand("starset", "Size of the star set S_k(E)");
  auto* distset = app.add_subcommand("distset", "Distance set Delta(E)");
  auto* pinned = app.add_subcommand("pinned-avg", "Average pinned distance-vector set size");
  for (auto* cmd : {starset, distset, pinned}) {
    add_space_options(*cmd, opt);
    add_set_options(*cmd, opt);
  }
  starset->add_option("--k", opt.k, "k")->required()->check(CLI::PositiveNumber);
  pinned->add_option("--k", opt.k, "k")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  for (auto* cmd : {count, decomp, starset, distset, pinned}) {
    if (cmd->parsed()) opt.random_given = cmd->count("--random") > 0;
  }

  try {
    if (count->parsed()) return cmd_count(opt, method);
    if (decomp->parsed()) return cmd_decompose(opt);
    if (spheres->parsed()) return cmd_spheres(opt, sphere_t, with_spectrum);
    if (verify->parsed()) return cmd_verify(opt, verify_domains, verify_dims);
    if (sweep->parsed()) {
      sweep_plan.methods.clear();
      for (const auto& m : sweep_methods) sweep_plan.methods.push_back(parse_count_method(m));
      if (plan_path.empty() && opt.distances.empty()) {
        throw Error(ErrorCode::InvalidArgument, "--t is required without --plan");
      }
      return cmd_sweep(opt, plan_path, sweep_plan, save_plan);
    }
    if (starset->parsed()) return cmd_starset(opt);
    if (distset->parsed()) return cmd_distset(opt);
    if (pinned->parsed()) return cmd_pinned_avg(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::BudgetExceeded ? kExitBudget : kExitUsage;
  }
  return 0;
}
