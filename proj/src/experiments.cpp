#include "starcensus/experiments.hpp"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "starcensus/error.hpp"
#include "starcensus/generators.hpp"
#include "starcensus/setio.hpp"

namespace starcensus {

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

using nlohmann::json;

std::string_view source_name(SetSource s) {
  switch (s) {
    case SetSource::File: return "file";
    case SetSource::Random: return "random";
    case SetSource::Structured: return "structured";
  }
  return "random";
}

SetSource parse_source(std::string_view s) {
  if (s == "file") return SetSource::File;
  if (s == "random") return SetSource::Random;
  if (s == "structured") return SetSource::Structured;
  throw Error(ErrorCode::ParseError, fmt::format("unknown set source '{}'", s));
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

struct Task {
  std::size_t size = 0;
  std::uint64_t seed = 0;
};

}  // namespace

std::string ExperimentPlan::to_json() const {
  json j;
  j["domain"] = domain;
  j["dim"] = dim;
  j["distances"] = distances;
  j["source"] = source_name(source);
  j["set_path"] = set_path;
  j["structured"] = structured;
  j["seeds"] = seeds;
  j["multipliers"] = multipliers;
  j["sizes"] = sizes;
  std::vector<std::string> names;
  for (auto m : methods) names.emplace_back(to_string(m));
  j["methods"] = names;
  j["output"] = output;
  j["workers"] = workers;
  j["budget"] = budget;
  return j.dump(2);
}

ExperimentPlan ExperimentPlan::from_json(std::string_view text) {
  ExperimentPlan plan;
  try {
    const json j = json::parse(text);
    plan.domain = j.at("domain").get<std::string>();
    plan.dim = j.at("dim").get<int>();
    plan.distances = j.at("distances").get<std::vector<Elem>>();
    plan.source = parse_source(j.value("source", std::string("random")));
    plan.set_path = j.value("set_path", std::string());
    plan.structured = j.value("structured", std::string());
    plan.seeds = j.value("seeds", std::vector<std::uint64_t>{1});
    plan.multipliers = j.value("multipliers", std::vector<double>{});
    plan.sizes = j.value("sizes", std::vector<std::size_t>{});
    plan.methods.clear();
    for (const auto& name : j.value("methods", std::vector<std::string>{"spectral"})) {
      plan.methods.push_back(parse_count_method(name));
    }
    plan.output = j.value("output", std::string());
    plan.workers = j.value("workers", 1u);
    plan.budget = j.value("budget", kDefaultBudget);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, fmt::format("bad plan: {}", e.what()));
  }
  return plan;
}

std::vector<SweepRow> run_sweep(const ExperimentPlan& plan) {
  const DomainPtr ctx = parse_domain(plan.domain);
  const StarSpec spec(ctx, plan.dim, plan.distances);
  if (plan.methods.empty()) throw Error(ErrorCode::InvalidArgument, "plan lists no methods");

  std::vector<Task> tasks;
  if (plan.source == SetSource::Random) {
    std::vector<std::size_t> sizes = plan.sizes;
    if (!plan.multipliers.empty()) {
      sizes.clear();
      const double base = std::pow(static_cast<double>(ctx->size()), threshold_exponent(*ctx, plan.dim));
      // Rounded before the ceiling so that 8 * 19^2 stays 2888.
      for (double mult : plan.multipliers) {
        sizes.push_back(static_cast<std::size_t>(std::ceil(std::round(mult * base * 1e6) / 1e6)));
      }
    }
    if (sizes.empty()) throw Error(ErrorCode::InvalidArgument, "plan lists no set sizes");
    for (std::size_t size : sizes) {
      for (std::uint64_t seed : plan.seeds) tasks.push_back({size, seed});
    }
  } else {
    tasks.push_back({0, 0});
  }

  std::string distances;
  for (std::size_t i = 0; i < plan.distances.size(); ++i) {
    distances += (i ? ";" : "") + std::to_string(plan.distances[i]);
  }

  const std::size_t per_task = plan.methods.size();
  std::vector<SweepRow> rows(tasks.size() * per_task);
  parallel_for(tasks.size(), plan.workers, [&](std::size_t ti) {
    const Task& task = tasks[ti];
    std::optional<PointSet> set;
    std::string set_error;
    try {
      switch (plan.source) {
        case SetSource::Random: set = sample_random_set(ctx, plan.dim, task.size, task.seed); break;
        case SetSource::File: set = load_set(plan.set_path, ctx, plan.dim).set; break;
        case SetSource::Structured: set = structured_set(ctx, plan.dim, plan.structured); break;
      }
    } catch (const Error& e) {
      set_error = e.what();
    }
    for (std::size_t mi = 0; mi < per_task; ++mi) {
      SweepRow& row = rows[ti * per_task + mi];
      row.q = ctx->size();
      row.d = plan.dim;
      row.k = spec.k();
      row.ell = ctx->ring_exponent();
      row.distances = distances;
      row.set_size = set ? set->size() : task.size;
      row.seed = task.seed;
      row.method = plan.methods[mi];
      if (!set) {
        row.ok = false;
        row.error = set_error;
        continue;
      }
      try {
        const auto start = std::chrono::steady_clock::now();
        const CountReport report = count_stars(*set, spec, row.method, plan.budget);
        const auto stop = std::chrono::steady_clock::now();
        row.ms = std::chrono::duration<double, std::milli>(stop - start).count();
        row.nu = report.count;
        row.main_term = report.main_term.convert_to<double>();
        row.ratio = report.main_term == 0 ? 0.0 : (Rational(report.count) / report.main_term).convert_to<double>();
        row.residual = report.residual;
        const double scale = remainder_scale(*ctx, plan.dim, spec.k(), set->size());
        row.c_meas = scale > 0 ? abs(Rational(report.count) - report.main_term).convert_to<double>() / scale : 0.0;
      } catch (const Error& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool with_timing) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},", r.q, r.d, r.k, r.ell, r.distances, r.set_size, r.seed,
                       to_string(r.method));
    if (r.ok) {
      out << fmt::format("{},{},{},{},{},{}\n", r.nu.str(), format_double(r.main_term), format_double(r.ratio),
                         format_double(r.c_meas), format_double(r.residual),
                         with_timing ? fmt::format("{:.3f}", r.ms) : std::string());
    } else {
      out << "FAILED,,,,,\n";
    }
  }
}

void write_ratio_file(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "# setsize ratio\n";
  std::vector<std::pair<std::size_t, std::uint64_t>> done;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    const auto key = std::make_pair(r.set_size, r.seed);
    if (std::find(done.begin(), done.end(), key) != done.end()) continue;
    done.push_back(key);
    out << r.set_size << ' ' << format_double(r.ratio) << '\n';
  }
}

std::vector<SweepRow> run_sweep_to_files(const ExperimentPlan& plan) {
  auto rows = run_sweep(plan);
  if (!plan.output.empty()) {
    std::ofstream csv(plan.output);
    std::ofstream dat(plan.output + ".ratio.dat");
    if (!csv || !dat) throw Error(ErrorCode::IoError, fmt::format("cannot write {}", plan.output));
    write_sweep_csv(csv, rows);
    write_ratio_file(dat, rows);
  }
  return rows;
}

CampaignResult run_verify_spheres(const std::vector<std::string>& domains, const std::vector<int>& dims,
                                  unsigned workers, std::uint64_t budget) {
  struct Job {
    DomainPtr ctx;
    int dim;
    Elem t;
  };
  std::vector<Job> jobs;
  for (const auto& name : domains) {
    const DomainPtr ctx = parse_domain(name);
    for (int d : dims) {
      for (Elem t = 1; t < ctx->size(); ++t) jobs.push_back({ctx, d, t});
    }
  }
  CampaignResult result;
  result.rows.resize(jobs.size());
  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    result.rows[i] = verify_sphere_bound(jobs[i].ctx, jobs[i].dim, jobs[i].t, budget);
  });
  for (const auto& row : result.rows) result.violations += row.violation;
  return result;
}

void write_verify_csv(std::ostream& out, const CampaignResult& result) {
  out << kVerifyHeader << '\n';
  for (const auto& r : result.rows) {
    const double qd1 = std::pow(static_cast<double>(r.q), r.dim - 1);
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.domain, r.q, r.dim, r.t, r.in_hypothesis ? 1 : 0,
                       r.cardinality, format_double(static_cast<double>(r.cardinality) / qd1),
                       format_double(r.max_nonzero_fourier), format_double(r.bound), format_double(r.ratio),
                       fmt::format("{}", fmt::join(r.argmax_frequency, ";")), r.violation ? 1 : 0);
  }
}

}  // namespace starcensus
