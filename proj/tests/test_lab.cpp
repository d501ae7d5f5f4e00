#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "starcensus/error.hpp"
#include "starcensus/experiments.hpp"
#include "starcensus/generators.hpp"
#include "starcensus/rng.hpp"
#include "starcensus/setio.hpp"

using namespace starcensus;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::IoError;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("starcensus_" + std::to_string(::getpid()) + "_" + name);
}

std::string csv_without_timing(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_sweep_csv(out, rows, false);
  return out.str();
}

}  // namespace

TEST(SplitMix64, ReferenceOutputs) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
  SplitMix64 bounded(42);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(bounded.below(7), 7u);
}

TEST(RandomSet, FullAndEmpty) {
  const auto ctx = parse_domain("F5");
  const PointSet all = sample_random_set(ctx, 2, 25, 99);
  EXPECT_EQ(all.size(), 25u);
  EXPECT_EQ(all, sample_random_set(ctx, 2, 25, 3));
  EXPECT_TRUE(sample_random_set(ctx, 2, 0, 1).empty());
  EXPECT_EQ(code_of([&] { sample_random_set(ctx, 2, 26, 1); }), ErrorCode::SizeExceedsSpace);
}

TEST(RandomSet, DeterministicAndNested) {
  const auto ctx = parse_domain("F29");
  const PointSet a = sample_random_set(ctx, 3, 500, 7);
  EXPECT_EQ(a, sample_random_set(ctx, 3, 500, 7));
  EXPECT_NE(a, sample_random_set(ctx, 3, 500, 8));
  const PointSet big = sample_random_set(ctx, 3, 1000, 7);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(big.contains(a.coords(i)));
}

TEST(RandomSet, RoughlyUniform) {
  const auto ctx = parse_domain("F3");
  std::vector<int> hits(9, 0);
  for (std::uint64_t seed = 0; seed < 9000; ++seed) {
    const PointSet s = sample_random_set(ctx, 2, 1, seed);
    ++hits[s.indices()[0]];
  }
  for (int h : hits) EXPECT_NEAR(h, 1000, 150);
}

TEST(Structured, Examples) {
  const auto f5 = parse_domain("F5");
  EXPECT_EQ(structured_set(f5, 3, "subspace:1,0,0").size(), 5u);
  EXPECT_EQ(structured_set(f5, 3, "subspace:1,0,0;0,1,0").size(), 25u);
  EXPECT_EQ(structured_set(f5, 3, "subspace:1,2,0;2,4,0").size(), 5u);
  EXPECT_EQ(structured_set(f5, 3, "coordinate-slab:2,5,5").size(), 50u);
  const auto f3 = parse_domain("F3");
  EXPECT_EQ(structured_set(f3, 2, "sphere-subset:1,1.0,4"), enumerate_sphere(f3, 2, 1).points);
  EXPECT_EQ(structured_set(f3, 2, "sphere-subset:1,0.5,4").size(), 2u);
}

TEST(Structured, Errors) {
  const auto f5 = parse_domain("F5");
  for (const char* bad : {"subspace", "cube:1", "subspace:1,0", "coordinate-slab:2,6,1", "sphere-subset:1,2.0,1",
                          "sphere-subset:1,0.5", "coordinate-slab:a,1,1"}) {
    EXPECT_EQ(code_of([&] { structured_set(f5, 3, bad); }), ErrorCode::InvalidParams) << bad;
  }
}

TEST(SetIo, RoundTrip) {
  const auto f3 = parse_domain("F3^2");
  const PointSet set = sample_random_set(f3, 3, 40, 2);
  const auto path = temp_path("roundtrip.txt");
  save_set(set, path);
  const LoadedSet loaded = load_set(path);
  EXPECT_EQ(loaded.set, set);
  EXPECT_EQ(loaded.duplicates, 0u);
  std::filesystem::remove(path);

  const PointSet s1 = enumerate_sphere(parse_domain("F3"), 2, 1).points;
  EXPECT_EQ(parse_set(format_set(s1)).set, s1);
}

TEST(SetIo, CommentsAndDuplicates) {
  const LoadedSet loaded = parse_set("# header follows\n\ndomain=F7 d=2\n1,2 # first\n3,4\n1,2\n\n");
  EXPECT_EQ(loaded.set.size(), 2u);
  EXPECT_EQ(loaded.duplicates, 1u);
  EXPECT_TRUE(loaded.set.contains(std::vector<Elem>{3, 4}));
}

TEST(SetIo, Errors) {
  try {
    parse_set("domain=F7 d=2\n1,2\n1,7\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_EQ(code_of([] { parse_set("domain=F7 d=2\n1,2,3\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_set("domain=F7\n1,2\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_set("1,2\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_set("domain=F7 d=2\n1,x\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_set("domain=F7 d=2\n1,2\n", parse_domain("F5")); }), ErrorCode::DomainMismatch);
  EXPECT_EQ(code_of([] { parse_set("domain=F7 d=2\n1,2\n", nullptr, 3); }), ErrorCode::DomainMismatch);
  EXPECT_EQ(code_of([] { load_set("/nonexistent/starcensus.txt"); }), ErrorCode::IoError);
}

TEST(Plan, JsonRoundTrip) {
  ExperimentPlan plan;
  plan.domain = "Z5^2";
  plan.dim = 3;
  plan.distances = {1, 2};
  plan.seeds = {1, 2, 3};
  plan.multipliers = {2.0, 4.0};
  plan.methods = {CountMethod::Pinned, CountMethod::Spectral};
  plan.output = "out.csv";
  plan.workers = 3;
  plan.budget = 12345;
  const ExperimentPlan back = ExperimentPlan::from_json(plan.to_json());
  EXPECT_EQ(back.to_json(), plan.to_json());
  EXPECT_EQ(back.distances, plan.distances);
  EXPECT_EQ(back.methods, plan.methods);
  EXPECT_EQ(code_of([] { ExperimentPlan::from_json("{\"dim\": 2}"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { ExperimentPlan::from_json("not json"); }), ErrorCode::ParseError);
}

TEST(Sweep, DeterministicCsv) {
  ExperimentPlan plan;
  plan.domain = "F7";
  plan.dim = 3;
  plan.distances = {1, 1};
  plan.seeds = {1, 2};
  plan.sizes = {30, 60};
  plan.methods = {CountMethod::Brute, CountMethod::Spectral};
  const auto rows = run_sweep(plan);
  ASSERT_EQ(rows.size(), 8u);
  plan.workers = 2;
  EXPECT_EQ(csv_without_timing(run_sweep(plan)), csv_without_timing(rows));
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    EXPECT_TRUE(rows[i].ok && rows[i + 1].ok);
    EXPECT_EQ(rows[i].nu, rows[i + 1].nu);
  }
  const std::string csv = csv_without_timing(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kSweepHeader);
  EXPECT_NE(csv.find("\n7,3,2,1,1;1,30,1,brute,"), std::string::npos);
}

TEST(Sweep, FullSpaceRatioIsOne) {
  ExperimentPlan plan;
  plan.domain = "F5";
  plan.dim = 2;
  plan.distances = {2, 3};
  plan.sizes = {25};
  const auto rows = run_sweep(plan);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].ratio, 1.0);
  EXPECT_EQ(rows[0].c_meas, 0.0);
}

TEST(Sweep, MultipliersUseThreshold) {
  ExperimentPlan plan;
  plan.domain = "F19";
  plan.dim = 3;
  plan.multipliers = {8.0};
  plan.methods = {CountMethod::Pinned};
  const auto rows = run_sweep(plan);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].set_size, 2888u);
}

TEST(Sweep, FailedRowsAreKept) {
  ExperimentPlan plan;
  plan.domain = "F17";
  plan.dim = 3;
  plan.distances = {1, 1};
  plan.sizes = {100, 4000};
  plan.methods = {CountMethod::Brute, CountMethod::Pinned};
  plan.budget = 20'000'000;
  const auto rows = run_sweep(plan);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_TRUE(rows[0].ok);
  EXPECT_TRUE(rows[1].ok);
  EXPECT_FALSE(rows[2].ok);  // brute, 4000^3 ops
  EXPECT_TRUE(rows[3].ok);
  EXPECT_NE(rows[2].error.find("BudgetExceeded"), std::string::npos) << rows[2].error;
  // 4913 points only: the set itself cannot be drawn.
  plan.sizes = {6000};
  const auto failed = run_sweep(plan);
  ASSERT_EQ(failed.size(), 2u);
  EXPECT_FALSE(failed[0].ok);
  EXPECT_NE(csv_without_timing(failed).find(",FAILED,,,,,"), std::string::npos);
}

TEST(Sweep, WritesFiles) {
  ExperimentPlan plan;
  plan.domain = "F5";
  plan.dim = 2;
  plan.sizes = {5, 10};
  plan.methods = {CountMethod::Pinned, CountMethod::Spectral};
  plan.output = temp_path("sweep.csv").string();
  run_sweep_to_files(plan);
  std::ifstream csv(plan.output), dat(plan.output + ".ratio.dat");
  std::string line;
  int csv_lines = 0, dat_lines = 0;
  while (std::getline(csv, line)) ++csv_lines;
  while (std::getline(dat, line)) ++dat_lines;
  EXPECT_EQ(csv_lines, 5);
  EXPECT_EQ(dat_lines, 3);
  std::filesystem::remove(plan.output);
  std::filesystem::remove(plan.output + ".ratio.dat");
}

TEST(Verify, SmallCampaign) {
  const CampaignResult r = run_verify_spheres({"F3", "F5", "Z9"}, {2, 3});
  EXPECT_EQ(r.rows.size(), 2u * (2 + 4 + 8));
  EXPECT_EQ(r.violations, 0u);
  std::size_t out_of_hypothesis = 0;
  for (const auto& row : r.rows) out_of_hypothesis += !row.in_hypothesis;
  EXPECT_EQ(out_of_hypothesis, 2u * 2);  // t = 3, 6 in Z_9
  std::ostringstream out;
  write_verify_csv(out, r);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), kVerifyHeader);
}
