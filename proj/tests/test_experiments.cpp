#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ucfem/experiments.hpp"

using namespace ucfem;

namespace {

Config parse(const std::string& s) {
  std::istringstream is(s);
  return Config::parse(is);
}

const OutputFile* find_file(const ExperimentOutput& out, const std::string& name) {
  for (const auto& f : out.files)
    if (f.name == name) return &f;
  return nullptr;
}

}  // namespace

TEST(Experiments, SingleValueSweepHasOneRow) {
  const Config c = parse(
      "[problem]\ndegrees = 1\nk = 2\n[mesh]\nspacing = 0.25\n"
      "[sweep]\nparameter = alpha\nvalues = 1e-3\nlevel = 0\ncondition = false\n");
  const ExperimentOutput out = run_sweep(c);
  ASSERT_EQ(out.series.at("alpha_p1.B_rel").size(), 1u);
  const OutputFile* f = find_file(out, "sweep_alpha_p1.csv");
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(std::count(f->content.begin(), f->content.end(), '\n'), 2);
}

TEST(Experiments, SingleLevelConditionHasNoSlope) {
  const Config c = parse("[problem]\ndegrees = 1\n[mesh]\nspacing = 0.25\nmin_level = 0\nmax_level = 0\n");
  const ExperimentOutput out = run_condition(c);
  EXPECT_EQ(out.tables.at("p1").rows().size(), 1u);
  EXPECT_EQ(out.scalars.count("p1.slope"), 0u);
}

TEST(Experiments, RepeatRunsAreByteIdentical) {
  const std::string cfg =
      "[problem]\ndegrees = 1\n[mesh]\nspacing = 0.25\nmax_level = 1\n[noise]\nthetas = 1\nseed = 17\n";
  const ExperimentOutput a = run_convergence(parse(cfg));
  const ExperimentOutput b = run_convergence(parse(cfg), {2});
  ASSERT_EQ(a.files.size(), b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    EXPECT_EQ(a.files[i].name, b.files[i].name);
    EXPECT_EQ(a.files[i].content, b.files[i].content);
  }
}

TEST(Experiments, SeedChangesPerturbedOutput) {
  const std::string base = "[problem]\ndegrees = 1\n[mesh]\nspacing = 0.25\nmax_level = 0\n[noise]\nthetas = 1\nseed = ";
  const auto a = run_convergence(parse(base + "1\n"));
  const auto b = run_convergence(parse(base + "2\n"));
  EXPECT_NE(find_file(a, "convergence_p1_theta1.csv")->content, find_file(b, "convergence_p1_theta1.csv")->content);
}

TEST(Experiments, UnknownNamesAndBadValuesThrow) {
  EXPECT_THROW(run_experiment("nope", Config{}), ConfigError);
  EXPECT_THROW(run_sweep(parse("[sweep]\nparameter = beta\nvalues = 1\n")), ConfigError);
  EXPECT_THROW(run_sweep(parse("[sweep]\nparameter = alpha\n")), ConfigError);
}

TEST(Experiments, WriteOutputCreatesFiles) {
  ExperimentOutput out;
  out.files = {{"a.csv", "x\n1\n"}, {"b.gp", "plot\n"}};
  const auto dir = std::filesystem::temp_directory_path() / "ucfem_write_test";
  std::filesystem::remove_all(dir);
  write_output(out, dir / "nested");
  std::ifstream is(dir / "nested" / "a.csv");
  std::stringstream ss;
  ss << is.rdbuf();
  EXPECT_EQ(ss.str(), "x\n1\n");
  std::filesystem::remove_all(dir);
}
