#include <sstream>

#include <gtest/gtest.h>

#include "ucfem/config.hpp"

using namespace ucfem;

namespace {

Config parse(const std::string& s) {
  std::istringstream is(s);
  return Config::parse(is);
}

}  // namespace

TEST(Config, SectionsCommentsAndLists) {
  const Config c = parse(
      "# top comment\n"
      "seed = 4\n"
      "[problem]\n"
      "degrees = 1, 2,3   # trailing comment\n"
      "k = 6.5\n"
      "kind = well_posed\n"
      "[noise]\n"
      "thetas = 0,1\n"
      "enabled = true\n");
  EXPECT_EQ(c.integer("seed", 0), 4);
  EXPECT_EQ(c.integers("problem.degrees", {}), (std::vector<int>{1, 2, 3}));
  EXPECT_DOUBLE_EQ(c.number("problem.k", 0), 6.5);
  EXPECT_EQ(c.text("problem.kind", ""), "well_posed");
  EXPECT_EQ(c.numbers("noise.thetas", {}), (std::vector<double>{0, 1}));
  EXPECT_TRUE(c.flag("noise.enabled", false));
  EXPECT_EQ(c.words("missing", {"a"}), (std::vector<std::string>{"a"}));
}

TEST(Config, FallbacksAndUnusedKeys) {
  const Config c = parse("[mesh]\nspacing = 0.2\ntypo = 1\n");
  EXPECT_DOUBLE_EQ(c.number("mesh.spacing", 0.1), 0.2);
  EXPECT_DOUBLE_EQ(c.number("mesh.other", 0.1), 0.1);
  EXPECT_EQ(c.unused(), (std::vector<std::string>{"mesh.typo"}));
}

TEST(Config, BadValuesThrow) {
  const Config c = parse("a = x\nb = 1.5\nc = maybe\n");
  EXPECT_THROW(c.number("a", 0), ConfigError);
  EXPECT_THROW(c.integer("b", 0), ConfigError);
  EXPECT_THROW(c.flag("c", false), ConfigError);
  EXPECT_THROW(parse("[open\n"), ConfigError);
  EXPECT_THROW(parse("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse(" = 3\n"), ConfigError);
  EXPECT_THROW(Config::load("/nonexistent/file.cfg"), ConfigError);
}

TEST(Config, SetOverrides) {
  Config c = parse("[noise]\nseed = 1\n");
  c.set("noise.seed", "9");
  EXPECT_EQ(c.integer("noise.seed", 0), 9);
  EXPECT_TRUE(c.has("noise.seed"));
}
