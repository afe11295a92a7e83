#include <gtest/gtest.h>

#include "arr/fixtures.hpp"
#include "arr/reasoner.hpp"
#include "checks.hpp"
#include "golden_io.hpp"

using namespace arr;

class Fixtures : public ::testing::TestWithParam<FixtureName> {};

TEST_P(Fixtures, SolveUniqueToTruth) {
  const auto r = checks::check_fixture(GetParam());
  EXPECT_TRUE(r.unique_truth) << r.outcome;
  EXPECT_TRUE(r.required_rules);
}

TEST_P(Fixtures, AgreesWithOracle) {
  const Problem p = fixture(GetParam());
  EXPECT_EQ(oracle::solutions(p), std::vector<std::size_t>{p.truth});
  const auto lib = induce_rules(p.grid);
  EXPECT_EQ(std::set<Rule>(lib.rules.begin(), lib.rules.end()), oracle::survivors(p.grid, {}));
}

TEST_P(Fixtures, RuleSnapshot) {
  const auto t = solve_traced(fixture(GetParam()));
  std::string text;
  for (const auto& r : t.rules.rules) text += r.describe() + "\n";
  expect_golden("fixture_" + std::string(fixture_name(GetParam())) + ".rules", text);
}

TEST_P(Fixtures, TruthKeepsEveryPlantedRule) {
  const Problem p = fixture(GetParam());
  EXPECT_FALSE(oracle::violates_any(p.grid, {}, p.provenance.planted, p.truth_cell()));
}

INSTANTIATE_TEST_SUITE_P(All, Fixtures, ::testing::ValuesIn(kFixtures),
                         [](const auto& info) { return std::string(fixture_name(info.param)); });

TEST(FixtureNames, RoundTrip) {
  for (auto f : kFixtures) EXPECT_EQ(fixture_from_name(fixture_name(f)), f);
  EXPECT_FALSE(fixture_from_name("nope"));
}

TEST(FixtureTruths, Positions) {
  EXPECT_EQ(fixture(FixtureName::LatinSquare).truth, 5u);
  EXPECT_EQ(fixture(FixtureName::Union).truth, 3u);
  EXPECT_EQ(fixture(FixtureName::SymDiff).truth, 1u);
  EXPECT_EQ(fixture(FixtureName::MultiRule).truth, 6u);
}
