#include <gtest/gtest.h>

#include "arr/reasoner.hpp"
#include "checks.hpp"

using namespace arr;

namespace {

ObjectSpec obj(std::uint8_t layer, std::uint8_t slot, std::uint8_t shape, std::uint8_t color = 0,
               std::uint8_t rotation = 0) {
  ObjectSpec o;
  o.layer = layer;
  o.slot = slot;
  o.values = {shape, color, 0, rotation, 1};
  return o;
}

// Every cell holds one object whose rotation steps by 2 along each row.
Grid rotation_grid() {
  Grid g;
  for (std::size_t i = 0; i < kGivenCells; ++i)
    g[i] = Cell({obj(0, 0, 1, 0, static_cast<std::uint8_t>(2 * (i % 3 + 1) % 8))});
  return g;
}

}  // namespace

TEST(Reasoner, MatchesOracleOnMixedGrids) {
  const auto r = checks::oracle_equivalence(300, 11);
  EXPECT_EQ(r.agree, r.grids);
  EXPECT_GT(r.rules_compared, 1000u);
}

TEST(Reasoner, InducesProgression) {
  const auto rules = induce_rules(rotation_grid());
  const Rule want{Category::all(), Trait::Rotation, Operator::progression(2), Scope::Row};
  EXPECT_NE(std::find(rules.rules.begin(), rules.rules.end(), want), rules.rules.end());
  const Rule wrong{Category::all(), Trait::Rotation, Operator::progression(3), Scope::Row};
  EXPECT_EQ(std::find(rules.rules.begin(), rules.rules.end(), wrong), rules.rules.end());
  // Columns are constant in position, so a progression cannot hold down them.
  for (const auto& r : rules.rules)
    if (r.scope == Scope::Column && r.trait == Trait::Rotation) {
      EXPECT_NE(r.op.kind, OpKind::Progression);
    }
}

TEST(Reasoner, RulesNeedMembersInLeadingCells) {
  Grid g = rotation_grid();
  // A layer-1 object only in cells 1 and 2: the layer1 category fails row 1
  // applicability, so nothing is induced for it.
  g[1] = Cell({obj(0, 0, 1, 0, 4), obj(1, 2, 3)});
  g[2] = Cell({obj(0, 0, 1, 0, 6), obj(1, 2, 3)});
  const auto rules = induce_rules(g);
  for (const auto& r : rules.rules) EXPECT_NE(r.category, Category::layer(1)) << r.describe();
  EXPECT_EQ(rules.rules.size(), oracle::survivors(g, {}).size());
}

TEST(Reasoner, InapplicableRulesAreNotCounted) {
  Grid g;
  // Layer 1 appears in rows 1 and 2 only; row 3 has no layer-1 member.
  for (std::size_t i = 0; i < kGivenCells; ++i) {
    std::vector<ObjectSpec> objs{obj(0, 0, 1)};
    if (i < 6) objs.push_back(obj(1, 1, 2));
    g[i] = Cell(objs);
  }
  const auto rules = induce_rules(g);
  const Rule layer_rule{Category::layer(1), Trait::Shape, {OpKind::Union, 0}, Scope::Row};
  ASSERT_NE(std::find(rules.rules.begin(), rules.rules.end(), layer_rule), rules.rules.end());
  detail::LineEvaluator eval(g, rules.config);
  EXPECT_FALSE(eval.holds(layer_rule, Cell({obj(0, 0, 1), obj(1, 1, 5)})).has_value());
  const auto rep = check_answer(g, rules, Cell({obj(0, 0, 1)}), 0);
  const auto at = static_cast<std::size_t>(std::find(rules.rules.begin(), rules.rules.end(), layer_rule) - rules.rules.begin());
  EXPECT_EQ(std::count(rep.violated_rules.begin(), rep.violated_rules.end(), at), 0);
  EXPECT_LT(rep.satisfied + rep.violated, rules.rules.size());
}

TEST(Reasoner, HiddenTraits) {
  SolverConfig c;
  c.hidden[trait_index(Trait::Shape)] = true;
  EXPECT_TRUE(c.is_hidden(Trait::Shape));
  EXPECT_TRUE(c.is_hidden(Trait::Presence));
  EXPECT_FALSE(c.is_hidden(Trait::Count));
  EXPECT_FALSE(c.is_hidden(Trait::Color));
  c.hidden[trait_index(Trait::Shape)] = false;
  c.hidden[trait_index(Trait::Presence)] = true;
  EXPECT_FALSE(c.is_hidden(Trait::Shape));
  EXPECT_TRUE(c.is_hidden(Trait::Presence));
  c.hidden[trait_index(Trait::Shape)] = true;
  const auto rules = induce_rules(rotation_grid(), c);
  for (const auto& r : rules.rules) {
    EXPECT_NE(r.trait, Trait::Shape);
    EXPECT_NE(r.trait, Trait::Presence);
  }
  for (Trait t : kObjectTraits) c.hidden[trait_index(t)] = true;
  for (const auto& r : induce_rules(rotation_grid(), c).rules) EXPECT_EQ(r.trait, Trait::Count);
  c.hidden.fill(true);
  EXPECT_TRUE(induce_rules(rotation_grid(), c).rules.empty());
}

TEST(Reasoner, RowsOnly) {
  SolverConfig c;
  c.column_scope = false;
  for (const auto& r : induce_rules(rotation_grid(), c).rules) EXPECT_EQ(r.scope, Scope::Row);
}

TEST(Reasoner, VerdictsAndClassification) {
  auto rep = [](std::size_t i, bool ok, std::size_t sat) {
    SatisfactionReport r;
    r.candidate_index = i;
    r.fully_satisfying = ok;
    r.satisfied = sat;
    r.violated = ok ? 0 : 1;
    return r;
  };
  auto v = make_verdict({rep(0, false, 3), rep(1, true, 4), rep(2, false, 1)}, Mode::Strict);
  EXPECT_EQ(v.outcome, Outcome::Unique);
  EXPECT_EQ(v.answers, std::vector<std::size_t>{1});
  EXPECT_EQ(classify(v, 1), ErrorClass::Accurate);
  EXPECT_EQ(classify(v, 0), ErrorClass::Both);

  v = make_verdict({rep(0, true, 3), rep(1, true, 4), rep(2, false, 1)}, Mode::Strict);
  EXPECT_EQ(v.outcome, Outcome::Ambiguous);
  EXPECT_EQ(classify(v, 0), ErrorClass::FalsePositive);
  EXPECT_EQ(classify(v, 2), ErrorClass::Both);

  v = make_verdict({rep(0, false, 3), rep(1, false, 4)}, Mode::Strict);
  EXPECT_EQ(v.outcome, Outcome::Unsat);
  EXPECT_TRUE(v.answers.empty());
  EXPECT_EQ(classify(v, 0), ErrorClass::FalseNegative);
  EXPECT_THROW(classify(v, 2), std::out_of_range);

  v = make_verdict({rep(0, false, 3), rep(1, false, 4), rep(2, false, 3)}, Mode::Ranked);
  EXPECT_EQ(v.outcome, Outcome::Ambiguous);
  EXPECT_EQ(v.answers, (std::vector<std::size_t>{1, 0, 2}));
}

TEST(Reasoner, SolveAgreesWithOracleOnGeneratedProblems) {
  GeneratorSpec spec;
  spec.seed = 5;
  for (std::uint64_t i = 0; i < 60; ++i) {
    const auto p = sample_problem(spec, i);
    const auto v = solve(p);
    EXPECT_EQ(v.answers, oracle::solutions(p)) << "index " << i;
  }
}
