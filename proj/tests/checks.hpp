#pragma once

// Checks shared by the unit tests and the acceptance binary.

#include <set>
#include <string>
#include <vector>

#include "arr/fixtures.hpp"
#include "arr/generator.hpp"
#include "arr/operators.hpp"
#include "arr/reasoner.hpp"
#include "arr/rng.hpp"
#include "oracle.hpp"

namespace checks {

using namespace arr;

inline ValueSet make_set(Trait t, unsigned mask, int n) {
  ValueSet s(t);
  for (int i = 0; i < n; ++i)
    if (mask & (1U << i)) s.insert(static_cast<std::uint16_t>(i));
  return s;
}

/// Exhaustive operator-algebra check over every pair of subsets of V for
/// |V| = 1..6: totality (result within the universe), commutativity, SymDiff
/// involution, Not-X = complement of X, and agreement with the oracle.
inline std::size_t algebra_violations(std::size_t* cases = nullptr) {
  std::size_t bad = 0, total = 0;
  const Trait t = Trait::Shape;
  for (int n = 1; n <= 6; ++n) {
    const unsigned full = (1U << n) - 1;
    const ValueSet u = make_set(t, full, n);
    for (unsigned a = 0; a <= full; ++a)
      for (unsigned b = 0; b <= full; ++b) {
        const ValueSet sa = make_set(t, a, n), sb = make_set(t, b, n);
        oracle::VSet oa, ob, ou;
        for (int i = 0; i < n; ++i) {
          if (a & (1U << i)) oa.insert(i);
          if (b & (1U << i)) ob.insert(i);
          ou.insert(i);
        }
        for (OpKind k : kSetOps) {
          ++total;
          const Operator op{k, 0};
          ValueSet ab, ba;
          try {
            ab = apply_operator(op, sa, sb, u);
            ba = apply_operator(op, sb, sa, u);
          } catch (...) {
            ++bad;
            continue;
          }
          std::set<int> got;
          for (auto c : ab.codes()) got.insert(c);
          if (!ab.subset_of(u)) ++bad;
          if (!(ab.members == ba.members)) ++bad;
          if (got != oracle::apply(k, oa, ob, ou)) ++bad;
        }
        ++total;
        const auto sym = apply_operator({OpKind::SymDiff, 0}, sa, sb, u);
        if (!(apply_operator({OpKind::SymDiff, 0}, sym, sb, u).members == sa.members)) ++bad;
        const std::pair<OpKind, OpKind> nots[] = {{OpKind::Union, OpKind::NotUnion},
                                                  {OpKind::Intersection, OpKind::NotIntersection},
                                                  {OpKind::SymDiff, OpKind::NotSymDiff}};
        for (auto [x, notx] : nots) {
          ++total;
          const auto plain = apply_operator({x, 0}, sa, sb, u);
          const auto neg = apply_operator({notx, 0}, sa, sb, u);
          if (!(neg.members == (u.members - plain.members))) ++bad;
        }
      }
  }
  if (cases) *cases = total;
  return bad;
}

/// Random cells over a small per-grid vocabulary so that coincidental rules
/// survive often enough to matter.
inline Grid random_grid(Rng& rng) {
  auto subset = [&](int domain, int k) {
    std::vector<std::uint8_t> v(static_cast<std::size_t>(domain));
    for (int i = 0; i < domain; ++i) v[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    rng.shuffle(v);
    v.resize(static_cast<std::size_t>(std::min(domain, k)));
    return v;
  };
  std::array<std::vector<std::uint8_t>, kObjectTraitCount> pools;
  for (Trait t : kObjectTraits)
    pools[trait_index(t)] = subset(static_cast<int>(domain_size(t)), rng.between(1, 3));
  Grid g;
  Cell prev;
  for (std::size_t i = 0; i < kGivenCells; ++i) {
    if (i > 0 && rng.chance(0.15)) {
      g[i] = prev;
      continue;
    }
    std::vector<ObjectSpec> objs;
    const int n = rng.between(0, 4);
    std::set<std::pair<int, int>> used;
    for (int k = 0; k < n; ++k) {
      ObjectSpec o;
      o.layer = static_cast<std::uint8_t>(rng.below(2));
      o.slot = static_cast<std::uint8_t>(rng.below(kMaxSlots));
      if (!used.insert({o.layer, o.slot}).second) continue;
      for (Trait t : kObjectTraits) o.set(t, rng.pick(pools[trait_index(t)]));
      objs.push_back(o);
    }
    g[i] = Cell(std::move(objs));
    prev = g[i];
  }
  return g;
}

inline SolverConfig config_variant(std::size_t i) {
  SolverConfig c;
  c.column_scope = i % 3 != 1;
  c.identity = i % 5 == 4 ? IdentityKey::LayerShapeSlot : IdentityKey::LayerShape;
  if (i % 7 == 6) c.category_traits = {Trait::Color, Trait::Shape};
  return c;
}

struct OracleResult {
  std::size_t grids = 0;
  std::size_t agree = 0;
  std::size_t rules_compared = 0;
};

/// Induced rule sets and per-candidate satisfaction, library versus oracle.
/// Half the grids come from generated problems, half are random.
inline OracleResult oracle_equivalence(std::size_t grids, std::uint64_t seed) {
  OracleResult r;
  GeneratorSpec spec;
  spec.seed = seed;
  Rng rng = Rng::stream(seed, 0, 0x0ac1e);
  for (std::size_t i = 0; i < grids; ++i) {
    Problem p;
    if (i % 2 == 0) {
      p = sample_problem(spec, i);
    } else {
      p.grid = random_grid(rng);
      p.candidates = {p.grid[rng.below(kGivenCells)], p.grid[rng.below(kGivenCells)], Cell{}};
    }
    const SolverConfig cfg = config_variant(i);
    const RuleSet lib = induce_rules(p.grid, cfg);
    const std::set<Rule> want = oracle::survivors(p.grid, cfg);
    bool same = std::set<Rule>(lib.rules.begin(), lib.rules.end()) == want && lib.rules.size() == want.size();
    for (std::size_t k = 0; same && k < p.candidates.size(); ++k) {
      const bool a = check_answer(p.grid, lib, p.candidates[k], k).fully_satisfying;
      same = a == oracle::satisfies(p.grid, cfg, want, p.candidates[k]);
    }
    r.rules_compared += want.size();
    ++r.grids;
    r.agree += same;
  }
  return r;
}

inline bool has_rule(const RuleSet& rs, const Category& c, Trait t, OpKind k) {
  for (const auto& r : rs.rules)
    if (r.category == c && r.trait == t && r.op.kind == k) return true;
  return false;
}

struct FixtureResult {
  bool unique_truth = false;
  bool required_rules = false;
  std::string outcome;
};

/// Unique(truth) plus the rules each fixture exists to demonstrate.
inline FixtureResult check_fixture(FixtureName f) {
  const Problem p = fixture(f);
  const Trace t = solve_traced(p);
  FixtureResult r;
  r.outcome = std::string(outcome_name(t.verdict.outcome));
  r.unique_truth = t.verdict.outcome == Outcome::Unique && t.verdict.answers == std::vector<std::size_t>{p.truth};
  r.required_rules = true;
  for (const auto& want : p.provenance.planted)
    r.required_rules = r.required_rules && has_rule(t.rules, want.category, want.trait, want.op.kind);
  if (f == FixtureName::MultiRule) {
    const auto gray = Category::with(Trait::Color, 1);
    r.required_rules = r.required_rules && has_rule(t.rules, gray, Trait::Color, OpKind::Intersection) &&
                       has_rule(t.rules, gray, Trait::Fill, OpKind::Intersection);
  }
  return r;
}

}  // namespace checks
