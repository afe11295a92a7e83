#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arr/model.hpp"
#include "arr/operators.hpp"

namespace arr {

struct SolverConfig {
  /// Also induce rules from columns 1-2 and enforce them on column 3.
  bool column_scope = true;
  IdentityKey identity = IdentityKey::LayerShape;
  /// Object traits whose observed values become "trait has value v" categories.
  std::vector<Trait> category_traits{Trait::Color};
  /// Traits whose argument atoms are suppressed (ablation). Presence keys are
  /// built from shape, so hiding shape hides presence too.
  std::array<bool, kTraitCount> hidden{};

  bool is_hidden(Trait t) const {
    if (t == Trait::Presence && hidden[trait_index(Trait::Shape)]) return true;
    return hidden[trait_index(t)];
  }

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

using Line = std::array<std::size_t, 3>;

inline constexpr std::size_t kHole = 8;
inline constexpr std::array<Line, 3> kRows{{{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}};
inline constexpr std::array<Line, 3> kColumns{{{0, 3, 6}, {1, 4, 7}, {2, 5, 8}}};

inline const std::array<Line, 3>& lines_of(Scope s) { return s == Scope::Row ? kRows : kColumns; }

/// Every operator worth trying for a trait: the six set operators plus, on
/// numeric traits, progression with each step a in [1, |V(t)|].
inline std::vector<Operator> candidate_operators(Trait t) {
  std::vector<Operator> ops;
  for (OpKind k : kSetOps) ops.push_back({k, 0});
  if (trait_info(t).numeric)
    for (std::size_t a = 1; a <= domain_size(t); ++a)
      ops.push_back(Operator::progression(static_cast<std::uint8_t>(a)));
  return ops;
}

inline std::vector<Trait> visible_traits(const SolverConfig& config) {
  std::vector<Trait> out;
  for (Trait t : kAllTraits)
    if (!config.is_hidden(t)) out.push_back(t);
  return out;
}

/// Categories observable in the given cells: all objects, each layer, each
/// slot, and each value of the configured category traits.
inline std::vector<Category> default_categories(const Grid& grid, const SolverConfig& config) {
  std::vector<Category> out{Category::all()};
  std::array<bool, kMaxLayers> layers{};
  std::array<bool, kMaxSlots> slots{};
  std::array<std::array<bool, 8>, kObjectTraitCount> values{};
  for (const auto& cell : grid)
    for (const auto& o : cell.objects()) {
      layers[o.layer] = true;
      slots[o.slot] = true;
      for (Trait t : kObjectTraits) values[trait_index(t)][o.get(t)] = true;
    }
  for (std::uint8_t l = 0; l < kMaxLayers; ++l)
    if (layers[l]) out.push_back(Category::layer(l));
  for (Trait t : config.category_traits) {
    if (config.is_hidden(t)) continue;
    for (std::uint8_t v = 0; v < domain_size(t); ++v)
      if (values[trait_index(t)][v]) out.push_back(Category::with(t, v));
  }
  for (std::uint8_t p = 0; p < kMaxSlots; ++p)
    if (slots[p]) out.push_back(Category::slot(p));
  return out;
}

/// Whether operator `op` relates the third set of a line to the first two.
inline bool line_holds(const Operator& op, Trait t, const ValueSet& s1, const ValueSet& s2,
                       const ValueSet& s3, const ValueSet& universe) {
  if (op.kind != OpKind::Progression)
    return detail::apply_set_op(op.kind, s1.members, s2.members, universe.members) == s3.members;
  const std::array<const ValueSet*, 3> line{&s1, &s2, &s3};
  for (int x = 1; x <= 3; ++x) {
    auto v = line[x - 1]->single();
    if (!v) return false;
    auto y = progression_value(op.param, x, t);
    if (!y || *y != *v) return false;
  }
  return true;
}

struct RuleSet {
  std::vector<Rule> rules;
  /// (category, trait) pairs for which no operator survived in any scope.
  std::vector<std::pair<Category, Trait>> dropped_pairs;
  SolverConfig config;
};

namespace detail {

/// Projections of one (category, trait) pair over the eight given cells.
struct Projection {
  std::array<ValueSet, kGivenCells> cells;
  std::array<std::uint8_t, kGivenCells> members{};  // selected objects per cell
  ValueSet universe;

  bool applies(const Line& line) const { return members[line[0]] > 0 && members[line[1]] > 0; }
};

inline Projection project_grid(const Grid& grid, const Category& c, Trait t, IdentityKey mode) {
  Projection p;
  p.universe = ValueSet(t);
  for (std::size_t i = 0; i < kGivenCells; ++i) {
    p.cells[i] = project_argument(grid[i], c, t, mode);
    p.members[i] = static_cast<std::uint8_t>(category_members(c, grid[i]).size());
    p.universe.members = p.universe.members | p.cells[i].members;
  }
  return p;
}

/// Evaluates rules on line 3 with a candidate in the hole; caches the given-cell
/// projections per (category, trait).
class LineEvaluator {
 public:
  LineEvaluator(const Grid& grid, const SolverConfig& config) : grid_(grid), config_(config) {}

  /// nullopt when the rule does not apply to line 3.
  std::optional<bool> holds(const Rule& rule, const Cell& candidate) {
    const auto& p = projection(rule.category, rule.trait);
    const Line& line = lines_of(rule.scope)[2];
    if (!p.applies(line)) return std::nullopt;
    const ValueSet hole = project_argument(candidate, rule.category, rule.trait, config_.identity);
    return line_holds(rule.op, rule.trait, p.cells[line[0]], p.cells[line[1]], hole, p.universe);
  }

 private:
  const Projection& projection(const Category& c, Trait t) {
    auto key = std::make_pair(c, t);
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(key, project_grid(grid_, c, t, config_.identity)).first;
    return it->second;
  }

  const Grid& grid_;
  const SolverConfig& config_;
  std::map<std::pair<Category, Trait>, Projection> cache_;
};

}  // namespace detail

/// Keeps every operator that holds on both complete rows (and, separately,
/// both complete columns). A rule only applies to a line whose two leading
/// cells both contain members of its category. Pairs with no survivor are
/// recorded and impose nothing.
inline RuleSet induce_rules(const Grid& grid, const std::vector<Category>& categories,
                            const SolverConfig& config = {}) {
  RuleSet out;
  out.config = config;
  std::vector<Scope> scopes{Scope::Row};
  if (config.column_scope) scopes.push_back(Scope::Column);
  for (const auto& c : categories) {
    for (Trait t : visible_traits(config)) {
      const auto p = detail::project_grid(grid, c, t, config.identity);
      bool any = false;
      for (const auto& op : candidate_operators(t)) {
        for (Scope s : scopes) {
          bool ok = true;
          for (std::size_t l = 0; l < 2 && ok; ++l) {
            const Line& line = lines_of(s)[l];
            ok = p.applies(line) && line_holds(op, t, p.cells[line[0]], p.cells[line[1]],
                                               p.cells[line[2]], p.universe);
          }
          if (ok) {
            out.rules.push_back({c, t, op, s});
            any = true;
          }
        }
      }
      if (!any) out.dropped_pairs.emplace_back(c, t);
    }
  }
  std::sort(out.rules.begin(), out.rules.end());
  out.rules.erase(std::unique(out.rules.begin(), out.rules.end()), out.rules.end());
  return out;
}

inline RuleSet induce_rules(const Grid& grid, const SolverConfig& config = {}) {
  return induce_rules(grid, default_categories(grid, config), config);
}

struct SatisfactionReport {
  std::size_t candidate_index = 0;
  std::size_t satisfied = 0;
  std::size_t violated = 0;
  bool fully_satisfying = true;
  std::vector<std::size_t> violated_rules;  // indices into RuleSet::rules

  friend bool operator==(const SatisfactionReport&, const SatisfactionReport&) = default;
};

namespace detail {

inline SatisfactionReport check_with(LineEvaluator& eval, const RuleSet& rules,
                                     const Cell& candidate, std::size_t index) {
  SatisfactionReport r;
  r.candidate_index = index;
  for (std::size_t i = 0; i < rules.rules.size(); ++i) {
    const auto ok = eval.holds(rules.rules[i], candidate);
    if (!ok) continue;
    if (*ok) {
      ++r.satisfied;
    } else {
      ++r.violated;
      r.violated_rules.push_back(i);
    }
  }
  r.fully_satisfying = r.violated == 0;
  return r;
}

}  // namespace detail

/// Places `candidate` in the hole and counts the rules it satisfies on line 3.
/// Rules that do not apply to line 3 are counted neither way.
inline SatisfactionReport check_answer(const Grid& grid, const RuleSet& rules,
                                       const Cell& candidate, std::size_t index) {
  detail::LineEvaluator eval(grid, rules.config);
  return detail::check_with(eval, rules, candidate, index);
}

enum class Mode { Strict, Ranked };
enum class Outcome { Unique, Ambiguous, Unsat };

inline std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Unique: return "unique";
    case Outcome::Ambiguous: return "ambiguous";
    case Outcome::Unsat: return "unsat";
  }
  return "?";
}

struct Verdict {
  Outcome outcome = Outcome::Unsat;
  /// Unique: the answer. Ambiguous: candidates, ranked by satisfied count in
  /// Ranked mode. Unsat: empty.
  std::vector<std::size_t> answers;
  std::vector<SatisfactionReport> reports;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline Verdict make_verdict(std::vector<SatisfactionReport> reports, Mode mode) {
  Verdict v;
  v.reports = std::move(reports);
  for (const auto& r : v.reports)
    if (r.fully_satisfying) v.answers.push_back(r.candidate_index);
  if (v.answers.size() == 1) {
    v.outcome = Outcome::Unique;
  } else if (mode == Mode::Ranked) {
    v.outcome = Outcome::Ambiguous;
    v.answers.clear();
    for (const auto& r : v.reports) v.answers.push_back(r.candidate_index);
    std::stable_sort(v.answers.begin(), v.answers.end(), [&](std::size_t a, std::size_t b) {
      return v.reports[a].satisfied > v.reports[b].satisfied;
    });
  } else {
    v.outcome = v.answers.empty() ? Outcome::Unsat : Outcome::Ambiguous;
  }
  return v;
}

struct Trace {
  RuleSet rules;
  Verdict verdict;
};

inline Trace solve_traced(const Problem& problem, Mode mode = Mode::Strict,
                          const SolverConfig& config = {}) {
  problem.validate();
  Trace t;
  t.rules = induce_rules(problem.grid, config);
  detail::LineEvaluator eval(problem.grid, t.rules.config);
  std::vector<SatisfactionReport> reports;
  reports.reserve(problem.candidates.size());
  for (std::size_t i = 0; i < problem.candidates.size(); ++i)
    reports.push_back(detail::check_with(eval, t.rules, problem.candidates[i], i));
  t.verdict = make_verdict(std::move(reports), mode);
  return t;
}

inline Verdict solve(const Problem& problem, Mode mode = Mode::Strict,
                     const SolverConfig& config = {}) {
  return solve_traced(problem, mode, config).verdict;
}

enum class ErrorClass { Accurate, FalsePositive, FalseNegative, Both };

inline constexpr std::array<ErrorClass, 4> kErrorClasses{
    ErrorClass::Accurate, ErrorClass::FalsePositive, ErrorClass::FalseNegative, ErrorClass::Both};

inline std::string_view error_class_name(ErrorClass e) {
  switch (e) {
    case ErrorClass::Accurate: return "accurate";
    case ErrorClass::FalsePositive: return "false_positive";
    case ErrorClass::FalseNegative: return "false_negative";
    case ErrorClass::Both: return "both";
  }
  return "?";
}

/// False positive: a wrong candidate fully satisfies. False negative: the true
/// candidate does not. Accurate exactly when neither happens.
inline ErrorClass classify(const Verdict& verdict, std::size_t ground_truth) {
  if (ground_truth >= verdict.reports.size())
    throw std::out_of_range("ground truth index beyond candidate count");
  bool fp = false;
  for (const auto& r : verdict.reports)
    if (r.candidate_index != ground_truth && r.fully_satisfying) fp = true;
  const bool fn = !verdict.reports[ground_truth].fully_satisfying;
  if (fp && fn) return ErrorClass::Both;
  if (fp) return ErrorClass::FalsePositive;
  if (fn) return ErrorClass::FalseNegative;
  return ErrorClass::Accurate;
}

}  // namespace arr
