#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arr/model.hpp"
#include "arr/reasoner.hpp"
#include "arr/rng.hpp"

namespace arr {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntRange {
  int lo = 0;
  int hi = 0;

  bool valid() const { return lo <= hi; }
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct GeneratorSpec {
  std::uint64_t seed = 1;
  std::vector<Trait> traits_in_play{kAllTraits.begin(), kAllTraits.end()};
  /// Selectors the generator may state rules over. TraitValue means color.
  std::vector<CategoryKind> categories_in_play{CategoryKind::All, CategoryKind::Layer,
                                               CategoryKind::TraitValue};
  IntRange rules_per_problem{2, 4};
  IntRange objects_per_cell{1, 6};
  std::size_t candidate_count = 8;
  IntRange distractor_mutations{1, 3};
  /// Probability that an unplanted fill/rotation/size trait varies freely
  /// instead of staying constant.
  double nuisance_rate = 0.2;
  int max_attempts = 400;
  SolverConfig solver;

  bool plays(Trait t) const {
    return std::find(traits_in_play.begin(), traits_in_play.end(), t) != traits_in_play.end();
  }
  bool plays(CategoryKind k) const {
    return std::find(categories_in_play.begin(), categories_in_play.end(), k) !=
           categories_in_play.end();
  }

  void validate() const {
    if (candidate_count < 2) throw std::invalid_argument("candidate_count must be at least 2");
    if (!rules_per_problem.valid() || !objects_per_cell.valid() || !distractor_mutations.valid())
      throw std::invalid_argument("empty range in generator spec");
    if (rules_per_problem.lo < 1) throw std::invalid_argument("rules_per_problem must be >= 1");
    if (objects_per_cell.lo < 1 || objects_per_cell.hi > static_cast<int>(kMaxObjectsPerCell))
      throw std::invalid_argument("objects_per_cell must lie within 1..6");
    if (distractor_mutations.lo < 1) throw std::invalid_argument("distractor_mutations must be >= 1");
    if (nuisance_rate < 0.0 || nuisance_rate > 1.0)
      throw std::invalid_argument("nuisance_rate must lie within [0, 1]");
    if (traits_in_play.empty()) throw std::invalid_argument("no traits in play");
    if (categories_in_play.empty()) throw std::invalid_argument("no categories in play");
  }

  std::string canonical() const {
    std::ostringstream os;
    os << "seed=" << seed << ";traits=";
    for (Trait t : traits_in_play) os << trait_name(t) << ",";
    os << ";categories=";
    for (auto k : categories_in_play) os << static_cast<int>(k) << ",";
    os << ";rules=" << rules_per_problem.lo << "-" << rules_per_problem.hi
       << ";objects=" << objects_per_cell.lo << "-" << objects_per_cell.hi
       << ";candidates=" << candidate_count << ";mutations=" << distractor_mutations.lo << "-"
       << distractor_mutations.hi << ";nuisance=" << static_cast<long>(nuisance_rate * 1e6)
       << ";attempts=" << max_attempts << ";columns=" << solver.column_scope
       << ";identity=" << static_cast<int>(solver.identity);
    return os.str();
  }

  std::uint64_t hash() const { return fnv1a(canonical()); }
};

/// A problem before candidates exist: the full 3x3 matrix and the rules planted in it.
struct ProblemCore {
  Grid grid;
  Cell truth;
  std::vector<Rule> planted;
};

struct DistractorPolicy {
  IntRange mutations{1, 3};
  /// Only keep distractors that break at least one planted rule.
  bool require_violation = true;
  int budget = 4000;
};

namespace detail {

inline bool breaks_any(const Grid& grid, const RuleSet& rules, const Cell& c) {
  return check_answer(grid, rules, c, 0).violated > 0;
}

inline Cell mutate(const Cell& cell, const Grid& grid, Rng& rng) {
  std::vector<ObjectSpec> objs(cell.objects().begin(), cell.objects().end());
  enum { Flip, Add, Remove };
  int kind = static_cast<int>(rng.below(3));
  if (objs.empty()) kind = Add;
  if (kind == Add && objs.size() >= kMaxObjectsPerCell) kind = Flip;
  switch (kind) {
    case Flip: {
      auto& o = objs[rng.below(objs.size())];
      const Trait t = kObjectTraits[rng.below(kObjectTraitCount)];
      const auto n = domain_size(t);
      const auto shift = 1 + rng.below(n - 1);
      o.set(t, static_cast<std::uint8_t>((o.get(t) + shift) % n));
      break;
    }
    case Add: {
      // The new object must carry an identity key the cell lacks; a second
      // copy of an existing (layer, shape) would be invisible to presence.
      auto has_key = [&](const ObjectSpec& x) {
        for (const auto& y : objs)
          if (x.layer == y.layer && x.get(Trait::Shape) == y.get(Trait::Shape)) return true;
        return false;
      };
      std::vector<ObjectSpec> pool;
      for (const auto& c : grid)
        for (const auto& x : c.objects())
          if (!has_key(x)) pool.push_back(x);
      ObjectSpec o;
      if (!pool.empty()) {
        o = pool[rng.below(pool.size())];
      } else if (!objs.empty()) {
        o = objs[rng.below(objs.size())];
        std::vector<std::uint8_t> shapes;
        for (std::uint8_t s = 0; s < kShapeCount; ++s) {
          ObjectSpec probe = o;
          probe.set(Trait::Shape, s);
          if (!has_key(probe)) shapes.push_back(s);
        }
        if (shapes.empty()) return Cell(std::move(objs));
        o.set(Trait::Shape, rng.pick(shapes));
      }
      std::vector<std::uint8_t> free;
      for (std::uint8_t s = 0; s < kMaxSlots; ++s) {
        bool used = false;
        for (const auto& x : objs) used = used || (x.layer == o.layer && x.slot == s);
        if (!used) free.push_back(s);
      }
      if (free.empty()) return Cell(std::move(objs));
      o.slot = rng.pick(free);
      objs.push_back(o);
      break;
    }
    case Remove: objs.erase(objs.begin() + static_cast<std::ptrdiff_t>(rng.below(objs.size()))); break;
  }
  return Cell(std::move(objs));
}

}  // namespace detail

/// k distinct cells, each 1-3 random mutations (flip a trait value, add or
/// remove an object) away from `correct`, never equal to it.
inline std::vector<Cell> make_distractors(const Cell& correct, const Grid& grid,
                                          const RuleSet& planted, std::size_t k, Rng& rng,
                                          const DistractorPolicy& policy = {}) {
  if (k == 0) return {};
  std::vector<Cell> out;
  for (int tries = 0; tries < policy.budget && out.size() < k; ++tries) {
    Cell d = correct;
    const int m = rng.between(policy.mutations.lo, policy.mutations.hi);
    for (int i = 0; i < m; ++i) d = detail::mutate(d, grid, rng);
    if (d == correct || std::find(out.begin(), out.end(), d) != out.end()) continue;
    if (policy.require_violation && !detail::breaks_any(grid, planted, d)) continue;
    out.push_back(std::move(d));
  }
  if (out.size() < k)
    throw GenerationError("could not produce " + std::to_string(k) + " distinct distractors");
  return out;
}

namespace detail {

enum class GroupKind { Attribute, Presence, Count };

struct Group {
  GroupKind kind;
  std::uint8_t layer = 0;
  Category category;
  std::optional<std::uint8_t> fixed_color;
  std::vector<std::uint8_t> slots;
  int rules = 1;  // planted rules this group carries
};

using Cells9 = std::array<std::vector<ObjectSpec>, 9>;

inline std::vector<std::uint8_t> distinct_codes(Rng& rng, std::size_t domain, std::size_t k) {
  std::vector<std::uint8_t> all(domain);
  for (std::size_t i = 0; i < domain; ++i) all[i] = static_cast<std::uint8_t>(i);
  rng.shuffle(all);
  all.resize(k);
  return all;
}

/// values[r][c] for a Latin arrangement of three distinct codes.
inline std::array<std::array<std::uint8_t, 3>, 3> latin_rows(Rng& rng, std::size_t domain) {
  const auto v = distinct_codes(rng, domain, 3);
  std::array<std::array<std::uint8_t, 3>, 3> out{};
  const bool square = rng.chance(0.5);
  const int shift = rng.between(1, 2);
  for (int r = 0; r < 3; ++r) {
    std::vector<std::uint8_t> row;
    if (square) {
      for (int c = 0; c < 3; ++c) row.push_back(v[(r * shift + c) % 3]);
    } else {
      row = v;
      rng.shuffle(row);
    }
    for (int c = 0; c < 3; ++c) out[r][c] = row[c];
  }
  return out;
}

inline ObjectSpec random_object(Rng& rng, std::uint8_t layer, std::uint8_t slot) {
  ObjectSpec o;
  o.layer = layer;
  o.slot = slot;
  for (Trait t : kObjectTraits) o.set(t, static_cast<std::uint8_t>(rng.below(domain_size(t))));
  return o;
}

inline bool nuisance_trait(Trait t) {
  return t == Trait::Fill || t == Trait::Rotation || t == Trait::Size;
}

inline void fill_attribute(const GeneratorSpec& spec, const Group& g, Rng& rng, Cells9& cells,
                           std::vector<Rule>& planted) {
  ObjectSpec base = random_object(rng, g.layer, g.slots.at(0));
  if (g.fixed_color) base.set(Trait::Color, *g.fixed_color);
  std::vector<Trait> options;
  for (Trait t : kObjectTraits)
    if (spec.plays(t) && !(t == Trait::Color && g.fixed_color)) options.push_back(t);
  rng.shuffle(options);
  options.resize(static_cast<std::size_t>(g.rules));

  std::array<std::array<ObjectSpec, 3>, 3> grid;
  for (auto& row : grid) row.fill(base);
  for (Trait t : kObjectTraits) {
    const bool varied = std::find(options.begin(), options.end(), t) != options.end();
    if (varied) {
      std::vector<int> families{0, 1};  // latin, row-constant
      if (trait_info(t).cyclic) families.push_back(2);
      const int family = rng.pick(families);
      if (family == 0) {
        const auto v = latin_rows(rng, domain_size(t));
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) grid[r][c].set(t, v[r][c]);
        planted.push_back({g.category, t, {OpKind::NotSymDiff, 0}, Scope::Row});
      } else if (family == 1) {
        const auto v = distinct_codes(rng, domain_size(t), 3);
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) grid[r][c].set(t, v[r]);
        planted.push_back({g.category, t, {OpKind::Union, 0}, Scope::Row});
      } else {
        const int a = rng.between(1, static_cast<int>(domain_size(t)) - 1);
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c)
            grid[r][c].set(t, *progression_value(a, c + 1, t));
        planted.push_back({g.category, t, Operator::progression(static_cast<std::uint8_t>(a)),
                           Scope::Row});
      }
    } else if (nuisance_trait(t) && rng.chance(spec.nuisance_rate)) {
      for (auto& row : grid)
        for (auto& o : row) o.set(t, static_cast<std::uint8_t>(rng.below(domain_size(t))));
    }
  }
  for (int i = 0; i < 9; ++i) cells[i].push_back(grid[i / 3][i % 3]);
}

inline bool fill_presence(const GeneratorSpec& spec, const Group& g, Rng& rng, Cells9& cells,
                          std::vector<Rule>& planted) {
  const std::size_t k = g.slots.size();
  const auto shapes = distinct_codes(rng, kShapeCount, k);
  const std::uint8_t color = g.fixed_color ? *g.fixed_color
                                           : static_cast<std::uint8_t>(rng.below(domain_size(Trait::Color)));
  std::vector<ObjectSpec> keys;
  const bool shared_style = rng.chance(0.5);
  const ObjectSpec style = random_object(rng, g.layer, 0);
  for (std::size_t i = 0; i < k; ++i) {
    ObjectSpec o = shared_style ? style : random_object(rng, g.layer, 0);
    o.slot = g.slots[i];
    o.set(Trait::Shape, shapes[i]);
    o.set(Trait::Color, color);
    keys.push_back(o);
  }
  std::optional<Trait> noisy;
  if (rng.chance(spec.nuisance_rate)) {
    const std::array<Trait, 3> pick{Trait::Fill, Trait::Rotation, Trait::Size};
    noisy = pick[rng.below(3)];
  }
  const std::array<OpKind, 3> ops{OpKind::Union, OpKind::SymDiff, OpKind::Intersection};
  const OpKind op = ops[rng.below(ops.size())];
  const unsigned full = (1U << k) - 1;
  for (int r = 0; r < 3; ++r) {
    unsigned s1 = 0, s2 = 0, s3 = 0;
    bool found = false;
    for (int tries = 0; tries < 64 && !found; ++tries) {
      s1 = 1 + static_cast<unsigned>(rng.below(full));
      s2 = 1 + static_cast<unsigned>(rng.below(full));
      s3 = op == OpKind::Union ? (s1 | s2) : op == OpKind::SymDiff ? (s1 ^ s2) : (s1 & s2);
      found = s3 != 0 && s1 != s2;
    }
    if (!found) return false;
    const std::array<unsigned, 3> masks{s1, s2, s3};
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < k; ++i)
        if (masks[c] & (1U << i)) {
          ObjectSpec o = keys[i];
          if (noisy) o.set(*noisy, static_cast<std::uint8_t>(rng.below(domain_size(*noisy))));
          cells[r * 3 + c].push_back(o);
        }
  }
  planted.push_back({g.category, Trait::Presence, {op, 0}, Scope::Row});
  return true;
}

inline void fill_count(const Group& g, Rng& rng, Cells9& cells, std::vector<Rule>& planted) {
  ObjectSpec proto = random_object(rng, g.layer, 0);
  if (g.fixed_color) proto.set(Trait::Color, *g.fixed_color);
  const int avail = static_cast<int>(g.slots.size());
  std::array<std::array<int, 3>, 3> counts{};
  if (avail >= 3 && rng.chance(0.5)) {
    const int a = avail >= 6 ? rng.between(1, 2) : 1;
    for (auto& row : counts)
      for (int c = 0; c < 3; ++c) row[c] = a * (c + 1);
    planted.push_back({g.category, Trait::Count, Operator::progression(static_cast<std::uint8_t>(a)),
                       Scope::Row});
  } else {
    auto v = distinct_codes(rng, static_cast<std::size_t>(avail), 3);
    for (auto& x : v) ++x;  // counts 1..avail
    for (auto& row : counts) {
      std::vector<std::uint8_t> perm = v;
      rng.shuffle(perm);
      for (int c = 0; c < 3; ++c) row[c] = perm[c];
    }
    planted.push_back({g.category, Trait::Count, {OpKind::NotSymDiff, 0}, Scope::Row});
  }
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < counts[i / 3][i % 3]; ++j) {
      ObjectSpec o = proto;
      o.slot = g.slots[j];
      cells[i].push_back(o);
    }
}

}  // namespace detail

/// Plants rules into a fresh 3x3 matrix. Returns nullopt when the sampled
/// structure violates the spec's object bounds.
inline std::optional<ProblemCore> plant_core(const GeneratorSpec& spec, Rng& rng) {
  using detail::Group;
  using detail::GroupKind;
  const int rules = rng.between(spec.rules_per_problem.lo, spec.rules_per_problem.hi);
  int attr_traits = 0;
  for (Trait t : kObjectTraits) attr_traits += spec.plays(t) ? 1 : 0;
  const bool multi = spec.plays(CategoryKind::Layer) || spec.plays(CategoryKind::TraitValue);
  const bool presence = spec.plays(Trait::Presence);
  const bool count = spec.plays(Trait::Count);

  std::vector<std::vector<std::pair<GroupKind, int>>> options;
  if (attr_traits >= rules) options.push_back({{GroupKind::Attribute, rules}});
  if (multi && rules >= 2 && attr_traits >= rules - 1) {
    if (presence) options.push_back({{GroupKind::Attribute, rules - 1}, {GroupKind::Presence, 1}});
    if (count) options.push_back({{GroupKind::Attribute, rules - 1}, {GroupKind::Count, 1}});
  }
  if (multi && rules == 2) {
    if (presence && count) options.push_back({{GroupKind::Presence, 1}, {GroupKind::Count, 1}});
    if (presence) options.push_back({{GroupKind::Presence, 1}, {GroupKind::Presence, 1}});
  }
  if (!multi && rules == 1) {
    if (presence) options.push_back({{GroupKind::Presence, 1}});
    if (count) options.push_back({{GroupKind::Count, 1}});
  }
  if (options.empty()) return std::nullopt;
  const auto& shape = rng.pick(options);

  std::vector<std::uint8_t> slots{0, 1, 2, 3, 4, 5};
  rng.shuffle(slots);
  std::vector<std::uint8_t> colors = detail::distinct_codes(rng, domain_size(Trait::Color), 2);
  std::vector<Group> groups;
  std::size_t next_slot = 0;
  const int max_objects = spec.objects_per_cell.hi;
  int budget = max_objects;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    Group g{shape[i].first, static_cast<std::uint8_t>(i), Category::all(), std::nullopt, {}, shape[i].second};
    if (shape.size() > 1 || !spec.plays(CategoryKind::All)) {
      std::vector<CategoryKind> kinds;
      if (spec.plays(CategoryKind::Layer)) kinds.push_back(CategoryKind::Layer);
      if (spec.plays(CategoryKind::TraitValue)) kinds.push_back(CategoryKind::TraitValue);
      if (kinds.empty()) return std::nullopt;
      if (rng.pick(kinds) == CategoryKind::Layer) {
        g.category = Category::layer(g.layer);
      } else {
        g.fixed_color = colors[i];
        g.category = Category::with(Trait::Color, colors[i]);
      }
    }
    const int remaining_groups = static_cast<int>(shape.size() - i - 1);
    int want = 1;
    if (g.kind == GroupKind::Presence) want = rng.between(3, 5);
    if (g.kind == GroupKind::Count) want = rng.between(3, 6);
    want = std::min({want, budget - remaining_groups, static_cast<int>(slots.size() - next_slot)});
    if (want < 1 || (g.kind == GroupKind::Presence && want < 2) ||
        (g.kind == GroupKind::Count && want < 3))
      return std::nullopt;
    g.slots.assign(slots.begin() + static_cast<std::ptrdiff_t>(next_slot),
                   slots.begin() + static_cast<std::ptrdiff_t>(next_slot + static_cast<std::size_t>(want)));
    next_slot += static_cast<std::size_t>(want);
    budget -= want;
    groups.push_back(std::move(g));
  }

  detail::Cells9 cells;
  ProblemCore core;
  for (const auto& g : groups) {
    switch (g.kind) {
      case GroupKind::Attribute: detail::fill_attribute(spec, g, rng, cells, core.planted); break;
      case GroupKind::Presence:
        if (!detail::fill_presence(spec, g, rng, cells, core.planted)) return std::nullopt;
        break;
      case GroupKind::Count: detail::fill_count(g, rng, cells, core.planted); break;
    }
  }
  for (const auto& c : cells)
    if (static_cast<int>(c.size()) < spec.objects_per_cell.lo ||
        static_cast<int>(c.size()) > spec.objects_per_cell.hi)
      return std::nullopt;
  for (std::size_t i = 0; i < kGivenCells; ++i) core.grid[i] = Cell(cells[i]);
  core.truth = Cell(cells[8]);
  // Groups can leak into each other's categories (a layer-keyed object that
  // happens to share a color-keyed group's color), so check the planted rules
  // on the finished matrix.
  std::vector<Category> cats;
  for (const auto& r : core.planted)
    if (std::find(cats.begin(), cats.end(), r.category) == cats.end()) cats.push_back(r.category);
  const RuleSet induced = induce_rules(core.grid, cats, spec.solver);
  for (const auto& r : core.planted)
    if (std::find(induced.rules.begin(), induced.rules.end(), r) == induced.rules.end()) return std::nullopt;
  const RuleSet planted{core.planted, {}, spec.solver};
  if (check_answer(core.grid, planted, core.truth, 0).violated > 0) return std::nullopt;
  return core;
}

/// Seeded, verified problem: every returned problem solves Unique(truth)
/// under the strict solver configured in `spec`.
inline Problem sample_problem(const GeneratorSpec& spec, std::uint64_t index) {
  spec.validate();
  Rng rng = Rng::stream(spec.seed, index);
  DistractorPolicy policy;
  policy.mutations = spec.distractor_mutations;
  std::uint32_t rejections = 0;
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt, ++rejections) {
    auto core = plant_core(spec, rng);
    if (!core) continue;
    const RuleSet planted{core->planted, {}, spec.solver};
    std::vector<Cell> distractors;
    try {
      distractors = make_distractors(core->truth, core->grid, planted, spec.candidate_count - 1,
                                     rng, policy);
    } catch (const GenerationError&) {
      continue;
    }
    Problem p;
    p.grid = core->grid;
    p.truth = rng.below(spec.candidate_count);
    p.candidates = std::move(distractors);
    p.candidates.insert(p.candidates.begin() + static_cast<std::ptrdiff_t>(p.truth), core->truth);
    const Verdict v = solve(p, Mode::Strict, spec.solver);
    if (v.outcome != Outcome::Unique || v.answers.front() != p.truth) continue;
    p.provenance = {"generator", spec.seed, index, spec.hash(), rejections, core->planted};
    return p;
  }
  throw GenerationError("retry budget exhausted at index " + std::to_string(index) +
                        " for spec {" + spec.canonical() + "}");
}

/// Replaces a problem's distractors with `n - 1` unverified ones (rule
/// violation not required). Draws are nested: the first k distractors are the
/// same for every n > k.
inline Problem resample_candidates(const Problem& core, std::size_t n, IntRange mutations = {1, 3},
                                   std::uint64_t salt = 0x5ca1e) {
  if (n == 0) throw std::invalid_argument("candidate count must be at least 1");
  Rng rng = Rng::stream(core.provenance.seed, core.provenance.index, salt);
  DistractorPolicy policy;
  policy.mutations = mutations;
  policy.require_violation = false;
  const RuleSet none;
  Problem p;
  p.grid = core.grid;
  p.provenance = core.provenance;
  p.candidates = make_distractors(core.truth_cell(), core.grid, none, n - 1, rng, policy);
  p.truth = 0;
  p.candidates.insert(p.candidates.begin(), core.truth_cell());
  return p;
}

}  // namespace arr
