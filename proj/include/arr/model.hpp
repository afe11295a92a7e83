#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arr/vocabulary.hpp"

namespace arr {

inline constexpr std::size_t kCodeCapacity = 256;

/// Fixed-capacity bit set over value codes.
class CodeBits {
 public:
  static constexpr std::size_t kWords = kCodeCapacity / 64;

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  /// Index of the lowest set bit, or kCodeCapacity when empty.
  std::size_t first() const {
    for (std::size_t w = 0; w < kWords; ++w)
      if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return kCodeCapacity;
  }

  friend CodeBits operator|(CodeBits a, const CodeBits& b) {
    for (std::size_t w = 0; w < kWords; ++w) a.words_[w] |= b.words_[w];
    return a;
  }
  friend CodeBits operator&(CodeBits a, const CodeBits& b) {
    for (std::size_t w = 0; w < kWords; ++w) a.words_[w] &= b.words_[w];
    return a;
  }
  friend CodeBits operator^(CodeBits a, const CodeBits& b) {
    for (std::size_t w = 0; w < kWords; ++w) a.words_[w] ^= b.words_[w];
    return a;
  }
  /// a \ b
  friend CodeBits operator-(CodeBits a, const CodeBits& b) {
    for (std::size_t w = 0; w < kWords; ++w) a.words_[w] &= ~b.words_[w];
    return a;
  }
  friend bool operator==(const CodeBits&, const CodeBits&) = default;

 private:
  std::array<std::uint64_t, kWords> words_{};
};

/// A category-level argument A(c,t): the set of value codes one trait takes
/// over the objects a category selects.
struct ValueSet {
  Trait trait = Trait::Shape;
  CodeBits members;

  ValueSet() = default;
  explicit ValueSet(Trait t) : trait(t) {}
  ValueSet(Trait t, std::initializer_list<std::uint16_t> codes) : trait(t) {
    for (auto c : codes) insert(c);
  }

  void insert(std::uint16_t code) {
    if (code >= kCodeCapacity) throw std::out_of_range("value code beyond set capacity");
    members.set(code);
  }
  bool contains(std::uint16_t code) const { return code < kCodeCapacity && members.test(code); }
  std::size_t size() const { return members.count(); }
  bool empty() const { return members.none(); }
  bool subset_of(const ValueSet& other) const { return (members - other.members).none(); }

  std::vector<std::uint16_t> codes() const {
    std::vector<std::uint16_t> out;
    for (std::size_t i = 0; i < kCodeCapacity; ++i)
      if (members.test(i)) out.push_back(static_cast<std::uint16_t>(i));
    return out;
  }

  /// The single code, if this set is a singleton.
  std::optional<std::uint16_t> single() const {
    if (size() != 1) return std::nullopt;
    return static_cast<std::uint16_t>(members.first());
  }

  friend bool operator==(const ValueSet&, const ValueSet&) = default;
};

enum class OpKind : std::uint8_t {
  Union,
  Intersection,
  SymDiff,
  NotUnion,
  NotIntersection,
  NotSymDiff,
  Progression
};

inline constexpr std::array<OpKind, 6> kSetOps{OpKind::Union,    OpKind::Intersection,
                                               OpKind::SymDiff,  OpKind::NotUnion,
                                               OpKind::NotIntersection, OpKind::NotSymDiff};

inline constexpr std::string_view op_name(OpKind k) {
  switch (k) {
    case OpKind::Union: return "union";
    case OpKind::Intersection: return "intersection";
    case OpKind::SymDiff: return "symdiff";
    case OpKind::NotUnion: return "not_union";
    case OpKind::NotIntersection: return "not_intersection";
    case OpKind::NotSymDiff: return "not_symdiff";
    case OpKind::Progression: return "progression";
  }
  return "?";
}

struct Operator {
  OpKind kind = OpKind::Union;
  std::uint8_t param = 0;  // progression step a; zero for set operators

  static Operator progression(std::uint8_t a) { return {OpKind::Progression, a}; }

  std::string name() const {
    if (kind == OpKind::Progression) return "progression(" + std::to_string(param) + ")";
    return std::string(op_name(kind));
  }

  static std::optional<Operator> parse(std::string_view s) {
    for (OpKind k : kSetOps)
      if (s == op_name(k)) return Operator{k, 0};
    constexpr std::string_view prefix = "progression(";
    if (s.starts_with(prefix) && s.ends_with(")")) {
      auto digits = s.substr(prefix.size(), s.size() - prefix.size() - 1);
      if (digits.empty() || digits.size() > 2) return std::nullopt;
      unsigned a = 0;
      for (char ch : digits) {
        if (ch < '0' || ch > '9') return std::nullopt;
        a = a * 10 + static_cast<unsigned>(ch - '0');
      }
      if (a == 0) return std::nullopt;
      return progression(static_cast<std::uint8_t>(a));
    }
    return std::nullopt;
  }

  friend auto operator<=>(const Operator&, const Operator&) = default;
};

/// One object: a layer tag, an anchor slot, and a total trait assignment.
struct ObjectSpec {
  std::uint8_t layer = 0;
  std::uint8_t slot = 0;
  std::array<std::uint8_t, kObjectTraitCount> values{};

  std::uint8_t get(Trait t) const { return values.at(trait_index(t)); }
  void set(Trait t, std::uint8_t code) { values.at(trait_index(t)) = code; }

  std::pair<std::uint8_t, std::uint8_t> identity() const { return {layer, slot}; }

  std::uint16_t key(IdentityKey mode) const {
    return presence_key(layer, get(Trait::Shape), slot, mode);
  }

  std::vector<State> states() const {
    std::vector<State> out;
    for (Trait t : kObjectTraits) out.push_back({t, Value{t, get(t)}});
    return out;
  }

  friend auto operator<=>(const ObjectSpec&, const ObjectSpec&) = default;
};

/// The objects of one matrix cell, kept in ascending identity order.
class Cell {
 public:
  Cell() = default;
  explicit Cell(std::vector<ObjectSpec> objects) : objects_(std::move(objects)) {
    std::sort(objects_.begin(), objects_.end(),
              [](const auto& a, const auto& b) { return a.identity() < b.identity(); });
    validate();
  }

  std::span<const ObjectSpec> objects() const { return objects_; }
  std::size_t size() const { return objects_.size(); }
  bool empty() const { return objects_.empty(); }

  const ObjectSpec* find(std::uint8_t layer, std::uint8_t slot) const {
    for (const auto& o : objects_)
      if (o.layer == layer && o.slot == slot) return &o;
    return nullptr;
  }

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell& a, const Cell& b) { return a.objects_ <=> b.objects_; }

 private:
  void validate() const {
    if (objects_.size() > kMaxObjectsPerCell)
      throw std::invalid_argument("cell holds " + std::to_string(objects_.size()) +
                                  " objects; at most 6 are allowed");
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      const auto& o = objects_[i];
      if (o.layer >= kMaxLayers) throw std::invalid_argument("layer out of range");
      if (o.slot >= kMaxSlots) throw std::invalid_argument("slot out of range");
      for (Trait t : kObjectTraits)
        if (o.get(t) >= domain_size(t))
          throw std::invalid_argument("value out of range for " + std::string(trait_name(t)));
      if (i > 0 && objects_[i - 1].identity() == o.identity())
        throw std::invalid_argument("duplicate object identity in cell");
    }
  }

  std::vector<ObjectSpec> objects_;
};

inline constexpr std::size_t kGivenCells = 8;

/// Row-major 3x3 matrix with the ninth position missing.
using Grid = std::array<Cell, kGivenCells>;

enum class CategoryKind : std::uint8_t { All, Layer, TraitValue, Slot };

/// A declarative object selector.
struct Category {
  CategoryKind kind = CategoryKind::All;
  Trait trait = Trait::Shape;  // TraitValue only
  std::uint8_t value = 0;      // layer, slot, or value code

  static Category all() { return {}; }
  static Category layer(std::uint8_t l) { return {CategoryKind::Layer, Trait::Shape, l}; }
  static Category slot(std::uint8_t p) { return {CategoryKind::Slot, Trait::Shape, p}; }
  static Category with(Trait t, std::uint8_t v) {
    if (!is_object_trait(t)) throw std::invalid_argument("categories select on object traits");
    return {CategoryKind::TraitValue, t, v};
  }

  bool selects(const ObjectSpec& o) const {
    switch (kind) {
      case CategoryKind::All: return true;
      case CategoryKind::Layer: return o.layer == value;
      case CategoryKind::Slot: return o.slot == value;
      case CategoryKind::TraitValue: return o.get(trait) == value;
    }
    return false;
  }

  std::string name() const {
    switch (kind) {
      case CategoryKind::All: return "all";
      case CategoryKind::Layer: return "layer" + std::to_string(value);
      case CategoryKind::Slot: return "slot" + std::to_string(value);
      case CategoryKind::TraitValue:
        return std::string(trait_name(trait)) + "_" + value_label(trait, value);
    }
    return "?";
  }

  static std::optional<Category> parse(std::string_view s) {
    if (s == "all") return all();
    auto numeric = [](std::string_view d) -> std::optional<std::uint8_t> {
      if (d.size() != 1 || d[0] < '0' || d[0] > '9') return std::nullopt;
      return static_cast<std::uint8_t>(d[0] - '0');
    };
    if (s.starts_with("layer")) {
      auto v = numeric(s.substr(5));
      if (v && *v < kMaxLayers) return layer(*v);
      return std::nullopt;
    }
    if (s.starts_with("slot")) {
      auto v = numeric(s.substr(4));
      if (v && *v < kMaxSlots) return slot(*v);
      return std::nullopt;
    }
    auto us = s.find('_');
    if (us == std::string_view::npos) return std::nullopt;
    auto t = trait_from_name(s.substr(0, us));
    if (!t || !is_object_trait(*t)) return std::nullopt;
    auto v = value_from_label(*t, s.substr(us + 1));
    if (!v) return std::nullopt;
    return with(*t, *v);
  }

  friend auto operator<=>(const Category&, const Category&) = default;
};

enum class Scope : std::uint8_t { Row, Column };

inline constexpr std::string_view scope_name(Scope s) { return s == Scope::Row ? "row" : "column"; }

/// hasOperator: a (category, trait) pair obeys an operator along rows or columns.
struct Rule {
  Category category;
  Trait trait = Trait::Shape;
  Operator op;
  Scope scope = Scope::Row;

  std::string describe() const {
    return std::string(scope_name(scope)) + " " + category.name() + " " +
           std::string(trait_name(trait)) + " " + op.name();
  }

  friend auto operator<=>(const Rule&, const Rule&) = default;
};

struct Provenance {
  std::string origin = "generator";
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::uint64_t spec_hash = 0;
  std::uint32_t rejections = 0;
  std::vector<Rule> planted;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Eight given cells, an ordered candidate list, and the index of the true answer.
struct Problem {
  Grid grid;
  std::vector<Cell> candidates;
  std::size_t truth = 0;
  Provenance provenance;

  const Cell& truth_cell() const { return candidates.at(truth); }

  void validate() const {
    if (candidates.empty()) throw std::invalid_argument("problem has no candidates");
    if (truth >= candidates.size()) throw std::invalid_argument("truth index out of range");
  }

  friend bool operator==(const Problem&, const Problem&) = default;
};

}  // namespace arr
