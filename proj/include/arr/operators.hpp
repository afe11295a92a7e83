#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arr/model.hpp"

namespace arr {

class OperatorError : public std::domain_error {
 public:
  enum class Kind { TraitMismatch, WrongOperator, NotSubset, BadProgression };

  OperatorError(Kind kind, const std::string& what) : std::domain_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

namespace detail {

inline CodeBits apply_set_op(OpKind kind, const CodeBits& a, const CodeBits& b,
                             const CodeBits& universe) {
  switch (kind) {
    case OpKind::Union: return a | b;
    case OpKind::Intersection: return a & b;
    case OpKind::SymDiff: return a ^ b;
    case OpKind::NotUnion: return universe - (a | b);
    case OpKind::NotIntersection: return universe - (a & b);
    case OpKind::NotSymDiff: return universe - (a ^ b);
    case OpKind::Progression: break;
  }
  throw OperatorError(OperatorError::Kind::WrongOperator,
                      "progression is not a set operator; use progression_value");
}

}  // namespace detail

/// Applies one of the six set operators. Not-variants complement relative to
/// `universe`, so the result is always a subset of it.
inline ValueSet apply_operator(Operator m, const ValueSet& s1, const ValueSet& s2,
                               const ValueSet& universe) {
  if (m.kind == OpKind::Progression)
    throw OperatorError(OperatorError::Kind::WrongOperator,
                        "progression is not a set operator; use progression_value");
  if (s1.trait != s2.trait || s1.trait != universe.trait)
    throw OperatorError(OperatorError::Kind::TraitMismatch,
                        "operands over different traits: " + std::string(trait_name(s1.trait)) +
                            ", " + std::string(trait_name(s2.trait)) + ", " +
                            std::string(trait_name(universe.trait)));
  if (!s1.subset_of(universe) || !s2.subset_of(universe))
    throw OperatorError(OperatorError::Kind::NotSubset, "operand outside the universe");
  ValueSet out(s1.trait);
  out.members = detail::apply_set_op(m.kind, s1.members, s2.members, universe.members);
  return out;
}

/// y = a*x for the 1-based line position x. Cyclic traits wrap modulo |V(t)|;
/// for the others an out-of-domain result means the operator does not apply.
inline std::optional<std::uint16_t> progression_value(int a, int position, Trait t) {
  const auto info = trait_info(t);
  if (!info.numeric)
    throw OperatorError(OperatorError::Kind::BadProgression,
                        std::string(info.name) + " has no numeric interpretation");
  if (a < 1) throw OperatorError(OperatorError::Kind::BadProgression, "progression step below 1");
  if (position < 1 || position > 3)
    throw OperatorError(OperatorError::Kind::BadProgression, "line position outside 1..3");
  const auto n = static_cast<int>(domain_size(t));
  const int y = a * position;
  if (info.cyclic) return static_cast<std::uint16_t>(y % n);
  if (y >= n) return std::nullopt;
  return static_cast<std::uint16_t>(y);
}

inline std::vector<std::pair<std::uint8_t, std::uint8_t>> category_members(const Category& c,
                                                                           const Cell& cell) {
  std::vector<std::pair<std::uint8_t, std::uint8_t>> out;
  for (const auto& o : cell.objects())
    if (c.selects(o)) out.push_back(o.identity());
  return out;
}

/// A(c,t) for one cell. Presence yields identity keys; count yields the
/// singleton {number of selected objects}.
inline ValueSet project_argument(const Cell& cell, const Category& c, Trait t,
                                 IdentityKey mode = IdentityKey::LayerShape) {
  ValueSet out(t);
  std::uint16_t n = 0;
  for (const auto& o : cell.objects()) {
    if (!c.selects(o)) continue;
    ++n;
    if (t == Trait::Presence)
      out.insert(o.key(mode));
    else if (t != Trait::Count)
      out.insert(o.get(t));
  }
  if (t == Trait::Count) out.insert(n);
  return out;
}

}  // namespace arr
