#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace arr {

/// Registered traits. The first five are carried by every object; `presence`
/// and `count` are pseudo-traits derived from which objects a category selects.
enum class Trait : std::uint8_t { Shape, Color, Fill, Rotation, Size, Presence, Count };

inline constexpr std::size_t kTraitCount = 7;
inline constexpr std::size_t kObjectTraitCount = 5;

inline constexpr std::array<Trait, kTraitCount> kAllTraits{
    Trait::Shape, Trait::Color,    Trait::Fill, Trait::Rotation,
    Trait::Size,  Trait::Presence, Trait::Count};

inline constexpr std::array<Trait, kObjectTraitCount> kObjectTraits{
    Trait::Shape, Trait::Color, Trait::Fill, Trait::Rotation, Trait::Size};

inline constexpr std::size_t kMaxObjectsPerCell = 6;
inline constexpr std::size_t kMaxSlots = 6;
inline constexpr std::size_t kMaxLayers = 4;

namespace detail {

inline constexpr std::array<std::string_view, 6> kShapeLabels{
    "circle", "square", "triangle", "diamond", "star", "cross"};
inline constexpr std::array<std::string_view, 6> kColorLabels{
    "black", "gray", "red", "green", "blue", "yellow"};
inline constexpr std::array<std::string_view, 3> kFillLabels{"solid", "hollow", "hatched"};
inline constexpr std::array<std::string_view, 8> kRotationLabels{
    "r0", "r45", "r90", "r135", "r180", "r225", "r270", "r315"};
inline constexpr std::array<std::string_view, 3> kSizeLabels{"small", "medium", "large"};
inline constexpr std::array<std::string_view, 7> kCountLabels{"0", "1", "2", "3", "4", "5", "6"};

}  // namespace detail

inline constexpr std::size_t kShapeCount = detail::kShapeLabels.size();

/// How objects are matched across cells for the presence pseudo-trait.
enum class IdentityKey : std::uint8_t { LayerShape, LayerShapeSlot };

inline constexpr std::size_t kPresenceCodes = kMaxLayers * kShapeCount * kMaxSlots;

struct TraitInfo {
  std::string_view name;
  std::span<const std::string_view> labels;  // empty for presence
  bool numeric;
  bool cyclic;
  bool pseudo;
};

inline constexpr TraitInfo trait_info(Trait t) {
  switch (t) {
    case Trait::Shape: return {"shape", detail::kShapeLabels, false, false, false};
    case Trait::Color: return {"color", detail::kColorLabels, false, false, false};
    case Trait::Fill: return {"fill", detail::kFillLabels, false, false, false};
    case Trait::Rotation: return {"rotation", detail::kRotationLabels, true, true, false};
    case Trait::Size: return {"size", detail::kSizeLabels, true, false, false};
    case Trait::Presence: return {"presence", {}, false, false, true};
    case Trait::Count: return {"count", detail::kCountLabels, true, false, true};
  }
  throw std::logic_error("unregistered trait");
}

inline constexpr std::string_view trait_name(Trait t) { return trait_info(t).name; }

inline constexpr std::size_t trait_index(Trait t) { return static_cast<std::size_t>(t); }

inline constexpr bool is_object_trait(Trait t) { return trait_index(t) < kObjectTraitCount; }

/// |V(t)|. The presence domain is the identity-key code space.
inline constexpr std::size_t domain_size(Trait t) {
  return t == Trait::Presence ? kPresenceCodes : trait_info(t).labels.size();
}

inline std::optional<Trait> trait_from_name(std::string_view name) {
  for (Trait t : kAllTraits)
    if (trait_name(t) == name) return t;
  return std::nullopt;
}

inline std::optional<std::uint8_t> value_from_label(Trait t, std::string_view label) {
  const auto labels = trait_info(t).labels;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<std::uint8_t>(i);
  return std::nullopt;
}

inline std::uint16_t presence_key(std::uint8_t layer, std::uint8_t shape, std::uint8_t slot,
                                  IdentityKey mode) {
  const auto base = static_cast<std::uint16_t>(layer * kShapeCount + shape);
  return mode == IdentityKey::LayerShape ? base
                                          : static_cast<std::uint16_t>(base * kMaxSlots + slot);
}

inline std::string presence_label(std::uint16_t code, IdentityKey mode) {
  std::size_t slot = 0;
  if (mode == IdentityKey::LayerShapeSlot) {
    slot = code % kMaxSlots;
    code = static_cast<std::uint16_t>(code / kMaxSlots);
  }
  std::string out = "l" + std::to_string(code / kShapeCount) + "_" +
                    std::string(detail::kShapeLabels[code % kShapeCount]);
  if (mode == IdentityKey::LayerShapeSlot) out += "_s" + std::to_string(slot);
  return out;
}

/// One element of V(t).
struct Value {
  Trait trait;
  std::uint16_t code;

  friend bool operator==(const Value&, const Value&) = default;
};

inline std::string value_label(Trait t, std::uint16_t code,
                               IdentityKey mode = IdentityKey::LayerShape) {
  if (t == Trait::Presence) return presence_label(code, mode);
  const auto labels = trait_info(t).labels;
  if (code >= labels.size())
    throw std::out_of_range("value code " + std::to_string(code) + " outside " +
                            std::string(trait_name(t)));
  return std::string(labels[code]);
}

/// A trait/value pair attached to an object.
struct State {
  Trait trait;
  Value value;
};

}  // namespace arr
