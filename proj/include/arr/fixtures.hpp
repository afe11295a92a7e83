#pragma once

#include <array>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arr/model.hpp"

namespace arr {

/// Hand-authored problems reproducing the logical structure of the classic
/// demonstration puzzles (not their pixels).
enum class FixtureName { LatinSquare, Union, SymDiff, MultiRule };

inline constexpr std::array<FixtureName, 4> kFixtures{FixtureName::LatinSquare, FixtureName::Union,
                                                      FixtureName::SymDiff, FixtureName::MultiRule};

inline std::string_view fixture_name(FixtureName f) {
  switch (f) {
    case FixtureName::LatinSquare: return "latin_square";
    case FixtureName::Union: return "union";
    case FixtureName::SymDiff: return "symdiff";
    case FixtureName::MultiRule: return "multi_rule";
  }
  return "?";
}

inline std::optional<FixtureName> fixture_from_name(std::string_view s) {
  for (auto f : kFixtures)
    if (fixture_name(f) == s) return f;
  return std::nullopt;
}

namespace detail {

// Vocabulary codes used below.
enum : std::uint8_t { circle, square, triangle, diamond, star, cross };
enum : std::uint8_t { black, gray, red, green, blue, yellow };
enum : std::uint8_t { solid, hollow, hatched };
enum : std::uint8_t { small, medium, large };

inline ObjectSpec make_object(std::uint8_t layer, std::uint8_t slot, std::uint8_t shape,
                              std::uint8_t color, std::uint8_t fill, std::uint8_t rotation,
                              std::uint8_t size) {
  ObjectSpec o;
  o.layer = layer;
  o.slot = slot;
  o.values = {shape, color, fill, rotation, size};
  return o;
}

/// Presence-puzzle cells: black objects whose slot is fixed by their shape.
inline Cell keyed_cell(std::initializer_list<std::uint8_t> shapes, std::uint8_t layer = 0) {
  static constexpr std::array<std::uint8_t, 6> kSlotOf{1, 2, 3, 4, 5, 0};
  std::vector<ObjectSpec> objs;
  for (auto s : shapes) objs.push_back(make_object(layer, kSlotOf[s], s, black, solid, 0, medium));
  return Cell(std::move(objs));
}

inline Rule planted(Category c, Trait t, Operator op) { return {c, t, op, Scope::Row}; }

inline Problem latin_square() {
  constexpr std::array<std::uint8_t, 3> shapes{circle, square, triangle};
  constexpr std::array<std::uint8_t, 3> rotations{0, 1, 2};
  constexpr std::array<std::uint8_t, 3> colors{black, red, blue};
  constexpr std::array<std::uint8_t, 3> fills{solid, hatched, hollow};
  auto at = [&](int r, int c) {
    const auto s = shapes[(r + c) % 3];
    const auto k = (2 * r + c) % 3;  // rotation and color/fill move together
    return Cell({make_object(0, 0, s, colors[k], fills[k], rotations[k], large)});
  };
  Problem p;
  for (int i = 0; i < 8; ++i) p.grid[i] = at(i / 3, i % 3);
  const Cell truth = at(2, 2);  // square, r0, black, solid
  auto one = [](std::uint8_t s, std::uint8_t c, std::uint8_t f, std::uint8_t rot, std::uint8_t sz) {
    return Cell({make_object(0, 0, s, c, f, rot, sz)});
  };
  p.candidates = {
      one(triangle, black, solid, 0, large),  // repeats a row-3 shape
      one(square, black, solid, 1, large),    // rotation already used
      one(square, red, solid, 0, large),
      one(square, black, hollow, 0, large),
      one(circle, black, solid, 0, large),  // repeats a row-3 shape
      truth,
      one(square, blue, hollow, 2, large),
      one(square, black, solid, 0, medium),
  };
  p.truth = 5;
  p.provenance.origin = "fixture:latin_square";
  p.provenance.planted = {planted(Category::all(), Trait::Shape, {OpKind::NotSymDiff, 0}),
                          planted(Category::all(), Trait::Rotation, {OpKind::NotSymDiff, 0}),
                          planted(Category::all(), Trait::Color, {OpKind::NotSymDiff, 0}),
                          planted(Category::all(), Trait::Fill, {OpKind::NotSymDiff, 0})};
  return p;
}

inline Problem union_fixture() {
  Problem p;
  p.grid = {keyed_cell({circle, square}),  keyed_cell({triangle, square}),
            keyed_cell({circle, square, triangle}),
            keyed_cell({diamond, star}),   keyed_cell({circle, star}),
            keyed_cell({diamond, circle, star}),
            keyed_cell({square, diamond}), keyed_cell({triangle, diamond})};
  p.candidates = {
      keyed_cell({square, triangle}),
      keyed_cell({square, diamond, triangle, star}),
      keyed_cell({diamond}),
      keyed_cell({square, diamond, triangle}),  // truth
      keyed_cell({square, triangle, cross}),
      keyed_cell({square, circle, triangle}),
      keyed_cell({diamond, triangle}),
      keyed_cell({square, diamond, circle, triangle}),
  };
  p.truth = 3;
  p.provenance.origin = "fixture:union";
  p.provenance.planted = {planted(Category::all(), Trait::Presence, {OpKind::Union, 0})};
  return p;
}

inline Problem symdiff_fixture() {
  Problem p;
  p.grid = {keyed_cell({circle, square}),  keyed_cell({square, triangle}),
            keyed_cell({circle, triangle}),
            keyed_cell({diamond, star}),   keyed_cell({star, circle}),
            keyed_cell({diamond, circle}),
            keyed_cell({square, diamond}), keyed_cell({diamond, triangle})};
  p.candidates = {
      keyed_cell({square, diamond, triangle}),  // union, not symdiff
      keyed_cell({square, triangle}),           // truth
      keyed_cell({diamond}),
      keyed_cell({square}),
      keyed_cell({square, triangle, star}),
      keyed_cell({triangle, circle}),
      keyed_cell({square, triangle, cross}),
      keyed_cell({circle, star}),
  };
  p.truth = 1;
  p.provenance.origin = "fixture:symdiff";
  p.provenance.planted = {planted(Category::all(), Trait::Presence, {OpKind::SymDiff, 0})};
  return p;
}

/// Gray background objects follow a Latin square on shape and rotation while
/// keeping color and fill; black foreground objects follow presence union.
inline Problem multi_rule() {
  constexpr std::array<std::uint8_t, 3> shapes{square, diamond, triangle};
  constexpr std::array<std::uint8_t, 3> rotations{0, 2, 4};
  auto back = [&](int r, int c) {
    return make_object(0, 0, shapes[(r + c) % 3], gray, hatched, rotations[(r + 2 * c) % 3], large);
  };
  auto cell = [&](int r, int c, std::initializer_list<std::uint8_t> front) {
    std::vector<ObjectSpec> objs{back(r, c)};
    const Cell fg = keyed_cell(front, 1);
    objs.insert(objs.end(), fg.objects().begin(), fg.objects().end());
    return Cell(std::move(objs));
  };
  Problem p;
  p.grid = {cell(0, 0, {circle, star}),  cell(0, 1, {triangle}),       cell(0, 2, {circle, star, triangle}),
            cell(1, 0, {square}),        cell(1, 1, {square, circle}), cell(1, 2, {square, circle}),
            cell(2, 0, {star, square}),  cell(2, 1, {triangle})};
  const Cell truth = cell(2, 2, {star, square, triangle});
  auto with_back = [&](ObjectSpec b, std::initializer_list<std::uint8_t> front) {
    std::vector<ObjectSpec> objs{b};
    const Cell fg = keyed_cell(front, 1);
    objs.insert(objs.end(), fg.objects().begin(), fg.objects().end());
    return Cell(std::move(objs));
  };
  const ObjectSpec good_back = back(2, 2);
  ObjectSpec wrong_shape = good_back;
  wrong_shape.set(Trait::Shape, square);
  ObjectSpec wrong_rotation = good_back;
  wrong_rotation.set(Trait::Rotation, 2);
  ObjectSpec wrong_fill = good_back;
  wrong_fill.set(Trait::Fill, solid);
  p.candidates = {
      with_back(good_back, {star, square}),
      with_back(wrong_shape, {star, square, triangle}),
      with_back(good_back, {star, square, triangle, circle}),
      with_back(wrong_rotation, {star, square, triangle}),
      with_back(good_back, {square, triangle}),
      with_back(wrong_fill, {star, square, triangle}),
      truth,
      with_back(good_back, {star, triangle, cross}),
  };
  p.truth = 6;
  p.provenance.origin = "fixture:multi_rule";
  const auto g = Category::with(Trait::Color, gray);
  p.provenance.planted = {
      planted(g, Trait::Shape, {OpKind::NotSymDiff, 0}),
      planted(g, Trait::Rotation, {OpKind::NotSymDiff, 0}),
      planted(g, Trait::Color, {OpKind::Union, 0}),
      planted(g, Trait::Fill, {OpKind::Union, 0}),
      planted(Category::with(Trait::Color, black), Trait::Presence, {OpKind::Union, 0})};
  return p;
}

}  // namespace detail

inline Problem fixture(FixtureName name) {
  switch (name) {
    case FixtureName::LatinSquare: return detail::latin_square();
    case FixtureName::Union: return detail::union_fixture();
    case FixtureName::SymDiff: return detail::symdiff_fixture();
    case FixtureName::MultiRule: return detail::multi_rule();
  }
  throw std::invalid_argument("unknown fixture");
}

}  // namespace arr
