#include <gtest/gtest.h>

#include "arr/model.hpp"

using namespace arr;

TEST(Vocabulary, DomainSizes) {
  EXPECT_EQ(domain_size(Trait::Shape), 6u);
  EXPECT_EQ(domain_size(Trait::Color), 6u);
  EXPECT_EQ(domain_size(Trait::Fill), 3u);
  EXPECT_EQ(domain_size(Trait::Rotation), 8u);
  EXPECT_EQ(domain_size(Trait::Size), 3u);
  EXPECT_EQ(domain_size(Trait::Count), 7u);
  EXPECT_EQ(domain_size(Trait::Presence), kMaxLayers * kShapeCount * kMaxSlots);
}

TEST(Vocabulary, NumericAndCyclicFlags) {
  EXPECT_TRUE(trait_info(Trait::Rotation).numeric);
  EXPECT_TRUE(trait_info(Trait::Rotation).cyclic);
  EXPECT_TRUE(trait_info(Trait::Size).numeric);
  EXPECT_FALSE(trait_info(Trait::Size).cyclic);
  EXPECT_TRUE(trait_info(Trait::Count).numeric);
  EXPECT_FALSE(trait_info(Trait::Shape).numeric);
  EXPECT_TRUE(trait_info(Trait::Presence).pseudo);
  EXPECT_FALSE(is_object_trait(Trait::Count));
}

TEST(Vocabulary, NamesRoundTrip) {
  for (Trait t : kAllTraits) EXPECT_EQ(trait_from_name(trait_name(t)), t);
  EXPECT_FALSE(trait_from_name("texture"));
  for (Trait t : kObjectTraits)
    for (std::uint16_t v = 0; v < domain_size(t); ++v)
      EXPECT_EQ(value_from_label(t, value_label(t, v)), v);
  EXPECT_THROW(value_label(Trait::Fill, 3), std::out_of_range);
}

TEST(Vocabulary, PresenceKeys) {
  EXPECT_EQ(presence_key(1, 2, 5, IdentityKey::LayerShape), 8);
  EXPECT_EQ(presence_key(1, 2, 5, IdentityKey::LayerShapeSlot), 53);
  EXPECT_EQ(presence_label(8, IdentityKey::LayerShape), "l1_triangle");
  EXPECT_EQ(presence_label(53, IdentityKey::LayerShapeSlot), "l1_triangle_s5");
}

TEST(Category, ParseNameRoundTrip) {
  std::vector<Category> cats{Category::all(), Category::layer(3), Category::slot(5),
                             Category::with(Trait::Color, 1), Category::with(Trait::Rotation, 7)};
  for (const auto& c : cats) EXPECT_EQ(Category::parse(c.name()), c) << c.name();
  EXPECT_EQ(Category::with(Trait::Color, 1).name(), "color_gray");
  EXPECT_FALSE(Category::parse("layer4"));
  EXPECT_FALSE(Category::parse("presence_x"));
  EXPECT_THROW(Category::with(Trait::Count, 1), std::invalid_argument);
}

TEST(Category, Selects) {
  ObjectSpec o;
  o.layer = 1;
  o.slot = 4;
  o.set(Trait::Color, 2);
  EXPECT_TRUE(Category::all().selects(o));
  EXPECT_TRUE(Category::layer(1).selects(o));
  EXPECT_FALSE(Category::layer(0).selects(o));
  EXPECT_TRUE(Category::slot(4).selects(o));
  EXPECT_TRUE(Category::with(Trait::Color, 2).selects(o));
  EXPECT_FALSE(Category::with(Trait::Color, 3).selects(o));
}

TEST(Operator, ParseNames) {
  for (OpKind k : kSetOps) EXPECT_EQ(Operator::parse(op_name(k)), (Operator{k, 0}));
  EXPECT_EQ(Operator::parse("progression(7)"), Operator::progression(7));
  EXPECT_FALSE(Operator::parse("progression(0)"));
  EXPECT_FALSE(Operator::parse("progression()"));
  EXPECT_FALSE(Operator::parse("progression(x)"));
  EXPECT_FALSE(Operator::parse("xor"));
}

TEST(Cell, SortsByIdentityAndValidates) {
  ObjectSpec a, b;
  a.layer = 1;
  b.slot = 3;
  const Cell c({a, b});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.objects()[0].layer, 0);
  EXPECT_EQ(c.find(1, 0)->layer, 1);
  EXPECT_EQ(c.find(2, 0), nullptr);
  EXPECT_THROW(Cell({a, a}), std::invalid_argument);
  std::vector<ObjectSpec> seven(7);
  for (std::size_t i = 0; i < 7; ++i) seven[i].layer = static_cast<std::uint8_t>(i % 4), seven[i].slot = static_cast<std::uint8_t>(i / 4);
  EXPECT_THROW(Cell{seven}, std::invalid_argument);
  ObjectSpec bad;
  bad.set(Trait::Fill, 3);
  EXPECT_THROW(Cell({bad}), std::invalid_argument);
  bad = {};
  bad.slot = 6;
  EXPECT_THROW(Cell({bad}), std::invalid_argument);
}

TEST(Problem, Validate) {
  Problem p;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.candidates.resize(2);
  p.truth = 2;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.truth = 1;
  EXPECT_NO_THROW(p.validate());
}
