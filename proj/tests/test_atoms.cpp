#include <gtest/gtest.h>

#include <functional>

#include "arr/atoms.hpp"
#include "arr/fixtures.hpp"
#include "arr/generator.hpp"
#include "golden_io.hpp"

using namespace arr;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  return s;
}

int line_of(const std::vector<std::string>& lines, const std::string& exact) {
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (lines[i] == exact) return static_cast<int>(i) + 1;
  ADD_FAILURE() << "no line " << exact;
  return 0;
}

struct Damage {
  std::string name;
  std::function<std::vector<std::string>(std::vector<std::string>)> edit;
  ParseErrorKind kind;
  std::function<int(const std::vector<std::string>&)> line;  // on the edited text
  int column;
};

}  // namespace

TEST(Atoms, RoundTripGenerated) {
  GeneratorSpec spec;
  spec.seed = 21;
  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto p = sample_problem(spec, i);
    const auto text = encode_atoms(p);
    const auto doc = parse_atoms(text);
    EXPECT_TRUE(doc.has_truth);
    EXPECT_EQ(doc.problem, p) << "index " << i;
    EXPECT_EQ(encode_atoms(doc.problem), text);
  }
}

TEST(Atoms, RoundTripFixtures) {
  for (auto f : kFixtures) {
    const auto p = fixture(f);
    EXPECT_EQ(decode_atoms(encode_atoms(p)), p) << fixture_name(f);
  }
}

TEST(Atoms, ObservationFilesCarryNoTruth) {
  const auto p = fixture(FixtureName::Union);
  const auto doc = parse_atoms(encode_atoms(p, false));
  EXPECT_FALSE(doc.has_truth);
  EXPECT_EQ(doc.problem.grid, p.grid);
  EXPECT_EQ(doc.problem.candidates, p.candidates);
}

TEST(Atoms, ToleratesCommentsAndSpacing) {
  auto lines = lines_of(encode_atoms(fixture(FixtureName::SymDiff)));
  std::vector<std::string> noisy{"% leading comment", ""};
  for (const auto& l : lines) {
    noisy.push_back("  " + l + "   % trailing");
    noisy.push_back("");
  }
  EXPECT_EQ(decode_atoms(join(noisy)), fixture(FixtureName::SymDiff));
}

TEST(Atoms, FactOrderDoesNotMatter) {
  auto lines = lines_of(encode_atoms(fixture(FixtureName::MultiRule)));
  // Keep format first and declarations before use; shuffle the argument facts.
  std::vector<std::string> head, args;
  for (const auto& l : lines) (l.rfind("argument(", 0) == 0 ? args : head).push_back(l);
  std::reverse(args.begin(), args.end());
  head.insert(head.end(), args.begin(), args.end());
  EXPECT_EQ(decode_atoms(join(head)), fixture(FixtureName::MultiRule));
}

TEST(Atoms, Diagnostics) {
  const auto base = lines_of(encode_atoms(fixture(FixtureName::Union)));
  auto replace = [](std::string from, std::string to) {
    return [from, to](std::vector<std::string> l) {
      for (auto& x : l)
        if (x == from) x = to;
      return l;
    };
  };
  auto insert_after = [](std::string anchor, std::vector<std::string> extra) {
    return [anchor, extra](std::vector<std::string> l) {
      auto it = std::find(l.begin(), l.end(), anchor);
      l.insert(it + 1, extra.begin(), extra.end());
      return l;
    };
  };
  auto at = [](std::string exact) { return [exact](const std::vector<std::string>& l) { return line_of(l, exact); }; };
  auto end = [](const std::vector<std::string>& l) { return static_cast<int>(l.size()) + 1; };

  std::vector<std::string> crowd;
  for (int j = 0; j < 5; ++j) {
    const std::string id = "x" + std::to_string(j);
    crowd.push_back("object(" + id + ", 1).");
    crowd.push_back("belongs(" + id + ", layer(2)).");
    crowd.push_back("belongs(" + id + ", slot(" + std::to_string(j) + ")).");
    for (auto a : {"shape, circle", "color, red", "fill, solid", "rotation, r0", "size, small"})
      crowd.push_back("argument(" + id + ", " + a + ").");
  }

  const std::vector<Damage> cases{
      {"syntax", replace("seed(0).", "seed(0)"), ParseErrorKind::Syntax, at("seed(0)"), 8},
      {"unknown-predicate", insert_after("truth(4).", {"colour(o1_1, red)."}), ParseErrorKind::UnknownPredicate,
       at("colour(o1_1, red)."), 1},
      {"bad-arity", replace("seed(0).", "seed(1, 2)."), ParseErrorKind::BadArity, at("seed(1, 2)."), 1},
      {"unsupported-version", replace("format(arr_atoms, 1).", "format(arr_atoms, 2)."),
       ParseErrorKind::UnsupportedVersion, [](auto&) { return 1; }, 19},
      {"vocabulary-mismatch", replace("vocabulary(fill, solid, hollow, hatched).", "vocabulary(fill, solid, hollow)."),
       ParseErrorKind::VocabularyMismatch, at("vocabulary(fill, solid, hollow)."), 12},
      {"unknown-trait", insert_after("object(o1_1, 1).", {"argument(o1_1, texture, rough)."}),
       ParseErrorKind::UnknownTrait, at("argument(o1_1, texture, rough)."), 16},
      {"unknown-value", replace("argument(o1_1, color, black).", "argument(o1_1, color, purple)."),
       ParseErrorKind::UnknownValue, at("argument(o1_1, color, purple)."), 23},
      {"duplicate-id", insert_after("object(o1_1, 1).", {"object(o1_1, 2)."}), ParseErrorKind::DuplicateId,
       at("object(o1_1, 2)."), 8},
      {"unknown-object", insert_after("object(o1_1, 1).", {"belongs(zz_1, layer(0))."}),
       ParseErrorKind::UnknownObject, at("belongs(zz_1, layer(0))."), 9},
      {"duplicate-fact", insert_after("seed(0).", {"seed(0)."}), ParseErrorKind::DuplicateFact,
       [](const auto& l) { return line_of(l, "seed(0).") + 1; }, 1},
      {"bad-index", replace("truth(4).", "truth(9)."), ParseErrorKind::BadIndex, at("truth(9)."), 7},
      {"missing-cells",
       [](std::vector<std::string> l) {
         std::erase_if(l, [](const std::string& x) { return x == "cell(8)." || x.find("o8_") != std::string::npos; });
         return l;
       },
       ParseErrorKind::MissingCells, end, 1},
      {"too-many-objects", insert_after("argument(o1_2, size, medium).", crowd), ParseErrorKind::TooManyObjects,
       at("object(x4, 1)."), 8},
      {"incomplete-object",
       [](std::vector<std::string> l) {
         std::erase(l, std::string("argument(o1_1, size, medium)."));
         return l;
       },
       ParseErrorKind::IncompleteObject, at("object(o1_1, 1)."), 8},
      {"invalid-cell", replace("belongs(o1_2, slot(2)).", "belongs(o1_2, slot(1))."), ParseErrorKind::InvalidCell,
       at("object(o1_1, 1)."), 1},
  };
  ASSERT_EQ(cases.size(), 15u);
  for (const auto& c : cases) {
    const auto edited = c.edit(base);
    ASSERT_NE(edited, base) << c.name;
    try {
      decode_atoms(join(edited));
      ADD_FAILURE() << c.name << ": no error";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.kind(), c.kind) << c.name << ": " << e.what();
      EXPECT_EQ(e.line(), c.line(edited)) << c.name << ": " << e.what();
      EXPECT_EQ(e.column(), c.column) << c.name << ": " << e.what();
      EXPECT_NE(std::string(e.what()).find(std::string(parse_error_kind_name(c.kind))), std::string::npos);
      EXPECT_EQ(c.name, parse_error_kind_name(c.kind));
    }
  }
}

TEST(Atoms, RejectsEmptyAndMissingFormat) {
  EXPECT_THROW(decode_atoms(""), ParseError);
  EXPECT_THROW(decode_atoms("cell(1).\n"), ParseError);
  EXPECT_THROW(decode_atoms("format(arr_atoms, 1).\n\"x\".\n"), ParseError);
}

TEST(Atoms, ExportAspGolden) {
  const auto text = export_asp(fixture(FixtureName::LatinSquare));
  EXPECT_EQ(text.find("truth("), std::string::npos);
  EXPECT_EQ(text.find("seed("), std::string::npos);
  expect_golden("latin_square.lp", text);
}

TEST(Atoms, EncodeStartsWithFormatAndVocabulary) {
  const auto lines = lines_of(encode_atoms(fixture(FixtureName::Union)));
  ASSERT_GT(lines.size(), 6u);
  EXPECT_EQ(lines[0], "format(arr_atoms, 1).");
  EXPECT_EQ(lines[1], "vocabulary(shape, circle, square, triangle, diamond, star, cross).");
  EXPECT_EQ(lines.back(), "truth(4).");
}
