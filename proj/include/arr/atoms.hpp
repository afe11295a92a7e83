#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arr/model.hpp"

namespace arr {

inline constexpr int kAtomsFormatVersion = 1;

enum class ParseErrorKind {
  Syntax,
  UnknownPredicate,
  BadArity,
  UnsupportedVersion,
  VocabularyMismatch,
  UnknownTrait,
  UnknownValue,
  DuplicateId,
  UnknownObject,
  DuplicateFact,
  BadIndex,
  MissingCells,
  TooManyObjects,
  IncompleteObject,
  InvalidCell,
};

inline std::string_view parse_error_kind_name(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::Syntax: return "syntax";
    case ParseErrorKind::UnknownPredicate: return "unknown-predicate";
    case ParseErrorKind::BadArity: return "bad-arity";
    case ParseErrorKind::UnsupportedVersion: return "unsupported-version";
    case ParseErrorKind::VocabularyMismatch: return "vocabulary-mismatch";
    case ParseErrorKind::UnknownTrait: return "unknown-trait";
    case ParseErrorKind::UnknownValue: return "unknown-value";
    case ParseErrorKind::DuplicateId: return "duplicate-id";
    case ParseErrorKind::UnknownObject: return "unknown-object";
    case ParseErrorKind::DuplicateFact: return "duplicate-fact";
    case ParseErrorKind::BadIndex: return "bad-index";
    case ParseErrorKind::MissingCells: return "missing-cells";
    case ParseErrorKind::TooManyObjects: return "too-many-objects";
    case ParseErrorKind::IncompleteObject: return "incomplete-object";
    case ParseErrorKind::InvalidCell: return "invalid-cell";
  }
  return "?";
}

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, int line, int column, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + std::string(parse_error_kind_name(kind)) + ": " + reason),
        kind_(kind),
        line_(line),
        column_(column),
        reason_(reason) {}

  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& reason() const { return reason_; }

 private:
  ParseErrorKind kind_;
  int line_;
  int column_;
  std::string reason_;
};

/// A decoded document. Observation files carry no truth fact.
struct AtomsDocument {
  Problem problem;
  bool has_truth = false;
};

namespace detail {

inline std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
  return s;
}

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline void emit_vocabulary(std::ostream& os) {
  for (Trait t : kObjectTraits) {
    os << "vocabulary(" << trait_name(t);
    for (auto label : trait_info(t).labels) os << ", " << label;
    os << ").\n";
  }
}

inline void emit_object(std::ostream& os, const std::string& id, std::string_view holder,
                        std::size_t index, const ObjectSpec& o) {
  os << holder << "(" << id << ", " << index << ").\n";
  os << "belongs(" << id << ", layer(" << int(o.layer) << ")).\n";
  os << "belongs(" << id << ", slot(" << int(o.slot) << ")).\n";
  for (Trait t : kObjectTraits)
    os << "argument(" << id << ", " << trait_name(t) << ", " << value_label(t, o.get(t)) << ").\n";
}

inline void emit_body(std::ostream& os, const Problem& p) {
  for (std::size_t c = 1; c <= kGivenCells; ++c) os << "cell(" << c << ").\n";
  for (std::size_t k = 1; k <= p.candidates.size(); ++k) os << "answer(" << k << ").\n";
  for (std::size_t c = 0; c < kGivenCells; ++c) {
    std::size_t j = 0;
    for (const auto& o : p.grid[c].objects())
      emit_object(os, "o" + std::to_string(c + 1) + "_" + std::to_string(++j), "object", c + 1, o);
  }
  for (std::size_t k = 0; k < p.candidates.size(); ++k) {
    std::size_t j = 0;
    for (const auto& o : p.candidates[k].objects())
      emit_object(os, "a" + std::to_string(k + 1) + "_" + std::to_string(++j), "candidate", k + 1, o);
  }
}

}  // namespace detail

/// Canonical text: one fact per line, fixed fact order, objects in identity order.
inline std::string encode_atoms(const Problem& p, bool include_truth = true) {
  p.validate();
  std::ostringstream os;
  os << "format(arr_atoms, " << kAtomsFormatVersion << ").\n";
  detail::emit_vocabulary(os);
  const auto& pv = p.provenance;
  os << "origin(" << detail::quote(pv.origin) << ").\n";
  os << "seed(" << pv.seed << ").\n";
  os << "index(" << pv.index << ").\n";
  os << "spec_hash(\"" << detail::hex64(pv.spec_hash) << "\").\n";
  os << "rejections(" << pv.rejections << ").\n";
  for (const auto& r : pv.planted)
    os << "planted(" << scope_name(r.scope) << ", " << r.category.name() << ", "
       << trait_name(r.trait) << ", " << r.op.name() << ").\n";
  detail::emit_body(os, p);
  if (include_truth) os << "truth(" << p.truth + 1 << ").\n";
  return os.str();
}

/// The problem's facts in ASP syntax for use with an external solver. Only the
/// dynamic part is produced; truth and provenance are left out.
inline std::string export_asp(const Problem& p) {
  p.validate();
  std::ostringstream os;
  os << "% arr problem facts (dynamic part), atoms format " << kAtomsFormatVersion << "\n";
  detail::emit_body(os, p);
  return os.str();
}

namespace detail {

struct Term {
  std::string text;  // name, number, or unquoted string contents
  bool quoted = false;
  std::vector<Term> args;
  int column = 1;

  bool is_atom() const { return !quoted && args.empty(); }
  std::string str() const {
    if (quoted) return quote(text);
    if (args.empty()) return text;
    std::string s = text + "(";
    for (std::size_t i = 0; i < args.size(); ++i) s += (i ? ", " : "") + args[i].str();
    return s + ")";
  }
};

class FactReader {
 public:
  FactReader(std::string_view line, int line_no) : s_(line), line_(line_no) {}

  /// nullopt for blank or comment-only lines.
  std::optional<Term> read() {
    skip_ws();
    if (at_end() || s_[pos_] == '%') return std::nullopt;
    Term t = term();
    if (t.quoted) fail("a fact must start with a predicate name");
    skip_ws();
    if (at_end() || s_[pos_] != '.') fail("expected '.' at end of fact");
    ++pos_;
    skip_ws();
    if (!at_end() && s_[pos_] != '%') fail("unexpected text after fact");
    return t;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  int column() const { return static_cast<int>(pos_) + 1; }
  void skip_ws() {
    while (!at_end() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(ParseErrorKind::Syntax, line_, column(), why);
  }

  Term term() {
    skip_ws();
    Term t;
    t.column = column();
    if (at_end()) fail("unexpected end of line");
    const char c = s_[pos_];
    if (c == '"') {
      t.quoted = true;
      ++pos_;
      while (true) {
        if (at_end()) fail("unterminated string");
        char d = s_[pos_++];
        if (d == '"') break;
        if (d == '\\') {
          if (at_end()) fail("unterminated string");
          d = s_[pos_++];
        }
        t.text += d;
      }
      return t;
    }
    auto ident = [](char x) {
      return (x >= 'a' && x <= 'z') || (x >= '0' && x <= '9') || x == '_';
    };
    if (!ident(c)) fail(std::string("unexpected character '") + c + "'");
    while (!at_end() && ident(s_[pos_])) t.text += s_[pos_++];
    skip_ws();
    if (!at_end() && s_[pos_] == '(') {
      ++pos_;
      while (true) {
        t.args.push_back(term());
        skip_ws();
        if (at_end()) fail("unterminated argument list");
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (s_[pos_] == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    return t;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

struct PendingObject {
  int line = 0;
  int column = 0;
  bool candidate = false;
  std::size_t holder = 0;  // 0-based cell or answer
  std::optional<std::uint8_t> layer, slot;
  std::array<std::optional<std::uint8_t>, kObjectTraitCount> values{};
};

template <typename T>
std::optional<T> to_unsigned(const Term& t) {
  if (!t.is_atom() || t.text.empty()) return std::nullopt;
  T v{};
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc{} || p != t.text.data() + t.text.size()) return std::nullopt;
  return v;
}

}  // namespace detail

inline AtomsDocument parse_atoms(std::string_view text) {
  using detail::Term;
  using K = ParseErrorKind;
  AtomsDocument doc;
  Problem& p = doc.problem;
  p.provenance = {};

  std::set<std::size_t> cells_declared;
  std::set<std::size_t> answers_declared;
  std::map<std::string, detail::PendingObject> objects;
  std::vector<std::string> object_order;
  std::optional<std::size_t> truth;
  std::set<std::string> singletons;
  bool saw_format = false;
  int line_no = 0;
  int last_line = 0;

  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto line = text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto fact = detail::FactReader(line, line_no).read();
    if (!fact) continue;
    last_line = line_no;
    const Term& f = *fact;
    auto err = [&](K kind, const Term& at, const std::string& why) -> ParseError {
      return ParseError(kind, line_no, at.column, why);
    };
    auto arity = [&](std::size_t n) {
      if (f.args.size() != n)
        throw err(K::BadArity, f, f.text + " expects " + std::to_string(n) + " arguments");
    };
    auto once = [&]() {
      if (!singletons.insert(f.text).second) throw err(K::DuplicateFact, f, "repeated " + f.text + " fact");
    };
    auto number = [&](const Term& t) {
      auto v = detail::to_unsigned<std::uint64_t>(t);
      if (!v) throw err(K::Syntax, t, "expected a non-negative integer, got '" + t.str() + "'");
      return *v;
    };
    auto index_in = [&](const Term& t, const std::set<std::size_t>* declared, std::size_t hi,
                        const char* what) {
      const auto v = number(t);
      if (v < 1 || v > hi || (declared && !declared->count(v)))
        throw err(K::BadIndex, t, std::string(what) + " " + t.str() + " is not declared");
      return static_cast<std::size_t>(v - 1);
    };
    auto object_ref = [&](const Term& t) -> detail::PendingObject& {
      auto it = objects.find(t.str());
      if (it == objects.end()) throw err(K::UnknownObject, t, "object '" + t.str() + "' is not declared");
      return it->second;
    };

    if (!saw_format && f.text != "format")
      throw err(K::Syntax, f, "document must begin with a format fact");
    if (f.text == "format") {
      arity(2);
      once();
      if (f.args[0].str() != "arr_atoms")
        throw err(K::UnsupportedVersion, f.args[0], "unknown format '" + f.args[0].str() + "'");
      if (number(f.args[1]) != kAtomsFormatVersion)
        throw err(K::UnsupportedVersion, f.args[1], "format version " + f.args[1].str() + " is not supported");
      saw_format = true;
    } else if (f.text == "vocabulary") {
      if (f.args.empty()) throw err(K::BadArity, f, "vocabulary needs a trait name");
      auto t = trait_from_name(f.args[0].str());
      if (!t || !is_object_trait(*t)) throw err(K::UnknownTrait, f.args[0], "unknown trait '" + f.args[0].str() + "'");
      const auto labels = trait_info(*t).labels;
      bool same = f.args.size() == labels.size() + 1;
      for (std::size_t i = 0; same && i < labels.size(); ++i) same = f.args[i + 1].str() == labels[i];
      if (!same) throw err(K::VocabularyMismatch, f.args[0], "vocabulary for " + f.args[0].str() + " differs from this build");
      if (!singletons.insert("vocabulary:" + f.args[0].str()).second)
        throw err(K::DuplicateFact, f, "repeated vocabulary for " + f.args[0].str());
    } else if (f.text == "origin") {
      arity(1);
      once();
      if (!f.args[0].quoted) throw err(K::Syntax, f.args[0], "origin must be a quoted string");
      p.provenance.origin = f.args[0].text;
    } else if (f.text == "seed") {
      arity(1);
      once();
      p.provenance.seed = number(f.args[0]);
    } else if (f.text == "index") {
      arity(1);
      once();
      p.provenance.index = number(f.args[0]);
    } else if (f.text == "spec_hash") {
      arity(1);
      once();
      const auto& s = f.args[0].text;
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
      if (!f.args[0].quoted || s.size() != 16 || ec != std::errc{} || ptr != s.data() + s.size())
        throw err(K::Syntax, f.args[0], "spec_hash must be 16 quoted hex digits");
      p.provenance.spec_hash = v;
    } else if (f.text == "rejections") {
      arity(1);
      once();
      p.provenance.rejections = static_cast<std::uint32_t>(number(f.args[0]));
    } else if (f.text == "planted") {
      arity(4);
      Rule r;
      const auto scope = f.args[0].str();
      if (scope != "row" && scope != "column") throw err(K::Syntax, f.args[0], "scope must be row or column");
      r.scope = scope == "row" ? Scope::Row : Scope::Column;
      auto c = Category::parse(f.args[1].str());
      if (!c) throw err(K::UnknownValue, f.args[1], "unknown category '" + f.args[1].str() + "'");
      r.category = *c;
      auto t = trait_from_name(f.args[2].str());
      if (!t) throw err(K::UnknownTrait, f.args[2], "unknown trait '" + f.args[2].str() + "'");
      r.trait = *t;
      auto op = Operator::parse(f.args[3].str());
      if (!op) throw err(K::UnknownValue, f.args[3], "unknown operator '" + f.args[3].str() + "'");
      r.op = *op;
      p.provenance.planted.push_back(r);
    } else if (f.text == "cell" || f.text == "answer") {
      arity(1);
      const auto v = number(f.args[0]);
      auto& set = f.text == "cell" ? cells_declared : answers_declared;
      if (v < 1 || (f.text == "cell" && v > kGivenCells))
        throw err(K::BadIndex, f.args[0], f.text + " index " + f.args[0].str() + " out of range");
      if (!set.insert(static_cast<std::size_t>(v)).second)
        throw err(K::DuplicateFact, f, "repeated " + f.text + "(" + f.args[0].str() + ")");
    } else if (f.text == "object" || f.text == "candidate") {
      arity(2);
      const bool cand = f.text == "candidate";
      if (!f.args[0].is_atom()) throw err(K::Syntax, f.args[0], "object id must be a name");
      const auto id = f.args[0].str();
      detail::PendingObject o;
      o.line = line_no;
      o.column = f.args[0].column;
      o.candidate = cand;
      o.holder = cand ? index_in(f.args[1], &answers_declared, ~std::size_t{0}, "answer")
                      : index_in(f.args[1], &cells_declared, kGivenCells, "cell");
      if (!objects.emplace(id, o).second)
        throw err(K::DuplicateId, f.args[0], "object id '" + id + "' used twice");
      object_order.push_back(id);
    } else if (f.text == "belongs") {
      arity(2);
      auto& o = object_ref(f.args[0]);
      const Term& c = f.args[1];
      if ((c.text != "layer" && c.text != "slot") || c.args.size() != 1)
        throw err(K::UnknownValue, c, "belongs expects layer(L) or slot(P), got '" + c.str() + "'");
      const auto v = number(c.args[0]);
      const bool layer = c.text == "layer";
      if (v >= (layer ? kMaxLayers : kMaxSlots))
        throw err(K::UnknownValue, c.args[0], c.text + " " + c.args[0].str() + " out of range");
      auto& slot = layer ? o.layer : o.slot;
      if (slot) throw err(K::DuplicateFact, f, "object '" + f.args[0].str() + "' already has a " + c.text);
      slot = static_cast<std::uint8_t>(v);
    } else if (f.text == "argument") {
      arity(3);
      const auto tname = f.args[1].str();
      auto t = trait_from_name(tname);
      if (!t || !is_object_trait(*t)) throw err(K::UnknownTrait, f.args[1], "unknown trait '" + tname + "'");
      auto& o = object_ref(f.args[0]);
      auto v = value_from_label(*t, f.args[2].str());
      if (!v)
        throw err(K::UnknownValue, f.args[2],
                  "value '" + f.args[2].str() + "' is not in the " + tname + " vocabulary");
      auto& slot = o.values[trait_index(*t)];
      if (slot) throw err(K::DuplicateFact, f, "object '" + f.args[0].str() + "' already has " + tname);
      slot = *v;
    } else if (f.text == "truth") {
      arity(1);
      once();
      truth = index_in(f.args[0], &answers_declared, ~std::size_t{0}, "answer");
    } else {
      throw err(K::UnknownPredicate, f, "unknown predicate '" + f.text + "'");
    }
  }

  const int end_line = last_line + 1;
  if (!saw_format) throw ParseError(K::Syntax, end_line, 1, "missing format fact");
  for (std::size_t c = 1; c <= kGivenCells; ++c)
    if (!cells_declared.count(c))
      throw ParseError(K::MissingCells, end_line, 1, "cell(" + std::to_string(c) + ") is not declared");
  if (answers_declared.empty()) throw ParseError(K::MissingCells, end_line, 1, "no answers declared");
  if (*answers_declared.rbegin() != answers_declared.size())
    throw ParseError(K::MissingCells, end_line, 1, "answers must be numbered 1..n without gaps");

  std::array<std::vector<ObjectSpec>, kGivenCells> grid;
  std::vector<std::vector<ObjectSpec>> answers(answers_declared.size());
  std::map<std::pair<bool, std::size_t>, int> first_line;
  for (const auto& id : object_order) {
    const auto& po = objects.at(id);
    std::string missing;
    if (!po.layer) missing = "layer";
    if (!po.slot) missing = "slot";
    for (Trait t : kObjectTraits)
      if (!po.values[trait_index(t)]) missing = std::string(trait_name(t));
    if (!missing.empty())
      throw ParseError(K::IncompleteObject, po.line, po.column, "object '" + id + "' has no " + missing);
    ObjectSpec o;
    o.layer = *po.layer;
    o.slot = *po.slot;
    for (Trait t : kObjectTraits) o.set(t, *po.values[trait_index(t)]);
    auto& bucket = po.candidate ? answers[po.holder] : grid[po.holder];
    bucket.push_back(o);
    if (bucket.size() > kMaxObjectsPerCell)
      throw ParseError(K::TooManyObjects, po.line, po.column,
                       std::string(po.candidate ? "answer " : "cell ") + std::to_string(po.holder + 1) +
                           " has more than the maximum of " + std::to_string(kMaxObjectsPerCell) +
                           " objects (at most 6 per cell)");
    first_line.try_emplace({po.candidate, po.holder}, po.line);
  }
  auto build = [&](std::vector<ObjectSpec>& objs, bool cand, std::size_t i) {
    try {
      return Cell(std::move(objs));
    } catch (const std::invalid_argument& e) {
      auto it = first_line.find({cand, i});
      throw ParseError(K::InvalidCell, it == first_line.end() ? end_line : it->second, 1,
                       std::string(cand ? "answer " : "cell ") + std::to_string(i + 1) + ": " + e.what());
    }
  };
  for (std::size_t c = 0; c < kGivenCells; ++c) p.grid[c] = build(grid[c], false, c);
  for (std::size_t k = 0; k < answers.size(); ++k) p.candidates.push_back(build(answers[k], true, k));
  doc.has_truth = truth.has_value();
  p.truth = truth.value_or(0);
  return doc;
}

inline Problem decode_atoms(std::string_view text) { return parse_atoms(text).problem; }

}  // namespace arr
