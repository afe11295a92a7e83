#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arr/atoms.hpp"
#include "arr/generator.hpp"
#include "arr/parallel.hpp"
#include "arr/render.hpp"

// On-disk layout of a corpus directory:
//   manifest.jsonl          one row per problem
//   problems/NNNNNN.atoms   encoded problem, truth included
// Rendering adds images/NNNNNN_gK.png (K = 1..8), images/NNNNNN_aK.png
// (K = 1..n), training_manifest.jsonl and labels.json.

namespace arr {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  IoError(const fs::path& path, const std::string& what)
      : std::runtime_error(path.string() + ": " + what), path_(path) {}
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

inline std::string problem_stem(std::size_t index) {
  std::ostringstream os;
  os << std::setw(6) << std::setfill('0') << index;
  return os.str();
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_bytes(const fs::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw IoError(path, "write failed");
}

inline void write_text(const fs::path& path, const std::string& text) {
  write_bytes(path, text.data(), text.size());
}

inline void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir, "cannot create directory: " + ec.message());
}

inline nlohmann::json manifest_row(const Problem& p, std::size_t index) {
  return {{"index", index},
          {"file", "problems/" + problem_stem(index) + ".atoms"},
          {"seed", p.provenance.seed},
          {"spec_hash", detail::hex64(p.provenance.spec_hash)},
          {"candidates", p.candidates.size()},
          {"truth", p.truth + 1},
          {"rejections", p.provenance.rejections}};
}

inline void write_corpus(const std::vector<Problem>& problems, const fs::path& dir) {
  make_dirs(dir / "problems");
  std::string manifest;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    write_text(dir / "problems" / (problem_stem(i) + ".atoms"), encode_atoms(problems[i]));
    manifest += manifest_row(problems[i], i).dump() + "\n";
  }
  write_text(dir / "manifest.jsonl", manifest);
}

/// Generates `count` problems in parallel; the output does not depend on `workers`.
inline std::vector<Problem> generate_corpus(const GeneratorSpec& spec, std::size_t count,
                                            unsigned workers = default_workers()) {
  std::vector<Problem> out(count);
  parallel_for(count, workers, [&](std::size_t i) { out[i] = sample_problem(spec, i); });
  return out;
}

inline std::vector<fs::path> corpus_files(const fs::path& dir) {
  const auto manifest = dir / "manifest.jsonl";
  std::istringstream in(read_text(manifest));
  std::vector<fs::path> files;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      files.push_back(dir / nlohmann::json::parse(line).at("file").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw IoError(manifest, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return files;
}

inline std::vector<Problem> read_corpus(const fs::path& dir, unsigned workers = default_workers()) {
  const auto files = corpus_files(dir);
  std::vector<Problem> out(files.size());
  parallel_for(files.size(), workers, [&](std::size_t i) {
    try {
      out[i] = decode_atoms(read_text(files[i]));
    } catch (const ParseError& e) {
      throw ParseError(e.kind(), e.line(), e.column(), files[i].string() + ": " + e.reason());
    }
  });
  return out;
}

/// Six heads per image in z-order. Absent heads carry presence 0 and -1
/// ("ignore") for every other label.
inline nlohmann::json image_labels(const Cell& cell) {
  auto heads = nlohmann::json::array();
  const auto objs = cell.objects();
  for (std::size_t h = 0; h < kMaxObjectsPerCell; ++h) {
    nlohmann::json head;
    if (h < objs.size()) {
      const auto& o = objs[h];
      head = {{"presence", 1},
              {"shape", o.get(Trait::Shape)},
              {"color", o.get(Trait::Color)},
              {"fill", o.get(Trait::Fill)},
              {"rotation", o.get(Trait::Rotation)},
              {"size", o.get(Trait::Size)},
              {"layer", o.layer},
              {"slot", o.slot}};
    } else {
      head = {{"presence", 0}, {"shape", -1}, {"color", -1}, {"fill", -1},
              {"rotation", -1}, {"size", -1}, {"layer", -1}, {"slot", -1}};
    }
    heads.push_back(std::move(head));
  }
  return heads;
}

inline nlohmann::json label_vocabulary() {
  nlohmann::json v;
  for (Trait t : kObjectTraits) {
    auto labels = nlohmann::json::array();
    for (auto l : trait_info(t).labels) labels.push_back(std::string(l));
    v[std::string(trait_name(t))] = labels;
  }
  return {{"heads", kMaxObjectsPerCell},
          {"ignore", -1},
          {"image", {{"width", 250}, {"height", 250}, {"channels", 3}}},
          {"vocabulary", v},
          {"layers", kMaxLayers},
          {"slots", kMaxSlots}};
}

struct RenderOptions {
  StyleConfig style;
  int jitter = 0;  // color-value noise amplitude, 0 = off
  unsigned workers = default_workers();
};

/// One PNG per given cell and per candidate, plus a manifest row per image.
inline std::size_t write_training_manifest(const std::vector<Problem>& problems, const fs::path& dir,
                                           const RenderOptions& opt = {}) {
  make_dirs(dir / "images");
  std::vector<std::string> rows(problems.size());
  parallel_for(problems.size(), opt.workers, [&](std::size_t i) {
    const Problem& p = problems[i];
    auto emit = [&](const Cell& cell, const std::string& role, std::size_t k) {
      const std::string name = problem_stem(i) + (role == "grid" ? "_g" : "_a") + std::to_string(k) + ".png";
      Image img = render_cell(cell, opt.style);
      jitter_colors(img, opt.jitter, fnv1a(name, p.provenance.seed), opt.style);
      const auto png = encode_png(img);
      write_bytes(dir / "images" / name, png.data(), png.size());
      nlohmann::json row{{"image", "images/" + name}, {"problem", i}, {"role", role},
                         {"index", k},                {"objects", image_labels(cell)}};
      rows[i] += row.dump() + "\n";
    };
    for (std::size_t c = 0; c < kGivenCells; ++c) emit(p.grid[c], "grid", c + 1);
    for (std::size_t k = 0; k < p.candidates.size(); ++k) emit(p.candidates[k], "candidate", k + 1);
  });
  std::string all;
  std::size_t count = 0;
  for (const auto& r : rows) {
    all += r;
    count += static_cast<std::size_t>(std::count(r.begin(), r.end(), '\n'));
  }
  write_text(dir / "training_manifest.jsonl", all);
  write_text(dir / "labels.json", label_vocabulary().dump(2) + "\n");
  return count;
}

}  // namespace arr
