#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "arr/atoms.hpp"
#include "arr/corpus.hpp"
#include "arr/eval.hpp"
#include "arr/fixtures.hpp"
#include "arr/generator.hpp"
#include "arr/reasoner.hpp"
#include "arr/render.hpp"

namespace arr::cli {

enum Exit : int { Ok = 0, Internal = 1, Usage = 2, Parse = 3, Io = 4, Generation = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverFlags {
  std::string mode = "strict";
  bool rows_only = false;
  std::string identity = "layer-shape";

  void attach(CLI::App* app) {
    app->add_option("--mode", mode, "Verdict mode")
        ->check(CLI::IsMember({"strict", "ranked"}))
        ->capture_default_str();
    app->add_flag("--rows-only", rows_only, "Induce rules along rows only (default: rows and columns)");
    app->add_option("--identity", identity, "Identity key for presence")
        ->check(CLI::IsMember({"layer-shape", "layer-shape-slot"}))
        ->capture_default_str();
  }
  Mode verdict_mode() const { return mode == "ranked" ? Mode::Ranked : Mode::Strict; }
  SolverConfig config() const {
    SolverConfig c;
    c.column_scope = !rows_only;
    c.identity = identity == "layer-shape-slot" ? IdentityKey::LayerShapeSlot : IdentityKey::LayerShape;
    return c;
  }
};

inline std::vector<Trait> parse_traits(const std::string& list) {
  std::vector<Trait> out;
  if (list == "all") return {kAllTraits.begin(), kAllTraits.end()};
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = std::min(list.find(',', start), list.size());
    const auto name = list.substr(start, comma - start);
    auto t = trait_from_name(name);
    if (!t) throw UsageError("unknown trait '" + name + "'");
    out.push_back(*t);
    start = comma + 1;
  }
  return out;
}

inline std::vector<std::size_t> parse_sizes(const std::string& list) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = std::min(list.find(',', start), list.size());
    const auto item = list.substr(start, comma - start);
    std::size_t v = 0;
    try {
      std::size_t used = 0;
      v = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad candidate count '" + item + "'");
    }
    if (v < 1) throw UsageError("candidate counts must be at least 1");
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

inline void print_trace(std::ostream& out, const Trace& t) {
  out << "outcome: " << outcome_name(t.verdict.outcome) << "\n";
  out << "answers:";
  for (auto a : t.verdict.answers) out << " " << a + 1;
  out << "\n";
  out << "satisfied:";
  for (const auto& r : t.verdict.reports) out << " " << r.candidate_index + 1 << "=" << r.satisfied << "/" << (r.satisfied + r.violated);
  out << "\n";
  out << "rules (" << t.rules.rules.size() << "):\n";
  for (const auto& r : t.rules.rules) out << "  " << r.describe() << "\n";
}

inline nlohmann::json trace_json(const Trace& t) {
  auto rules = nlohmann::json::array();
  for (const auto& r : t.rules.rules) rules.push_back(r.describe());
  auto answers = nlohmann::json::array();
  for (auto a : t.verdict.answers) answers.push_back(a + 1);
  auto reports = nlohmann::json::array();
  for (const auto& r : t.verdict.reports) {
    auto violated = nlohmann::json::array();
    for (auto v : r.violated_rules) violated.push_back(t.rules.rules[v].describe());
    reports.push_back({{"candidate", r.candidate_index + 1}, {"satisfied", r.satisfied},
                       {"violated", r.violated}, {"violated_rules", violated}});
  }
  return {{"outcome", std::string(outcome_name(t.verdict.outcome))}, {"answers", answers},
          {"rules", rules}, {"reports", reports}};
}

/// Runs the command line in-process. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Auto-relational reasoning for Raven-style matrix problems", "arr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "arr 1.0");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a verified problem corpus");
  std::string gen_out;
  std::size_t count = 5000;
  GeneratorSpec spec;
  unsigned workers = default_workers();
  gen->add_option("--out", gen_out, "Corpus directory")->required();
  gen->add_option("--count", count, "Number of problems")->capture_default_str();
  gen->add_option("--seed", spec.seed, "Corpus seed")->capture_default_str();
  gen->add_option("--candidates", spec.candidate_count, "Candidates per problem")->capture_default_str();
  gen->add_option("--rules-min", spec.rules_per_problem.lo, "Fewest planted rules")->capture_default_str();
  gen->add_option("--rules-max", spec.rules_per_problem.hi, "Most planted rules")->capture_default_str();
  gen->add_option("--objects-min", spec.objects_per_cell.lo, "Fewest objects per cell")->capture_default_str();
  gen->add_option("--objects-max", spec.objects_per_cell.hi, "Most objects per cell")->capture_default_str();
  gen->add_option("--nuisance", spec.nuisance_rate, "Chance an unplanted fill/rotation/size varies freely")
      ->capture_default_str();
  gen->add_option("--max-attempts", spec.max_attempts, "Resampling budget per problem")->capture_default_str();
  gen->add_option("--workers", workers, "Worker threads");

  // render
  auto* ren = app.add_subcommand("render", "Render a corpus to PNG cells and a training manifest");
  std::string ren_corpus, ren_out;
  int jitter = 0;
  bool sheets = false;
  ren->add_option("--corpus", ren_corpus, "Corpus directory")->required();
  ren->add_option("--out", ren_out, "Output directory (default: the corpus directory)");
  ren->add_option("--jitter", jitter, "Color-value noise amplitude (0 = off)")->capture_default_str();
  ren->add_flag("--sheets", sheets, "Also write one problem sheet per problem to sheets/");
  ren->add_option("--workers", workers, "Worker threads");

  // solve
  auto* sol = app.add_subcommand("solve", "Solve one atoms file and print the verdict and rule trace");
  std::string sol_file;
  bool sol_json = false;
  SolverFlags sol_flags;
  sol->add_option("file", sol_file, "Atoms file")->required();
  sol->add_flag("--json", sol_json, "Print the trace as JSON");
  sol_flags.attach(sol);

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a corpus and write a report");
  std::string ev_corpus, ev_report, ev_obs, ev_scaling, ev_ablate;
  SolverFlags ev_flags;
  ev->add_option("--corpus", ev_corpus, "Corpus directory")->required();
  ev->add_option("--report", ev_report, "Report file (JSON)");
  ev->add_option("--observations", ev_obs, "Directory of observer atoms files (image pipeline)");
  ev->add_option("--scaling", ev_scaling, "Candidate counts for the scaling experiment, e.g. 4,8,10,16");
  ev->add_option("--ablate", ev_ablate, "drop-atoms: comma-separated traits, or 'all'");
  ev->add_option("--workers", workers, "Worker threads");
  ev_flags.attach(ev);

  // export-asp
  auto* asp = app.add_subcommand("export-asp", "Write a problem's facts in ASP syntax");
  std::string asp_file, asp_out;
  asp->add_option("file", asp_file, "Atoms file")->required();
  asp->add_option("--out", asp_out, "Output file (default: stdout)");

  // fixtures
  auto* fix = app.add_subcommand("fixtures", "Write the four golden problems as atoms files");
  std::string fix_out;
  fix->add_option("--out", fix_out, "Output directory")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : Usage;
  }

  try {
    if (*gen) {
      if (count == 0) throw UsageError("--count must be at least 1");
      try {
        spec.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto problems = generate_corpus(spec, count, workers);
      write_corpus(problems, gen_out);
      std::size_t rejections = 0;
      for (const auto& p : problems) rejections += p.provenance.rejections;
      out << "wrote " << problems.size() << " problems to " << gen_out << " (" << rejections
          << " rejected samples)\n";
    } else if (*ren) {
      if (jitter < 0) throw UsageError("--jitter must be non-negative");
      const auto problems = read_corpus(ren_corpus, workers);
      const fs::path dir = ren_out.empty() ? fs::path(ren_corpus) : fs::path(ren_out);
      RenderOptions opt;
      opt.jitter = jitter;
      opt.workers = workers;
      const auto images = write_training_manifest(problems, dir, opt);
      if (sheets) {
        make_dirs(dir / "sheets");
        parallel_for(problems.size(), workers, [&](std::size_t i) {
          const auto png = encode_png(render_problem_sheet(problems[i], opt.style));
          write_bytes(dir / "sheets" / (problem_stem(i) + ".png"), png.data(), png.size());
        });
      }
      out << "rendered " << images << " images to " << (dir / "images").string() << "\n";
    } else if (*sol) {
      const Problem p = decode_atoms(read_text(sol_file));
      const Trace t = solve_traced(p, sol_flags.verdict_mode(), sol_flags.config());
      if (sol_json)
        out << trace_json(t).dump(2) << "\n";
      else
        print_trace(out, t);
    } else if (*ev) {
      EvalOptions opt;
      opt.mode = ev_flags.verdict_mode();
      opt.solver = ev_flags.config();
      opt.workers = workers;
      const auto corpus = read_corpus(ev_corpus, workers);
      if (corpus.empty()) throw UsageError("corpus " + ev_corpus + " is empty");
      nlohmann::json report;
      const auto reasoning = evaluate(corpus, opt);
      report["reasoning"] = reasoning.to_json();
      std::optional<AccuracyReport> observed;
      if (!ev_obs.empty()) {
        if (!fs::is_directory(ev_obs)) throw IoError(ev_obs, "observations directory not found");
        observed = evaluate_observed(corpus, ev_obs, opt);
        report["observed"] = observed->to_json();
      }
      out << accuracy_table(reasoning, observed);
      if (!ev_scaling.empty()) {
        ScalingOptions so;
        so.n_list = parse_sizes(ev_scaling);
        so.eval = opt;
        const auto s = scaling_experiment(corpus, so);
        report["scaling"] = s.to_json();
        out << "\nScaling (e = " << s.e << ", slope = " << s.slope << ", slope ratio error = "
            << percent(s.slope_ratio_error()) << ")\n";
        for (const auto& pt : s.points) out << "  n=" << pt.n << "  e_n=" << pt.e_n << "\n";
      }
      if (!ev_ablate.empty()) {
        const auto a = ablation_run(corpus, parse_traits(ev_ablate), opt);
        report["ablation"] = a.to_json();
        out << "\nAblation (drop-atoms " << ev_ablate << "): accuracy " << percent(a.ablated.accuracy())
            << " vs baseline " << percent(a.baseline.accuracy()) << "\n";
      }
      if (!ev_report.empty()) write_text(ev_report, report.dump(2) + "\n");
    } else if (*asp) {
      const auto text = export_asp(decode_atoms(read_text(asp_file)));
      if (asp_out.empty())
        out << text;
      else
        write_text(asp_out, text);
    } else if (*fix) {
      make_dirs(fix_out);
      for (auto f : kFixtures)
        write_text(fs::path(fix_out) / (std::string(fixture_name(f)) + ".atoms"), encode_atoms(fixture(f)));
      out << "wrote " << kFixtures.size() << " fixtures to " << fix_out << "\n";
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return Usage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return Parse;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return Io;
  } catch (const GenerationError& e) {
    err << "generation error: " << e.what() << "\n";
    return Generation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return Internal;
  }
  return Ok;
}

}  // namespace arr::cli
