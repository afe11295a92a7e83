#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arr/atoms.hpp"
#include "arr/corpus.hpp"
#include "arr/generator.hpp"
#include "arr/parallel.hpp"
#include "arr/reasoner.hpp"

namespace arr {

enum class Pipeline { AtomsOnly, ImageObserver };

inline std::string_view pipeline_name(Pipeline p) {
  return p == Pipeline::AtomsOnly ? "atoms-only" : "image+observer";
}

struct EvalOptions {
  Mode mode = Mode::Strict;
  SolverConfig solver;
  unsigned workers = default_workers();
};

struct Flagged {
  std::size_t index = 0;
  std::string reason;

  friend bool operator==(const Flagged&, const Flagged&) = default;
};

struct AccuracyReport {
  Pipeline pipeline = Pipeline::AtomsOnly;
  std::size_t total = 0;
  std::array<std::size_t, kErrorClasses.size()> by_class{};  // indexed by ErrorClass
  std::vector<Flagged> flagged;  // problems without usable observations
  double wall_seconds = 0.0;

  std::size_t count(ErrorClass c) const { return by_class[static_cast<std::size_t>(c)]; }
  std::size_t accurate() const { return count(ErrorClass::Accurate); }
  std::size_t inaccurate() const { return total - accurate(); }
  double accuracy() const { return total ? static_cast<double>(accurate()) / static_cast<double>(total) : 0.0; }
  /// Classes in which the true answer was not satisfiable.
  std::size_t false_negative_bearing() const {
    return count(ErrorClass::FalseNegative) + count(ErrorClass::Both);
  }
  bool consistent() const {
    std::size_t sum = 0;
    for (auto c : by_class) sum += c;
    return sum == total;
  }

  /// Wall-clock time is left out unless asked for, so report files are reproducible.
  nlohmann::json to_json(bool with_time = false) const {
    nlohmann::json classes;
    for (auto c : kErrorClasses) classes[std::string(error_class_name(c))] = count(c);
    auto flags = nlohmann::json::array();
    for (const auto& f : flagged) flags.push_back({{"index", f.index}, {"reason", f.reason}});
    nlohmann::json j{{"pipeline", std::string(pipeline_name(pipeline))},
                     {"total", total},
                     {"accurate", accurate()},
                     {"accuracy", accuracy()},
                     {"classes", classes},
                     {"flagged", flags}};
    if (with_time) j["wall_seconds"] = wall_seconds;
    return j;
  }
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline AccuracyReport aggregate(Pipeline pipeline, const std::vector<ErrorClass>& classes,
                                std::vector<Flagged> flagged) {
  AccuracyReport r;
  r.pipeline = pipeline;
  r.total = classes.size();
  for (auto c : classes) ++r.by_class[static_cast<std::size_t>(c)];
  std::sort(flagged.begin(), flagged.end(), [](const Flagged& a, const Flagged& b) { return a.index < b.index; });
  r.flagged = std::move(flagged);
  return r;
}

}  // namespace detail

/// Solves every problem from its atoms and classifies the verdict.
inline AccuracyReport evaluate(const std::vector<Problem>& corpus, const EvalOptions& opt = {}) {
  detail::Stopwatch clock;
  std::vector<ErrorClass> classes(corpus.size());
  parallel_for(corpus.size(), opt.workers, [&](std::size_t i) {
    classes[i] = classify(solve(corpus[i], opt.mode, opt.solver), corpus[i].truth);
  });
  auto r = detail::aggregate(Pipeline::AtomsOnly, classes, {});
  r.wall_seconds = clock.seconds();
  return r;
}

/// Observation file for problem i: <dir>/NNNNNN.atoms, truth-free atoms written
/// by the observer. Missing or unreadable files count as FalseNegative and are flagged.
inline fs::path observation_path(const fs::path& dir, std::size_t index) {
  return dir / (problem_stem(index) + ".atoms");
}

inline AccuracyReport evaluate_observed(const std::vector<Problem>& corpus, const fs::path& observations,
                                        const EvalOptions& opt = {}) {
  detail::Stopwatch clock;
  std::vector<ErrorClass> classes(corpus.size());
  std::vector<std::optional<Flagged>> flags(corpus.size());
  parallel_for(corpus.size(), opt.workers, [&](std::size_t i) {
    const auto path = observation_path(observations, i);
    auto flag = [&](const std::string& why) {
      classes[i] = ErrorClass::FalseNegative;
      flags[i] = Flagged{i, why};
    };
    if (!fs::exists(path)) return flag("missing observation file " + path.string());
    AtomsDocument doc;
    try {
      doc = parse_atoms(read_text(path));
    } catch (const std::exception& e) {
      return flag(path.string() + ": " + e.what());
    }
    if (doc.problem.candidates.size() != corpus[i].candidates.size())
      return flag(path.string() + ": candidate count differs from the corpus");
    Problem observed = std::move(doc.problem);
    observed.truth = corpus[i].truth;
    classes[i] = classify(solve(observed, opt.mode, opt.solver), observed.truth);
  });
  std::vector<Flagged> flagged;
  for (auto& f : flags)
    if (f) flagged.push_back(std::move(*f));
  auto r = detail::aggregate(Pipeline::ImageObserver, classes, std::move(flagged));
  r.wall_seconds = clock.seconds();
  return r;
}

struct ScalingPoint {
  std::size_t n = 0;
  std::size_t inaccurate = 0;
  double e_n = 0.0;
  std::size_t false_positives = 0;  // fully satisfying distractors
  std::size_t distractors = 0;
};

struct ScalingReport {
  std::size_t cores = 0;
  std::vector<ScalingPoint> points;
  double e = 0.0;  // per-distractor false-positive incidence at the largest n
  double slope = 0.0;
  double intercept = 0.0;

  double slope_ratio_error() const { return e > 0.0 ? std::abs(slope / e - 1.0) : INFINITY; }
  bool strictly_monotone() const {
    for (std::size_t i = 1; i < points.size(); ++i)
      if (!(points[i].e_n > points[i - 1].e_n)) return false;
    return !points.empty();
  }

  nlohmann::json to_json() const {
    auto pts = nlohmann::json::array();
    for (const auto& p : points)
      pts.push_back({{"n", p.n}, {"inaccurate", p.inaccurate}, {"e_n", p.e_n},
                     {"false_positives", p.false_positives}, {"distractors", p.distractors}});
    return {{"cores", cores}, {"points", pts}, {"e", e}, {"slope", slope}, {"intercept", intercept},
            {"slope_ratio_error", slope_ratio_error()}, {"strictly_monotone", strictly_monotone()}};
  }
};

/// Ordinary least squares y = slope * x + intercept.
inline std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  return {slope, my - slope * mx};
}

struct ScalingOptions {
  std::vector<std::size_t> n_list{4, 8, 10, 16};
  IntRange mutations{1, 3};
  EvalOptions eval;
};

/// Re-poses every core with n candidates (truth plus n-1 unverified
/// distractors, nested across n) and measures the error rate e_n.
inline ScalingReport scaling_experiment(const std::vector<Problem>& cores, const ScalingOptions& opt = {}) {
  ScalingReport rep;
  rep.cores = cores.size();
  auto ns = opt.n_list;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (std::size_t n : ns) {
    std::vector<ErrorClass> classes(cores.size());
    std::vector<std::size_t> fps(cores.size());
    parallel_for(cores.size(), opt.eval.workers, [&](std::size_t i) {
      const Problem q = resample_candidates(cores[i], n, opt.mutations);
      const Verdict v = solve(q, Mode::Strict, opt.eval.solver);
      classes[i] = classify(v, q.truth);
      for (const auto& r : v.reports) fps[i] += r.fully_satisfying && r.candidate_index != q.truth;
    });
    ScalingPoint pt;
    pt.n = n;
    for (std::size_t i = 0; i < cores.size(); ++i) {
      pt.inaccurate += classes[i] != ErrorClass::Accurate;
      pt.false_positives += fps[i];
    }
    pt.distractors = cores.size() * (n - 1);
    pt.e_n = cores.empty() ? 0.0 : static_cast<double>(pt.inaccurate) / static_cast<double>(cores.size());
    rep.points.push_back(pt);
  }
  if (!rep.points.empty() && rep.points.back().distractors > 0)
    rep.e = static_cast<double>(rep.points.back().false_positives) /
            static_cast<double>(rep.points.back().distractors);
  std::vector<double> x, y;
  for (const auto& p : rep.points) {
    x.push_back(static_cast<double>(p.n));
    y.push_back(p.e_n);
  }
  std::tie(rep.slope, rep.intercept) = fit_line(x, y);
  return rep;
}

struct AblationReport {
  std::vector<Trait> dropped;
  AccuracyReport baseline;
  AccuracyReport ablated;

  double accuracy_drop() const { return baseline.accuracy() - ablated.accuracy(); }

  nlohmann::json to_json() const {
    auto d = nlohmann::json::array();
    for (Trait t : dropped) d.push_back(std::string(trait_name(t)));
    return {{"delta", "drop-atoms"}, {"dropped", d}, {"baseline", baseline.to_json()},
            {"ablated", ablated.to_json()}, {"accuracy_drop", accuracy_drop()}};
  }
};

/// drop-atoms: the solver no longer sees the argument facts of `dropped`.
/// Hiding shape also removes presence, whose keys are built from it. Count is
/// a trait like the others and is only hidden when named.
inline AblationReport ablation_run(const std::vector<Problem>& corpus, const std::vector<Trait>& dropped,
                                   const EvalOptions& opt = {}) {
  AblationReport rep;
  rep.dropped = dropped;
  rep.baseline = evaluate(corpus, opt);
  EvalOptions hidden = opt;
  for (Trait t : dropped) hidden.solver.hidden[trait_index(t)] = true;
  rep.ablated = evaluate(corpus, hidden);
  return rep;
}

inline std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * x);
  return buf;
}

/// Accuracy table with one column per pipeline.
inline std::string accuracy_table(const std::optional<AccuracyReport>& reasoning,
                                  const std::optional<AccuracyReport>& observed) {
  auto cell = [](const std::optional<AccuracyReport>& r, auto f) -> std::string {
    return r ? f(*r) : std::string("n/a");
  };
  auto num = [](std::size_t v) { return std::to_string(v); };
  std::vector<std::array<std::string, 3>> rows{
      {"", "Reasoning Only", "Reasoning & Observation"},
      {"Problems", cell(reasoning, [&](auto& r) { return num(r.total); }),
       cell(observed, [&](auto& r) { return num(r.total); })},
      {"Accuracy", cell(reasoning, [](auto& r) { return percent(r.accuracy()); }),
       cell(observed, [](auto& r) { return percent(r.accuracy()); })},
      {"Problems Solved Incorrectly", cell(reasoning, [&](auto& r) { return num(r.inaccurate()); }),
       cell(observed, [&](auto& r) { return num(r.inaccurate()); })}};
  for (auto c : kErrorClasses) {
    if (c == ErrorClass::Accurate) continue;
    rows.push_back({"  " + std::string(error_class_name(c)),
                    cell(reasoning, [&](auto& r) { return num(r.count(c)); }),
                    cell(observed, [&](auto& r) { return num(r.count(c)); })});
  }
  std::array<std::size_t, 3> w{};
  for (const auto& r : rows)
    for (std::size_t i = 0; i < 3; ++i) w[i] = std::max(w[i], r[i].size());
  std::ostringstream os;
  os << "Problem Solving Accuracy\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    os << r[0] << std::string(w[0] - r[0].size(), ' ') << " | " << std::string(w[1] - r[1].size(), ' ') << r[1]
       << " | " << std::string(w[2] - r[2].size(), ' ') << r[2] << "\n";
    if (k == 0) os << std::string(w[0] + w[1] + w[2] + 6, '-') << "\n";
  }
  return os.str();
}

}  // namespace arr
