// Acceptance gate for the classification pipeline. Each criterion prints one
// line, "criterion N: PASS ..." or "criterion N: FAIL ...", with the measured
// values and the pinned tolerances; the exit status is nonzero when any
// requested criterion fails. Run with no arguments for all ten, or pass
// criterion numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "lexiclass/corpus.hpp"
#include "lexiclass/eval.hpp"
#include "lexiclass/labels.hpp"
#include "lexiclass/masking.hpp"
#include "lexiclass/rng.hpp"
#include "lexiclass/svm.hpp"
#include "support/fixtures.hpp"
#include "support/pg_oracle.hpp"
#include "support/ward_oracle.hpp"

namespace fs = std::filesystem;
using namespace lexiclass;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v, int precision = 5) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

/// One sub-check: appends "name=value (want target+-tol)" to the detail and
/// clears the pass flag when the value misses the window.
void expect_near(Outcome& out, const std::string& name, double value,
                 double target, double tol) {
  const bool ok = std::fabs(value - target) <= tol;
  if (!out.detail.empty()) out.detail += ", ";
  out.detail += name + "=" + fmt(value) + (ok ? " ok" : " MISS") +
                " (want " + fmt(target) + "+-" + fmt(tol) + ")";
  out.pass = out.pass && ok;
}

void expect_true(Outcome& out, const std::string& name, bool ok) {
  if (!out.detail.empty()) out.detail += ", ";
  out.detail += name + (ok ? " ok" : " FAILED");
  out.pass = out.pass && ok;
}

void expect_runtime(Outcome& out, const Stopwatch& watch, double budget) {
  const double s = watch.seconds();
  const bool ok = s <= budget;
  if (!out.detail.empty()) out.detail += ", ";
  out.detail += "runtime=" + fmt(s, 2) + "s" + (ok ? "" : " OVER") +
                " (budget " + fmt(budget, 0) + "s)";
  out.pass = out.pass && ok;
}

// --- criterion 1: analytic baseline accuracy on the frozen distributions ---

Outcome criterion_1() {
  Outcome out;
  const double law = eval::expected_dummy_accuracy(
      fixtures::as_count_map(fixtures::law_area_counts()));
  const double first = eval::expected_dummy_accuracy(
      fixtures::as_count_map(fixtures::ruling_first_word_counts()));
  const double full = eval::expected_dummy_accuracy(
      fixtures::as_count_map(fixtures::ruling_full_counts()));
  expect_near(out, "law-area", law, 0.177, 0.0005);
  expect_near(out, "ruling-first", first, 0.477, 0.0005);
  expect_near(out, "ruling-full", full, 0.406, 0.0005);
  return out;
}

// --- criterion 2: full pipeline accuracy on a planted-vocabulary corpus ---

corpus::SynthSpec spec_for(int classes, int docs_per_class, double signal) {
  corpus::SynthSpec spec;
  spec.classes.resize(static_cast<std::size_t>(classes));
  for (int c = 0; c < classes; ++c) {
    spec.classes[static_cast<std::size_t>(c)].label =
        "regime" + std::string(1, static_cast<char>('a' + c));
    spec.classes[static_cast<std::size_t>(c)].year = 1960 + 10 * c;
  }
  spec.docs_per_class = docs_per_class;
  spec.signal_ratio = signal;
  return spec;
}

Outcome criterion_2() {
  Outcome out;
  const Stopwatch watch;
  const auto docs = corpus::generate_synthetic(spec_for(5, 400, 0.3), 20240501);

  eval::ExperimentConfig config;
  config.task = eval::Task::law_area;
  config.label_config.min_support = 1;
  config.eval.folds = 10;
  config.jobs = 1;
  const auto report = eval::run_experiment(docs, config);

  expect_true(out, "weighted_f1>=0.95 (got " + fmt(report.svm.weighted_f1) + ")",
              report.svm.weighted_f1 >= 0.95);
  expect_near(out, "dummy_accuracy", report.dummy.accuracy, 0.20, 0.02);
  expect_runtime(out, watch, 60.0);
  return out;
}

// --- criterion 3: masking removes a pure label leak ---

corpus::SynthSpec leak_spec() {
  corpus::SynthSpec spec;
  spec.classes.resize(3);
  spec.classes[0].label = "cassation";
  spec.classes[0].extra_leak_tokens = {"casse"};
  spec.classes[1].label = "rejet";
  spec.classes[1].extra_leak_tokens = {"rejete"};
  spec.classes[2].label = "annulation";
  spec.classes[2].extra_leak_tokens = {"annule"};
  spec.docs_per_class = 240;
  spec.signal_ratio = 0.0;  // no class vocabulary: the leak is the only signal
  spec.leak_labels = true;
  return spec;
}

eval::ExperimentConfig leak_config(bool mask) {
  eval::ExperimentConfig config;
  config.task = eval::Task::law_area;
  config.label_config.min_support = 1;
  config.eval.folds = 5;
  config.mask = mask;
  config.jobs = 1;
  return config;
}

Outcome criterion_3() {
  Outcome out;
  const Stopwatch watch;
  const auto docs = corpus::generate_synthetic(leak_spec(), 31337);
  const double chance = 1.0 / 3.0;  // sum of squared priors, equal classes

  const auto masked = eval::run_experiment(docs, leak_config(true));
  expect_near(out, "masked_f1", masked.svm.weighted_f1, chance, 0.02);

  // Audit the masked token streams: the top discriminative n-grams must not
  // contain any forbidden word.
  const auto ds = eval::build_task_dataset(docs, leak_config(true));
  const auto vocab = features::Vocabulary::build(ds.tokens, {1, 1});
  const auto X = features::vectorize_all(ds.tokens, vocab);
  std::map<std::string, int> ids;
  for (std::size_t i = 0; i < ds.class_order.size(); ++i) {
    ids[ds.class_order[i]] = static_cast<int>(i);
  }
  std::vector<int> y;
  for (const auto& label : ds.labels) y.push_back(ids[label]);
  const auto audit = masking::audit_masking(X, y, vocab, ds.lexicon, 20);
  expect_true(out, "masked_audit_violations=0", audit.violations.empty());

  const auto leaky = eval::run_experiment(docs, leak_config(false));
  expect_true(out, "unmasked_f1>=0.99 (got " + fmt(leaky.svm.weighted_f1) + ")",
              leaky.svm.weighted_f1 >= 0.99);

  const auto raw = eval::build_task_dataset(docs, leak_config(false));
  const auto raw_vocab = features::Vocabulary::build(raw.tokens, {1, 1});
  const auto raw_X = features::vectorize_all(raw.tokens, raw_vocab);
  std::vector<int> raw_y;
  for (const auto& label : raw.labels) raw_y.push_back(ids[label]);
  const auto lexicon =
      masking::build_mask_lexicon({"cassation", "rejet", "annulation"},
                                  masking::default_variant_map())
          .lexicon;
  const auto raw_audit =
      masking::audit_masking(raw_X, raw_y, raw_vocab, lexicon, 20);
  bool leak_on_top = false;
  for (const auto& [term, score] : raw_audit.top_features) {
    if (term == "cassation" || term == "rejet" || term == "annulation" ||
        term == "casse" || term == "rejete" || term == "annule") {
      leak_on_top = true;
    }
  }
  expect_true(out, "leak_in_top20", leak_on_top);
  expect_runtime(out, watch, 30.0);
  return out;
}

// --- criterion 4: solver agreement with the projected-gradient oracle ---

Outcome criterion_4() {
  Outcome out;
  const Stopwatch watch;
  Rng rng(0xACCE5501);
  const double c_grid[3] = {0.01, 0.1, 1.0};
  double max_dual_gap = 0.0;
  std::size_t compared = 0, agreed = 0;

  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 2 + rng.below(19);  // up to 20 rows
    const std::size_t d = 1 + rng.below(5);   // up to 5 features
    std::vector<SparseVector> rows;
    std::vector<int> y;
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<SparseEntry> entries;
      for (std::size_t j = 0; j < d; ++j) {
        const double v = static_cast<double>(rng.below(9)) - 4.0;
        if (v != 0.0) entries.push_back({static_cast<std::uint32_t>(j), v});
      }
      rows.emplace_back(d, std::move(entries));
      const int label = rng.below(2) == 0 ? -1 : 1;
      y.push_back(label);
      (label > 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos) y.front() = 1;
    if (!has_neg) y.back() = -1;
    const auto X = SparseMatrix::from_rows(d, rows);

    svm::SvmConfig config;
    config.C = c_grid[rng.below(3)];
    config.loss = round % 2 == 0 ? svm::LossKind::squared_hinge
                                 : svm::LossKind::hinge;
    config.use_bias = false;
    config.tolerance = 1e-12;
    config.max_epochs = 1000000;
    config.seed = rng.next_u64();

    const auto got = svm::train_binary_detail(X, y, config);
    const auto want = oracle::pg_solve(X, y, config.C, config.loss);
    max_dual_gap =
        std::max(max_dual_gap,
                 std::fabs(got.dual_objective - want.dual_objective));

    for (std::size_t i = 0; i < n; ++i) {
      double ds = 0.0, dw = 0.0;
      for (const SparseEntry& e : X.row(i)) {
        ds += got.weights[e.index] * e.value;
        dw += want.w[e.index] * e.value;
      }
      if (std::fabs(ds) > 1e-6 && std::fabs(dw) > 1e-6) {
        ++compared;
        if ((ds > 0) == (dw > 0)) ++agreed;
      }
    }
  }

  expect_true(out,
              "dual_gap<=1e-6 (max " + fmt(max_dual_gap, 9) + ")",
              max_dual_gap <= 1e-6);
  expect_true(out,
              "prediction_agreement " + std::to_string(agreed) + "/" +
                  std::to_string(compared),
              compared > 0 && agreed == compared);

  const auto X2 = SparseMatrix::from_rows(
      1, {SparseVector(1, {{0, 1.0}}), SparseVector(1, {{0, -1.0}})});
  const std::vector<int> y2 = {1, -1};
  svm::SvmConfig config2;
  config2.C = 0.1;
  config2.use_bias = false;
  config2.tolerance = 1e-12;
  const auto w2 = svm::train_binary(X2, y2, config2);
  expect_near(out, "two_point_w", w2[0], 2.0 / 7.0, 1e-6);
  expect_runtime(out, watch, 10.0);
  return out;
}

// --- criterion 5: Ward linkage agreement with the brute-force merger ---

Outcome criterion_5() {
  Outcome out;
  const Stopwatch watch;
  Rng rng(0xACCE5502);
  double max_height_err = 0.0;
  bool structure_ok = true;

  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 2 + rng.below(7);   // up to 8 points
    const std::size_t dim = 1 + rng.below(4); // up to 4 dims
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back("n" + std::to_string(i));
      for (auto& v : pts[i]) v = static_cast<double>(rng.below(11)) / 2.0;
    }
    const auto got = labels::ward_cluster(pts, names);
    const auto want = oracle::ward_bruteforce(pts);
    if (got.merges.size() != want.size()) {
      structure_ok = false;
      continue;
    }
    for (std::size_t i = 0; i < want.size(); ++i) {
      structure_ok = structure_ok && got.merges[i].left == want[i].left &&
                     got.merges[i].right == want[i].right;
      max_height_err = std::max(
          max_height_err, std::fabs(got.merges[i].height - want[i].height));
    }
  }
  expect_true(out, "merge_structure", structure_ok);
  expect_true(out, "height_err<=1e-9 (max " + fmt(max_height_err, 12) + ")",
              max_height_err <= 1e-9);

  const auto d = labels::ward_cluster({{0.0}, {10.0}, {11.0}}, {"a", "b", "c"});
  expect_near(out, "line_first_height", d.merges[0].height, 1.0, 1e-12);
  expect_near(out, "line_second_height", d.merges[1].height,
              std::sqrt(147.0), 1e-12);
  expect_runtime(out, watch, 5.0);
  return out;
}

// --- criterion 6: ANOVA F reference values ---

Outcome criterion_6() {
  Outcome out;
  auto column = [](std::vector<double> values) {
    std::vector<SparseVector> rows;
    for (double v : values) {
      std::vector<SparseEntry> e;
      if (v != 0.0) e.push_back({0, v});
      rows.emplace_back(1, std::move(e));
    }
    return SparseMatrix::from_rows(1, rows);
  };
  const std::vector<int> y = {0, 0, 1, 1};
  expect_near(out, "two_group_f",
              masking::anova_f_scores(column({1, 2, 3, 4}), y)[0], 8.0, 1e-9);
  expect_true(out, "constant_feature_f=0",
              masking::anova_f_scores(column({5, 5, 5, 5}), y)[0] == 0.0);
  const double sep = masking::anova_f_scores(column({1, 1, 2, 2}), y)[0];
  expect_true(out, "separating_feature_f=inf",
              std::isinf(sep) && sep > 0);
  return out;
}

// --- criterion 7: stratified fold balance ---

Outcome criterion_7() {
  Outcome out;
  std::vector<std::string> y;
  for (int i = 0; i < 20; ++i) y.push_back("A");
  for (int i = 0; i < 10; ++i) y.push_back("B");
  const auto folds = eval::stratified_kfold(y, 10, 77);
  std::map<std::size_t, std::size_t> a_count, b_count;
  for (std::size_t i = 0; i < y.size(); ++i) {
    (y[i] == "A" ? a_count : b_count)[folds.fold_of[i]]++;
  }
  bool balanced = a_count.size() == 10 && b_count.size() == 10;
  for (const auto& [fold, c] : a_count) balanced = balanced && c == 2;
  for (const auto& [fold, c] : b_count) balanced = balanced && c == 1;
  expect_true(out, "20A+10B k=10 gives (2,1) per fold", balanced);

  bool spread_ok = true;
  Rng rng(0xACCE5503);
  for (int round = 0; round < 20; ++round) {
    std::vector<std::string> labels;
    const std::size_t k = 2 + rng.below(9);
    for (int c = 0; c < 4; ++c) {
      const std::size_t count = k + rng.below(40);
      for (std::size_t i = 0; i < count; ++i) {
        labels.push_back("c" + std::to_string(c));
      }
    }
    const auto assignment = eval::stratified_kfold(labels, k, rng.next_u64());
    std::map<std::string, std::vector<std::size_t>> per_class;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto& counts = per_class[labels[i]];
      if (counts.empty()) counts.assign(k, 0);
      counts[assignment.fold_of[i]]++;
    }
    for (const auto& [label, counts] : per_class) {
      const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
      spread_ok = spread_ok && (*hi - *lo) <= 1;
    }
  }
  expect_true(out, "per-class per-fold spread <= 1", spread_ok);

  std::vector<std::string> tiny(12, "big");
  tiny.push_back("rare");
  const auto warned = eval::stratified_kfold(tiny, 5, 1);
  bool has_warning = false;
  for (const auto& w : warned.warnings) {
    if (w.find("rare") != std::string::npos) has_warning = true;
  }
  expect_true(out, "small-class warning", has_warning);
  return out;
}

// --- criterion 8: temporal binning of the frozen decade histogram ---

Outcome criterion_8() {
  Outcome out;
  const auto seven = labels::TemporalScheme::seven_class();
  const auto fourteen = labels::TemporalScheme::fourteen_class();
  std::map<std::string, std::size_t> seven_bins, fourteen_bins;
  std::size_t total = 0;
  for (const auto& [decade, count] : fixtures::decade_histogram()) {
    seven_bins[labels::bin_temporal(decade, seven).label] += count;
    fourteen_bins[labels::bin_temporal(decade, fourteen).label] += count;
    total += count;
  }
  expect_true(out,
              "seven_class PRE_1960=" + std::to_string(seven_bins["PRE_1960"]) +
                  " (want 201)",
              seven_bins["PRE_1960"] == 201);
  std::size_t fourteen_total = 0;
  for (const auto& [label, count] : fourteen_bins) fourteen_total += count;
  expect_true(out,
              "fourteen_class conserves " + std::to_string(fourteen_total) +
                  "/" + std::to_string(total),
              fourteen_total == total);
  return out;
}

// --- criterion 9: byte-identical reports from the command line ---

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(LEXICLASS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_9() {
  Outcome out;
  const fs::path dir = fs::temp_directory_path() /
                       ("lexiclass-accept-" + std::to_string(::getpid()));
  fs::create_directories(dir);

  const std::string synth = "synth --classes 3 --docs-per-class 40 --seed 5"
                            " --out " + (dir / "synth").string();
  expect_true(out, "synth exit 0", run_cli(synth) == 0);
  const std::string cv_args =
      "cv --corpus " + (dir / "synth" / "corpus.jsonl").string() +
      " --task law-area --min-support 1 --folds 5 --seed 31 --out ";
  expect_true(out, "cv run A exit 0",
              run_cli(cv_args + (dir / "a").string()) == 0);
  expect_true(out, "cv run B exit 0",
              run_cli(cv_args + (dir / "b").string()) == 0);
  const std::string a = slurp(dir / "a" / "report.json");
  const std::string b = slurp(dir / "b" / "report.json");
  expect_true(out, "report.json byte-identical", !a.empty() && a == b);

  std::error_code ec;
  fs::remove_all(dir, ec);
  return out;
}

// --- criterion 10: lexical-richness features beat the prior baseline ---

Outcome criterion_10() {
  Outcome out;
  corpus::SynthSpec spec;
  spec.classes.resize(3);
  spec.classes[0].label = "terse";
  spec.classes[0].class_vocab_size = 4;    // few types, repeated often
  spec.classes[1].label = "middling";
  spec.classes[1].class_vocab_size = 30;
  spec.classes[2].label = "verbose";
  spec.classes[2].class_vocab_size = 400;  // nearly every token distinct
  spec.docs_per_class = 100;
  spec.signal_ratio = 1.0;  // all tokens from the class vocabulary
  spec.shared_vocab_size = 10;
  const auto docs = corpus::generate_synthetic(spec, 4242);

  eval::ExperimentConfig config;
  config.task = eval::Task::law_area;
  config.feature_mode = features::FeatureMode::ttr_only;
  config.label_config.min_support = 1;
  config.eval.folds = 5;
  config.jobs = 1;
  const auto report = eval::run_experiment(docs, config);

  const double margin = report.svm.weighted_f1 - report.expected_dummy;
  expect_true(out,
              "ttr_f1=" + fmt(report.svm.weighted_f1) + " vs expected_dummy=" +
                  fmt(report.expected_dummy) + ", margin=" + fmt(margin) +
                  " (need >= 0.05)",
              margin >= 0.05);
  return out;
}

using CriterionFn = Outcome (*)();

const CriterionFn kCriteria[10] = {
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "usage: %s [criterion 1..10]...\n", argv[0]);
      return 2;
    }
    which.push_back(n);
  }
  if (which.empty()) {
    for (int n = 1; n <= 10; ++n) which.push_back(n);
  }

  bool all_pass = true;
  for (int n : which) {
    Outcome outcome;
    try {
      outcome = kCriteria[n - 1]();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d: %s  %s\n", n, outcome.pass ? "PASS" : "FAIL",
                outcome.detail.c_str());
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
