#include "lexiclass/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lexiclass/errors.hpp"
#include "lexiclass/rng.hpp"

namespace lexiclass::eval {

using nlohmann::json;

FoldAssignment stratified_kfold(const std::vector<std::string>& y,
                                std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error("fold count must be >= 2");
  if (y.size() < k) throw Error("fewer instances than folds");

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);

  FoldAssignment out;
  out.fold_of.assign(y.size(), 0);
  std::size_t class_idx = 0;
  for (auto& [label, members] : by_class) {
    if (members.size() < k) {
      out.warnings.push_back("class \"" + label + "\" has " +
                             std::to_string(members.size()) +
                             " instances, fewer than " + std::to_string(k) +
                             " folds");
    }
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(class_idx)));
    rng.shuffle(members);
    for (std::size_t j = 0; j < members.size(); ++j) {
      out.fold_of[members[j]] = j % k;
    }
    ++class_idx;
  }
  return out;
}

ConfusionMatrix ConfusionMatrix::zero(std::vector<std::string> class_order) {
  ConfusionMatrix cm;
  cm.class_order = std::move(class_order);
  cm.counts.assign(cm.k() * cm.k(), 0);
  return cm;
}

std::size_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t t = 0;
  for (std::size_t i = 0; i < k(); ++i) t += at(i, i);
  return t;
}

void ConfusionMatrix::add(const ConfusionMatrix& other) {
  if (other.class_order != class_order) {
    throw Error("cannot add confusion matrices over different class orders");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

ConfusionMatrix confusion(const std::vector<std::string>& gold,
                          const std::vector<std::string>& pred,
                          const std::vector<std::string>& class_order) {
  if (gold.size() != pred.size()) {
    throw Error("gold and predicted label counts differ");
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < class_order.size(); ++i) {
    index[class_order[i]] = i;
  }
  ConfusionMatrix cm = ConfusionMatrix::zero(class_order);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto g = index.find(gold[i]);
    auto p = index.find(pred[i]);
    if (g == index.end() || p == index.end()) {
      throw Error("label outside the class order: " +
                  (g == index.end() ? gold[i] : pred[i]));
    }
    ++cm.at(g->second, p->second);
  }
  return cm;
}

MetricsBlock metrics_from_confusion(const ConfusionMatrix& cm) {
  const std::size_t k = cm.k();
  const std::size_t total = cm.total();
  MetricsBlock m;

  double weighted_p = 0.0, weighted_r = 0.0, weighted_f = 0.0;
  double macro_p = 0.0, macro_r = 0.0, macro_f = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t tp = cm.at(c, c), gold_c = 0, pred_c = 0;
    for (std::size_t j = 0; j < k; ++j) {
      gold_c += cm.at(c, j);
      pred_c += cm.at(j, c);
    }
    ClassMetrics cls;
    cls.label = cm.class_order[c];
    cls.support = gold_c;
    if (pred_c == 0) {
      ++m.zero_denominator_events;
    } else {
      cls.precision = static_cast<double>(tp) / static_cast<double>(pred_c);
    }
    if (gold_c == 0) {
      ++m.zero_denominator_events;
    } else {
      cls.recall = static_cast<double>(tp) / static_cast<double>(gold_c);
    }
    if (cls.precision + cls.recall == 0.0) {
      ++m.zero_denominator_events;
    } else {
      cls.f1 = 2.0 * cls.precision * cls.recall /
               (cls.precision + cls.recall);
    }
    weighted_p += cls.precision * static_cast<double>(gold_c);
    weighted_r += cls.recall * static_cast<double>(gold_c);
    weighted_f += cls.f1 * static_cast<double>(gold_c);
    macro_p += cls.precision;
    macro_r += cls.recall;
    macro_f += cls.f1;
    m.per_class.push_back(std::move(cls));
  }
  if (total > 0) {
    m.weighted_precision = weighted_p / static_cast<double>(total);
    m.weighted_recall = weighted_r / static_cast<double>(total);
    m.weighted_f1 = weighted_f / static_cast<double>(total);
    m.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  }
  if (k > 0) {
    m.macro_precision = macro_p / static_cast<double>(k);
    m.macro_recall = macro_r / static_cast<double>(k);
    m.macro_f1 = macro_f / static_cast<double>(k);
  }
  return m;
}

double expected_dummy_accuracy(
    const std::map<std::string, std::size_t>& counts) {
  if (counts.empty()) throw Error("empty label counts");
  double total = 0.0;
  for (const auto& [label, count] : counts) {
    if (count == 0) throw Error("label \"" + label + "\" has zero count");
    total += static_cast<double>(count);
  }
  double acc = 0.0;
  for (const auto& [label, count] : counts) {
    const double p = static_cast<double>(count) / total;
    acc += p * p;
  }
  return acc;
}

std::string task_name(Task task) {
  switch (task) {
    case Task::law_area: return "law_area";
    case Task::ruling_first_word: return "ruling_first_word";
    case Task::ruling_multi_word: return "ruling_multi_word";
    case Task::temporal_7: return "temporal_7";
    case Task::temporal_14: return "temporal_14";
  }
  return "?";
}

Task task_from_name(const std::string& name) {
  if (name == "law_area") return Task::law_area;
  if (name == "ruling_first_word") return Task::ruling_first_word;
  if (name == "ruling_multi_word") return Task::ruling_multi_word;
  if (name == "temporal_7") return Task::temporal_7;
  if (name == "temporal_14") return Task::temporal_14;
  throw ConfigError("unknown task: " + name);
}

void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  const std::size_t count = std::min(jobs, n);
  workers.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

namespace {

bool is_temporal(Task task) {
  return task == Task::temporal_7 || task == Task::temporal_14;
}

/// Raw task label for one document, or nullopt when the needed field is
/// absent (such documents drop out of the task).
std::optional<std::string> raw_task_label(const corpus::Document& doc,
                                          Task task) {
  switch (task) {
    case Task::law_area:
      if (!doc.law_area || doc.law_area->empty()) return std::nullopt;
      return *doc.law_area;
    case Task::ruling_first_word:
    case Task::ruling_multi_word:
      if (!doc.ruling_raw || doc.ruling_raw->empty()) return std::nullopt;
      return *doc.ruling_raw;
    case Task::temporal_7:
    case Task::temporal_14:
      if (!doc.decision_year) return std::nullopt;
      return std::to_string(*doc.decision_year);
  }
  return std::nullopt;
}

}  // namespace

TaskDataset build_task_dataset(const std::vector<corpus::Document>& docs,
                               const ExperimentConfig& config) {
  TaskDataset ds;

  const auto scheme = config.task == Task::temporal_14
                          ? labels::TemporalScheme::fourteen_class()
                          : labels::TemporalScheme::seven_class();
  const auto setup = config.task == Task::ruling_multi_word
                         ? labels::LabelSetup::multi_word
                         : labels::LabelSetup::first_word;

  std::vector<labels::Instance> instances;
  std::vector<const corpus::Document*> sources;
  std::size_t clamped = 0;
  for (const corpus::Document& doc : docs) {
    const auto raw = raw_task_label(doc, config.task);
    if (!raw) continue;
    std::string label;
    if (is_temporal(config.task)) {
      const auto bin = labels::bin_temporal(*doc.decision_year, scheme);
      if (bin.clamped) ++clamped;
      label = bin.label;
    } else {
      try {
        label = labels::extract_label(
            *raw, config.task == Task::law_area
                      ? labels::LabelSetup::multi_word
                      : setup);
      } catch (const Error&) {
        continue;  // label normalizes to empty: no usable instance
      }
    }
    instances.push_back({doc.id, std::move(label)});
    sources.push_back(&doc);
  }
  if (clamped > 0) {
    ds.warnings.push_back(std::to_string(clamped) +
                          " instance(s) predate the scheme floor and were "
                          "clamped to the earliest bin");
  }

  auto [kept_labels, filtered] =
      labels::filter_by_support(instances, config.label_config);
  if (kept_labels.size() < 2) {
    std::string classes;
    for (const std::string& label : kept_labels) {
      if (!classes.empty()) classes += ", ";
      classes += label;
    }
    throw Error("task " + task_name(config.task) + ": only " +
                std::to_string(kept_labels.size()) +
                " class(es) survive support filtering" +
                (classes.empty() ? "" : " (" + classes + ")"));
  }
  ds.class_order.assign(kept_labels.begin(), kept_labels.end());

  if (config.mask && !is_temporal(config.task)) {
    auto build = masking::build_mask_lexicon(kept_labels, config.variant_map);
    ds.lexicon = std::move(build.lexicon);
    for (std::string& w : build.warnings) ds.warnings.push_back(std::move(w));
  }

  std::map<std::string, const corpus::Document*> doc_of;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    doc_of[instances[i].id] = sources[i];
  }
  ds.ids.reserve(filtered.size());
  ds.tokens.resize(filtered.size());
  ds.labels.reserve(filtered.size());
  for (const labels::Instance& inst : filtered) {
    ds.ids.push_back(inst.id);
    ds.labels.push_back(inst.label);
    ++ds.label_counts[inst.label];
  }
  parallel_for(filtered.size(), config.jobs, [&](std::size_t i) {
    const corpus::Document& doc = *doc_of.at(filtered[i].id);
    auto tokens =
        textnorm::tokenize(textnorm::normalize(doc.description));
    if (config.mask) {
      tokens = is_temporal(config.task)
                   ? textnorm::strip_digits(tokens)
                   : masking::apply_mask(tokens, ds.lexicon);
    }
    ds.tokens[i] = std::move(tokens);
  });
  return ds;
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["task"] = task_name(task);
  j["ngrams"] = {{"lo", ngrams.lo}, {"hi", ngrams.hi}};
  j["features"] = features::feature_mode_name(feature_mode);
  j["min_support"] = label_config.min_support;
  j["threshold_mode"] =
      label_config.threshold_mode == labels::ThresholdMode::inclusive
          ? "inclusive"
          : "exclusive";
  j["mask"] = mask;
  j["variant_map"] = json::object();
  for (const auto& [word, variants] : variant_map) {
    j["variant_map"][word] = variants;
  }
  j["svm"] = {{"C", svm.C},
              {"tolerance", svm.tolerance},
              {"max_epochs", svm.max_epochs},
              {"seed", svm.seed},
              {"use_bias", svm.use_bias},
              {"loss", svm::loss_name(svm.loss)}};
  j["eval"] = {{"folds", eval.folds}, {"seed", eval.seed}};
  j["dummy_seed"] = dummy_seed;
  j["vocab_mode"] =
      vocab_mode == VocabMode::full_corpus ? "full_corpus" : "per_fold";
  j["jobs"] = jobs;
  return j.dump(2);
}

namespace {

struct FeatureBuilder {
  const TaskDataset& ds;
  const ExperimentConfig& config;

  SparseMatrix matrix(const features::Vocabulary& vocab,
                      std::span<const std::size_t> rows) const {
    std::vector<textnorm::TokenSeq> docs;
    docs.reserve(rows.size());
    for (std::size_t i : rows) docs.push_back(ds.tokens[i]);

    SparseMatrix X;
    if (config.feature_mode != features::FeatureMode::ttr_only) {
      X = features::vectorize_all(docs, vocab);
    } else {
      X = SparseMatrix::from_rows(
          0, std::vector<SparseVector>(docs.size(), SparseVector(0, {})));
    }
    if (config.feature_mode == features::FeatureMode::bow_only) return X;
    std::vector<double> ttr;
    ttr.reserve(docs.size());
    for (const auto& tokens : docs) {
      ttr.push_back(features::type_token_ratio(tokens));
    }
    return features::assemble_features(X, ttr, config.feature_mode);
  }
};

json metrics_to_json(const MetricsBlock& m) {
  json per_class = json::array();
  for (const ClassMetrics& c : m.per_class) {
    per_class.push_back({{"label", c.label},
                         {"support", c.support},
                         {"precision", c.precision},
                         {"recall", c.recall},
                         {"f1", c.f1}});
  }
  return {{"per_class", std::move(per_class)},
          {"weighted", {{"precision", m.weighted_precision},
                        {"recall", m.weighted_recall},
                        {"f1", m.weighted_f1}}},
          {"macro", {{"precision", m.macro_precision},
                     {"recall", m.macro_recall},
                     {"f1", m.macro_f1}}},
          {"accuracy", m.accuracy},
          {"zero_denominator_events", m.zero_denominator_events}};
}

json confusion_to_json(const ConfusionMatrix& cm) {
  json rows = json::array();
  for (std::size_t g = 0; g < cm.k(); ++g) {
    json row = json::array();
    for (std::size_t p = 0; p < cm.k(); ++p) row.push_back(cm.at(g, p));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

EvalReport run_experiment(const std::vector<corpus::Document>& docs,
                          const ExperimentConfig& config) {
  TaskDataset ds = build_task_dataset(docs, config);
  const std::size_t n = ds.labels.size();
  const std::size_t k = config.eval.folds;

  FoldAssignment assignment =
      stratified_kfold(ds.labels, k, config.eval.seed);

  EvalReport report;
  report.task = task_name(config.task);
  report.class_order = ds.class_order;
  report.instances = n;
  report.warnings = ds.warnings;
  for (std::string& w : assignment.warnings) {
    report.warnings.push_back(std::move(w));
  }
  report.config_json = config.to_json();

  features::Vocabulary full_vocab;
  if (config.vocab_mode == VocabMode::full_corpus) {
    full_vocab = features::Vocabulary::build(ds.tokens, config.ngrams);
    report.vocab_size = full_vocab.size();
  }

  const FeatureBuilder builder{ds, config};
  report.folds.assign(k, FoldOutcome{});

  parallel_for(k, config.jobs, [&](std::size_t fold) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < n; ++i) {
      (assignment.fold_of[i] == fold ? test_rows : train_rows).push_back(i);
    }
    std::vector<std::string> y_train, y_test;
    for (std::size_t i : train_rows) y_train.push_back(ds.labels[i]);
    for (std::size_t i : test_rows) y_test.push_back(ds.labels[i]);

    features::Vocabulary fold_vocab;
    const features::Vocabulary* vocab = &full_vocab;
    if (config.vocab_mode == VocabMode::per_fold) {
      std::vector<textnorm::TokenSeq> train_docs;
      train_docs.reserve(train_rows.size());
      for (std::size_t i : train_rows) train_docs.push_back(ds.tokens[i]);
      fold_vocab = features::Vocabulary::build(train_docs, config.ngrams);
      vocab = &fold_vocab;
    }

    const SparseMatrix X_train = builder.matrix(*vocab, train_rows);
    const SparseMatrix X_test = builder.matrix(*vocab, test_rows);

    svm::SvmConfig fold_svm = config.svm;
    fold_svm.seed =
        derive_seed(config.svm.seed, static_cast<std::uint64_t>(fold));
    const svm::SvmModel model = svm::train_ovr(X_train, y_train, fold_svm);
    const std::vector<std::string> pred = svm::predict(model, X_test);

    svm::DummyModel dummy = svm::dummy_fit(
        y_train, derive_seed(config.dummy_seed,
                             static_cast<std::uint64_t>(fold)));
    const std::vector<std::string> dummy_pred =
        svm::dummy_predict(dummy, y_test.size());

    report.folds[fold].svm_confusion =
        confusion(y_test, pred, ds.class_order);
    report.folds[fold].dummy_confusion =
        confusion(y_test, dummy_pred, ds.class_order);
  });

  ConfusionMatrix svm_total = ConfusionMatrix::zero(ds.class_order);
  ConfusionMatrix dummy_total = ConfusionMatrix::zero(ds.class_order);
  for (const FoldOutcome& fold : report.folds) {
    svm_total.add(fold.svm_confusion);
    dummy_total.add(fold.dummy_confusion);
  }
  report.svm = metrics_from_confusion(svm_total);
  report.dummy = metrics_from_confusion(dummy_total);
  report.expected_dummy = expected_dummy_accuracy(ds.label_counts);
  assert(std::fabs(report.svm.accuracy - report.svm.weighted_recall) < 1e-12);

  if (report.svm.zero_denominator_events +
          report.dummy.zero_denominator_events >
      0) {
    report.warnings.push_back(
        std::to_string(report.svm.zero_denominator_events +
                       report.dummy.zero_denominator_events) +
        " metric value(s) defaulted to 0 on an empty denominator");
  }
  return report;
}

std::string EvalReport::to_json() const {
  json j;
  j["task"] = task;
  j["class_order"] = class_order;
  j["instances"] = instances;
  j["vocab_size"] = vocab_size;
  j["svm"] = metrics_to_json(svm);
  j["dummy"] = metrics_to_json(dummy);
  j["expected_dummy_accuracy"] = expected_dummy;
  j["folds"] = json::array();
  for (const FoldOutcome& fold : folds) {
    j["folds"].push_back({{"svm_confusion", confusion_to_json(fold.svm_confusion)},
                          {"dummy_confusion",
                           confusion_to_json(fold.dummy_confusion)}});
  }
  j["warnings"] = warnings;
  j["config"] = config_json.empty() ? json::object() : json::parse(config_json);
  return j.dump(2);
}

std::string EvalReport::to_text_table() const {
  std::ostringstream os;
  os << "task: " << task << "   instances: " << instances
     << "   classes: " << class_order.size() << "   folds: " << folds.size()
     << "\n\n";
  os << std::left << std::setw(22) << "model" << std::right << std::setw(9)
     << "P" << std::setw(9) << "R" << std::setw(9) << "F1" << std::setw(9)
     << "Acc" << "\n";
  os << std::fixed << std::setprecision(4);
  const auto row = [&](const std::string& name, double p, double r, double f,
                       double acc) {
    os << std::left << std::setw(22) << name << std::right << std::setw(9)
       << p << std::setw(9) << r << std::setw(9) << f << std::setw(9) << acc
       << "\n";
  };
  row("svm (weighted)", svm.weighted_precision, svm.weighted_recall,
      svm.weighted_f1, svm.accuracy);
  row("svm (macro)", svm.macro_precision, svm.macro_recall, svm.macro_f1,
      svm.accuracy);
  row("dummy (weighted)", dummy.weighted_precision, dummy.weighted_recall,
      dummy.weighted_f1, dummy.accuracy);
  os << std::left << std::setw(22) << "dummy (expected)" << std::right
     << std::setw(9) << "-" << std::setw(9) << "-" << std::setw(9) << "-"
     << std::setw(9) << expected_dummy << "\n";

  os << "\nper-class (svm):\n";
  os << std::left << std::setw(28) << "class" << std::right << std::setw(9)
     << "support" << std::setw(9) << "P" << std::setw(9) << "R"
     << std::setw(9) << "F1" << "\n";
  for (const ClassMetrics& c : svm.per_class) {
    os << std::left << std::setw(28) << c.label << std::right << std::setw(9)
       << c.support << std::setw(9) << c.precision << std::setw(9) << c.recall
       << std::setw(9) << c.f1 << "\n";
  }
  if (!warnings.empty()) {
    os << "\nwarnings:\n";
    for (const std::string& w : warnings) os << "  - " << w << "\n";
  }
  return os.str();
}

TrainedPipeline train_pipeline(const std::vector<corpus::Document>& docs,
                               const ExperimentConfig& config) {
  TaskDataset ds = build_task_dataset(docs, config);
  TrainedPipeline out;
  out.lexicon = ds.lexicon;
  out.warnings = ds.warnings;
  if (config.feature_mode != features::FeatureMode::ttr_only) {
    out.vocab = features::Vocabulary::build(ds.tokens, config.ngrams);
  }

  std::vector<std::size_t> rows(ds.tokens.size());
  std::iota(rows.begin(), rows.end(), 0);
  const FeatureBuilder builder{ds, config};
  const SparseMatrix X = builder.matrix(out.vocab, rows);
  out.model = svm::train_ovr(X, ds.labels, config.svm);
  return out;
}

std::vector<std::string> predict_pipeline(
    const std::vector<corpus::Document>& docs, const ExperimentConfig& config,
    const TrainedPipeline& pipeline) {
  const bool temporal = is_temporal(config.task);
  std::vector<textnorm::TokenSeq> tokens(docs.size());
  parallel_for(docs.size(), config.jobs, [&](std::size_t i) {
    auto t = textnorm::tokenize(textnorm::normalize(docs[i].description));
    if (config.mask) {
      t = temporal ? textnorm::strip_digits(t)
                   : masking::apply_mask(t, pipeline.lexicon);
    }
    tokens[i] = std::move(t);
  });

  SparseMatrix X;
  if (config.feature_mode != features::FeatureMode::ttr_only) {
    X = features::vectorize_all(tokens, pipeline.vocab);
  } else {
    X = SparseMatrix::from_rows(
        0, std::vector<SparseVector>(tokens.size(), SparseVector(0, {})));
  }
  if (config.feature_mode != features::FeatureMode::bow_only) {
    std::vector<double> ttr;
    ttr.reserve(tokens.size());
    for (const auto& t : tokens) ttr.push_back(features::type_token_ratio(t));
    X = features::assemble_features(X, ttr, config.feature_mode);
  }
  return svm::predict(pipeline.model, X);
}

}  // namespace lexiclass::eval
