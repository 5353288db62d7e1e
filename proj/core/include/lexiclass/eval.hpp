#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lexiclass/corpus.hpp"
#include "lexiclass/features.hpp"
#include "lexiclass/labels.hpp"
#include "lexiclass/masking.hpp"
#include "lexiclass/svm.hpp"
#include "lexiclass/textnorm.hpp"

namespace lexiclass::eval {

struct EvalConfig {
  std::size_t folds = 10;
  std::uint64_t seed = 0;  // fold shuffling
};

struct FoldAssignment {
  std::vector<std::size_t> fold_of;  // one fold index per instance
  std::vector<std::string> warnings;
};

/// Per class (sorted label order): shuffle that class's instances with the
/// seeded generator, deal them round-robin across folds starting at fold 0.
/// Per-class per-fold counts differ by at most 1. Classes with fewer
/// instances than k are allowed and reported in warnings. Throws Error when
/// k < 2 or there are fewer instances than folds.
FoldAssignment stratified_kfold(const std::vector<std::string>& y,
                                std::size_t k, std::uint64_t seed);

/// Rows = gold class, columns = predicted class, both in class_order.
struct ConfusionMatrix {
  std::vector<std::string> class_order;
  std::vector<std::size_t> counts;  // row-major, k*k

  static ConfusionMatrix zero(std::vector<std::string> class_order);

  std::size_t k() const noexcept { return class_order.size(); }
  std::size_t& at(std::size_t gold, std::size_t pred) {
    return counts[gold * k() + pred];
  }
  std::size_t at(std::size_t gold, std::size_t pred) const {
    return counts[gold * k() + pred];
  }
  std::size_t total() const;
  std::size_t trace() const;
  void add(const ConfusionMatrix& other);
};

/// Throws Error on length mismatch or labels outside class_order.
ConfusionMatrix confusion(const std::vector<std::string>& gold,
                          const std::vector<std::string>& pred,
                          const std::vector<std::string>& class_order);

struct ClassMetrics {
  std::string label;
  std::size_t support = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsBlock {
  std::vector<ClassMetrics> per_class;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  /// Count of per-class precision/recall/F1 values forced to 0 by an empty
  /// denominator.
  std::size_t zero_denominator_events = 0;
};

/// Per-class precision tp/(tp+fp), recall tp/(tp+fn), F1 harmonic mean, all
/// 0 on empty denominators; weighted averages use gold support, macro
/// averages are unweighted; accuracy = trace/total. Accuracy always equals
/// weighted recall.
MetricsBlock metrics_from_confusion(const ConfusionMatrix& cm);

/// Expected accuracy of a prior-sampling baseline: sum over classes of
/// (count/total)^2. Throws Error on empty or nonpositive counts.
double expected_dummy_accuracy(const std::map<std::string, std::size_t>& counts);

enum class Task {
  law_area,
  ruling_first_word,
  ruling_multi_word,
  temporal_7,
  temporal_14
};

std::string task_name(Task task);
Task task_from_name(const std::string& name);

enum class VocabMode { full_corpus, per_fold };

struct ExperimentConfig {
  Task task = Task::law_area;
  features::NgramRange ngrams{1, 1};
  features::FeatureMode feature_mode = features::FeatureMode::bow_only;
  labels::LabelConfig label_config;
  /// Apply the task's masking: label lexicon for the law-area and ruling
  /// tasks, digit stripping for the temporal tasks.
  bool mask = true;
  masking::VariantMap variant_map = masking::default_variant_map();
  svm::SvmConfig svm;
  EvalConfig eval;
  std::uint64_t dummy_seed = 0;
  /// Vocabulary from the whole surviving corpus (default) or rebuilt from
  /// the training folds only.
  VocabMode vocab_mode = VocabMode::full_corpus;
  std::size_t jobs = 1;

  std::string to_json() const;
};

/// Documents reduced to one task's instances: masked token sequences plus
/// extracted, support-filtered labels.
struct TaskDataset {
  std::vector<std::string> ids;
  std::vector<textnorm::TokenSeq> tokens;
  std::vector<std::string> labels;
  std::vector<std::string> class_order;  // sorted surviving labels
  std::map<std::string, std::size_t> label_counts;
  masking::MaskLexicon lexicon;  // empty for the temporal tasks
  std::vector<std::string> warnings;
};

/// extract labels -> filter by support -> normalize/tokenize -> mask.
/// Documents missing the task's label field are dropped. Throws Error when
/// fewer than 2 classes survive (the diagnostic names the task and the
/// surviving classes).
TaskDataset build_task_dataset(const std::vector<corpus::Document>& docs,
                               const ExperimentConfig& config);

struct FoldOutcome {
  ConfusionMatrix svm_confusion;
  ConfusionMatrix dummy_confusion;
};

struct EvalReport {
  std::string task;
  std::vector<std::string> class_order;
  std::size_t instances = 0;
  std::size_t vocab_size = 0;
  std::vector<FoldOutcome> folds;
  MetricsBlock svm;    // from the summed confusion
  MetricsBlock dummy;  // same protocol, prior-sampling baseline
  double expected_dummy = 0.0;  // analytic sum of squared priors
  std::vector<std::string> warnings;
  std::string config_json;

  std::string to_json() const;
  /// Aligned table with one row per model: P, R, F1, Acc columns.
  std::string to_text_table() const;
};

/// The full protocol: build_task_dataset, stratified k-fold, per fold train
/// on the other folds and predict the held-out one (SVM and the dummy
/// baseline side by side), aggregate metrics from the summed confusions.
EvalReport run_experiment(const std::vector<corpus::Document>& docs,
                          const ExperimentConfig& config);

/// Artifacts of a full-corpus training run, ready to persist.
struct TrainedPipeline {
  features::Vocabulary vocab;
  svm::SvmModel model;
  masking::MaskLexicon lexicon;
  std::vector<std::string> warnings;
};

TrainedPipeline train_pipeline(const std::vector<corpus::Document>& docs,
                               const ExperimentConfig& config);

/// Applies a trained pipeline to new documents: tokenize, mask with the
/// stored lexicon, vectorize against the stored vocabulary, predict.
std::vector<std::string> predict_pipeline(
    const std::vector<corpus::Document>& docs, const ExperimentConfig& config,
    const TrainedPipeline& pipeline);

/// Runs fn(0..n-1) on up to jobs threads; order of completion is
/// unobservable because results must be written to index-addressed slots.
void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace lexiclass::eval
