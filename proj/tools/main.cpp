// lexiclass: corpus ingestion, label clustering, mask auditing, cross-validated
// SVM experiments, model training/prediction, and synthetic corpus generation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexiclass/corpus.hpp"
#include "lexiclass/errors.hpp"
#include "lexiclass/eval.hpp"
#include "lexiclass/features.hpp"
#include "lexiclass/labels.hpp"
#include "lexiclass/masking.hpp"
#include "lexiclass/rng.hpp"
#include "lexiclass/svm.hpp"
#include "lexiclass/textnorm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lexiclass;

namespace {

struct Options {
  std::string config_path;
  std::string corpus_path;
  std::string format = "jsonl";
  std::string task = "law-area";
  int ngrams = 1;
  std::string features = "bow";
  int min_support = 200;
  std::string threshold_mode = "inclusive";
  int folds = 10;
  double c = 0.1;
  double tolerance = 1e-4;
  int max_epochs = 1000;
  std::string loss = "squared_hinge";
  bool no_bias = false;
  bool no_mask = false;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out = ".";
  std::string lexicon_path;
  std::string vocab_mode = "full-corpus";
  std::vector<std::string> required_fields;
  int cut_k = 0;
  int top_k = 20;
  std::string model_dir;

  // synth
  int synth_classes = 5;
  int docs_per_class = 200;
  double signal_ratio = 0.3;
  int shared_vocab = 100;
  int class_vocab = 20;
  int min_tokens = 40;
  int max_tokens = 80;
  bool leak = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error("I/O error reading: " + path);
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << content;
  if (!out) throw Error("I/O error writing: " + path.string());
}

eval::Task task_from_cli(const std::string& name) {
  if (name == "law-area") return eval::Task::law_area;
  if (name == "ruling-first") return eval::Task::ruling_first_word;
  if (name == "ruling-multi") return eval::Task::ruling_multi_word;
  if (name == "temporal-7") return eval::Task::temporal_7;
  if (name == "temporal-14") return eval::Task::temporal_14;
  throw ConfigError("unknown task: " + name);
}

corpus::CorpusFormat format_from_cli(const std::string& name) {
  if (name == "jsonl") return corpus::CorpusFormat::jsonl;
  if (name == "xml") return corpus::CorpusFormat::xml_subset;
  throw ConfigError("unknown corpus format: " + name);
}

void add_corpus_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--corpus", o.corpus_path, "Corpus file to read");
  cmd.add_option("--format", o.format, "Corpus format: jsonl or xml")
      ->check(CLI::IsMember({"jsonl", "xml"}));
}

void add_task_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--task", o.task, "Prediction task")
      ->check(CLI::IsMember({"law-area", "ruling-first", "ruling-multi",
                             "temporal-7", "temporal-14"}));
  cmd.add_option("--min-support", o.min_support,
                 "Minimum instances for a label to survive");
  cmd.add_option("--threshold-mode", o.threshold_mode,
                 "Support threshold comparison")
      ->check(CLI::IsMember({"inclusive", "exclusive"}));
  cmd.add_flag("--no-mask", o.no_mask, "Disable the task's masking step");
  cmd.add_option("--lexicon", o.lexicon_path,
                 "Variant lexicon JSON (word -> [variants])");
}

void add_feature_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--ngrams", o.ngrams,
                 "1: unigrams; 2: unigrams plus bigrams")
      ->check(CLI::IsMember({1, 2}));
  cmd.add_option("--features", o.features, "Feature set")
      ->check(CLI::IsMember({"bow", "ttr", "bow+ttr"}));
}

void add_svm_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--c", o.c, "SVM regularization parameter C");
  cmd.add_option("--tolerance", o.tolerance,
                 "Solver convergence tolerance (max projected gradient)");
  cmd.add_option("--max-epochs", o.max_epochs, "Solver epoch cap");
  cmd.add_option("--loss", o.loss, "SVM loss")
      ->check(CLI::IsMember({"squared_hinge", "hinge"}));
  cmd.add_flag("--no-bias", o.no_bias, "Drop the augmented bias feature");
}

void add_run_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--config", o.config_path,
                 "JSON config file (flags take precedence)");
  cmd.add_option("--seed", o.seed, "Global seed");
  cmd.add_option("--jobs", o.jobs, "Parallel worker cap")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--out", o.out, "Output directory");
}

/// File values apply only where the command has the flag and the user did
/// not pass it; unknown keys are rejected against the global key set.
void apply_config_file(CLI::App& cmd, Options& o) {
  if (o.config_path.empty()) return;
  json cfg;
  try {
    cfg = json::parse(read_file(o.config_path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + o.config_path + ": " + e.what());
  }
  if (!cfg.is_object()) {
    throw ConfigError("config file must hold a JSON object");
  }

  static const std::set<std::string> known = {
      "corpus",       "format",       "task",         "ngrams",
      "features",     "min_support",  "threshold_mode", "folds",
      "c",            "tolerance",    "max_epochs",   "loss",
      "use_bias",     "mask",         "seed",         "jobs",
      "out",          "lexicon",      "vocab_mode",   "required_fields",
      "cut",          "top",          "model_dir",    "classes",
      "docs_per_class", "signal_ratio", "shared_vocab", "class_vocab",
      "min_tokens",   "max_tokens",   "leak"};
  for (const auto& [key, value] : cfg.items()) {
    if (!known.count(key)) {
      throw ConfigError("config file: unknown key \"" + key + "\"");
    }
  }

  const auto set_if = [&](const char* flag, const char* key, auto& dst) {
    if (!cfg.contains(key)) return;
    const CLI::Option* opt = cmd.get_option_no_throw(flag);
    if (!opt || opt->count() > 0) return;
    try {
      cfg.at(key).get_to(dst);
    } catch (const json::exception&) {
      throw ConfigError(std::string("config file: bad value for \"") + key +
                        "\"");
    }
  };
  set_if("--corpus", "corpus", o.corpus_path);
  set_if("--format", "format", o.format);
  set_if("--task", "task", o.task);
  set_if("--ngrams", "ngrams", o.ngrams);
  set_if("--features", "features", o.features);
  set_if("--min-support", "min_support", o.min_support);
  set_if("--threshold-mode", "threshold_mode", o.threshold_mode);
  set_if("--folds", "folds", o.folds);
  set_if("--c", "c", o.c);
  set_if("--tolerance", "tolerance", o.tolerance);
  set_if("--max-epochs", "max_epochs", o.max_epochs);
  set_if("--loss", "loss", o.loss);
  set_if("--seed", "seed", o.seed);
  set_if("--jobs", "jobs", o.jobs);
  set_if("--out", "out", o.out);
  set_if("--lexicon", "lexicon", o.lexicon_path);
  set_if("--vocab-mode", "vocab_mode", o.vocab_mode);
  set_if("--require", "required_fields", o.required_fields);
  set_if("--cut", "cut", o.cut_k);
  set_if("--top", "top", o.top_k);
  set_if("--model-dir", "model_dir", o.model_dir);
  set_if("--classes", "classes", o.synth_classes);
  set_if("--docs-per-class", "docs_per_class", o.docs_per_class);
  set_if("--signal", "signal_ratio", o.signal_ratio);
  set_if("--shared-vocab", "shared_vocab", o.shared_vocab);
  set_if("--class-vocab", "class_vocab", o.class_vocab);
  set_if("--min-tokens", "min_tokens", o.min_tokens);
  set_if("--max-tokens", "max_tokens", o.max_tokens);

  if (cfg.contains("mask") && cmd.count("--no-mask") == 0 &&
      cmd.get_option_no_throw("--no-mask")) {
    o.no_mask = !cfg.at("mask").get<bool>();
  }
  if (cfg.contains("use_bias") && cmd.count("--no-bias") == 0 &&
      cmd.get_option_no_throw("--no-bias")) {
    o.no_bias = !cfg.at("use_bias").get<bool>();
  }
  if (cfg.contains("leak") && cmd.count("--leak") == 0 &&
      cmd.get_option_no_throw("--leak")) {
    o.leak = cfg.at("leak").get<bool>();
  }
}

eval::ExperimentConfig make_experiment_config(const Options& o) {
  eval::ExperimentConfig cfg;
  cfg.task = task_from_cli(o.task);
  cfg.ngrams = {1, o.ngrams};
  cfg.feature_mode = features::feature_mode_from_name(o.features);
  if (o.min_support < 1) throw ConfigError("min-support must be >= 1");
  cfg.label_config.min_support = static_cast<std::size_t>(o.min_support);
  cfg.label_config.threshold_mode = o.threshold_mode == "inclusive"
                                        ? labels::ThresholdMode::inclusive
                                        : labels::ThresholdMode::exclusive;
  cfg.mask = !o.no_mask;
  if (!o.lexicon_path.empty()) {
    cfg.variant_map = masking::variant_map_from_json(read_file(o.lexicon_path));
  }
  cfg.svm.C = o.c;
  cfg.svm.tolerance = o.tolerance;
  if (o.max_epochs < 1) throw ConfigError("max-epochs must be >= 1");
  cfg.svm.max_epochs = static_cast<std::size_t>(o.max_epochs);
  cfg.svm.seed = derive_seed(o.seed, "svm");
  cfg.svm.use_bias = !o.no_bias;
  cfg.svm.loss = svm::loss_from_name(o.loss);
  if (o.folds < 2) throw ConfigError("folds must be >= 2");
  cfg.eval.folds = static_cast<std::size_t>(o.folds);
  cfg.eval.seed = derive_seed(o.seed, "folds");
  cfg.dummy_seed = derive_seed(o.seed, "dummy");
  if (o.vocab_mode == "full-corpus") {
    cfg.vocab_mode = eval::VocabMode::full_corpus;
  } else if (o.vocab_mode == "per-fold") {
    cfg.vocab_mode = eval::VocabMode::per_fold;
  } else {
    throw ConfigError("unknown vocab mode: " + o.vocab_mode);
  }
  cfg.jobs = static_cast<std::size_t>(std::max(o.jobs, 1));
  return cfg;
}

std::vector<corpus::Document> load_corpus(const Options& o) {
  if (o.corpus_path.empty()) {
    throw ConfigError("no corpus file given (--corpus)");
  }
  std::ifstream in(o.corpus_path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file: " + o.corpus_path);
  return corpus::parse_corpus(in, format_from_cli(o.format));
}

fs::path prepare_out_dir(const Options& o) {
  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory: " + dir.string());
  return dir;
}

void write_config_echo(const fs::path& out_dir, const std::string& command,
                       const Options& o) {
  json j;
  j["command"] = command;
  j["corpus"] = o.corpus_path;
  j["format"] = o.format;
  j["task"] = o.task;
  j["ngrams"] = o.ngrams;
  j["features"] = o.features;
  j["min_support"] = o.min_support;
  j["threshold_mode"] = o.threshold_mode;
  j["folds"] = o.folds;
  j["c"] = o.c;
  j["tolerance"] = o.tolerance;
  j["max_epochs"] = o.max_epochs;
  j["loss"] = o.loss;
  j["use_bias"] = !o.no_bias;
  j["mask"] = !o.no_mask;
  j["seed"] = o.seed;
  j["jobs"] = o.jobs;
  j["out"] = o.out;
  j["lexicon"] = o.lexicon_path;
  j["vocab_mode"] = o.vocab_mode;
  j["required_fields"] = o.required_fields;
  j["cut"] = o.cut_k;
  j["top"] = o.top_k;
  j["model_dir"] = o.model_dir;
  j["synth"] = {{"classes", o.synth_classes},
                {"docs_per_class", o.docs_per_class},
                {"signal_ratio", o.signal_ratio},
                {"shared_vocab", o.shared_vocab},
                {"class_vocab", o.class_vocab},
                {"min_tokens", o.min_tokens},
                {"max_tokens", o.max_tokens},
                {"leak", o.leak}};
  j["derived_seeds"] = {{"synth", derive_seed(o.seed, "synth")},
                        {"folds", derive_seed(o.seed, "folds")},
                        {"svm", derive_seed(o.seed, "svm")},
                        {"dummy", derive_seed(o.seed, "dummy")}};
  write_file(out_dir / "effective_config.json", j.dump(2) + "\n");
}

std::string lexicon_to_json(const masking::MaskLexicon& lexicon) {
  json j;
  j["forbidden"] = lexicon.forbidden;
  j["variant_map"] = json::object();
  for (const auto& [word, variants] : lexicon.variant_map) {
    j["variant_map"][word] = variants;
  }
  return j.dump(2);
}

masking::MaskLexicon lexicon_from_json(const std::string& text) {
  json j = json::parse(text);
  masking::MaskLexicon lexicon;
  for (const auto& tok : j.at("forbidden")) {
    lexicon.forbidden.insert(tok.get<std::string>());
  }
  for (const auto& [word, variants] : j.at("variant_map").items()) {
    auto& dst = lexicon.variant_map[word];
    for (const auto& v : variants) dst.insert(v.get<std::string>());
  }
  return lexicon;
}

int cmd_ingest(const Options& o) {
  const auto docs = load_corpus(o);
  std::set<corpus::Field> required;
  if (o.required_fields.empty()) {
    required.insert(corpus::Field::description);
  } else {
    for (const std::string& name : o.required_fields) {
      required.insert(corpus::field_from_name(name));
    }
  }
  auto [kept, stats] = corpus::dedupe_and_filter(docs, required);

  const fs::path out_dir = prepare_out_dir(o);
  write_config_echo(out_dir, "ingest", o);
  write_file(out_dir / "stats.json", stats.to_json() + "\n");
  std::ofstream cleaned(out_dir / "cleaned.jsonl", std::ios::binary);
  if (!cleaned) throw Error("cannot write cleaned.jsonl");
  corpus::write_jsonl(cleaned, kept);

  std::cout << "ingest: " << docs.size() << " read, " << kept.size()
            << " kept (" << stats.duplicates_removed << " duplicates, "
            << stats.incomplete_removed << " incomplete)\n";
  return 0;
}

int cmd_cluster_labels(const Options& o) {
  const auto docs = load_corpus(o);
  eval::ExperimentConfig cfg = make_experiment_config(o);
  const eval::TaskDataset ds = eval::build_task_dataset(docs, cfg);

  const labels::LabelVectors vectors = labels::label_vectors(ds.class_order);
  const labels::Dendrogram dendro =
      labels::ward_cluster(vectors.counts, ds.class_order);

  const fs::path out_dir = prepare_out_dir(o);
  write_config_echo(out_dir, "cluster-labels", o);
  write_file(out_dir / "dendrogram.json", dendro.to_json() + "\n");
  write_file(out_dir / "dendrogram.newick", dendro.to_newick() + "\n");
  if (o.cut_k > 0) {
    const auto clusters =
        labels::cut_dendrogram(dendro, static_cast<std::size_t>(o.cut_k));
    write_file(out_dir / "clusters.json", json(clusters).dump(2) + "\n");
  }
  std::cout << "cluster-labels: " << ds.class_order.size()
            << " labels clustered\n";
  return 0;
}

int cmd_mask_audit(const Options& o) {
  const auto docs = load_corpus(o);
  eval::ExperimentConfig cfg = make_experiment_config(o);
  const eval::TaskDataset ds = eval::build_task_dataset(docs, cfg);

  const auto vocab = features::Vocabulary::build(ds.tokens, cfg.ngrams);
  const SparseMatrix X = features::vectorize_all(ds.tokens, vocab);

  std::map<std::string, int> class_ids;
  for (std::size_t i = 0; i < ds.class_order.size(); ++i) {
    class_ids[ds.class_order[i]] = static_cast<int>(i);
  }
  std::vector<int> y;
  y.reserve(ds.labels.size());
  for (const std::string& label : ds.labels) y.push_back(class_ids[label]);

  const std::set<std::string> label_set(ds.class_order.begin(),
                                        ds.class_order.end());
  const masking::MaskLexicon lexicon =
      masking::build_mask_lexicon(label_set, cfg.variant_map).lexicon;
  if (o.top_k < 1) throw ConfigError("top must be >= 1");
  const masking::MaskAuditReport report = masking::audit_masking(
      X, y, vocab, lexicon, static_cast<std::size_t>(o.top_k));

  const fs::path out_dir = prepare_out_dir(o);
  write_config_echo(out_dir, "mask-audit", o);
  write_file(out_dir / "audit.json", report.to_json() + "\n");
  std::cout << "mask-audit: " << report.top_features.size()
            << " top features, " << report.violations.size()
            << " violation(s)\n";
  return 0;
}

int cmd_cv(const Options& o) {
  const auto docs = load_corpus(o);
  eval::ExperimentConfig cfg = make_experiment_config(o);

  const fs::path out_dir = prepare_out_dir(o);
  write_config_echo(out_dir, "cv", o);
  const eval::EvalReport report = eval::run_experiment(docs, cfg);
  write_file(out_dir / "report.json", report.to_json() + "\n");
  write_file(out_dir / "report.txt", report.to_text_table());

  std::cout << "cv: " << report.task << " on " << report.instances
            << " instances, weighted F1 " << report.svm.weighted_f1
            << " (dummy " << report.dummy.weighted_f1 << ")\n";
  return 0;
}

int cmd_train(const Options& o) {
  const auto docs = load_corpus(o);
  eval::ExperimentConfig cfg = make_experiment_config(o);

  const fs::path out_dir = prepare_out_dir(o);
  write_config_echo(out_dir, "train", o);
  const eval::TrainedPipeline pipeline = eval::train_pipeline(docs, cfg);
  write_file(out_dir / "model.json", pipeline.model.to_json() + "\n");
  write_file(out_dir / "vocab.json", pipeline.vocab.to_json() + "\n");
  write_file(out_dir / "lexicon.json", lexicon_to_json(pipeline.lexicon) + "\n");

  std::cout << "train: " << pipeline.model.class_order.size() << " classes, "
            << pipeline.vocab.size() << " features\n";
  return 0;
}

int cmd_predict(const Options& o) {
  if (o.model_dir.empty()) {
    throw ConfigError("no model directory given (--model-dir)");
  }
  const fs::path model_dir(o.model_dir);
  json echo;
  try {
    echo = json::parse(read_file((model_dir / "effective_config.json").string()));
  } catch (const json::parse_error& e) {
    throw Error(std::string("bad effective_config.json: ") + e.what());
  }

  Options model_opts = o;
  model_opts.task = echo.at("task").get<std::string>();
  model_opts.ngrams = echo.at("ngrams").get<int>();
  model_opts.features = echo.at("features").get<std::string>();
  model_opts.no_mask = !echo.at("mask").get<bool>();
  model_opts.min_support = echo.at("min_support").get<int>();
  model_opts.threshold_mode = echo.at("threshold_mode").get<std::string>();
  model_opts.lexicon_path.clear();
  eval::ExperimentConfig cfg = make_experiment_config(model_opts);

  eval::TrainedPipeline pipeline;
  pipeline.model =
      svm::SvmModel::from_json(read_file((model_dir / "model.json").string()));
  pipeline.vocab = features::Vocabulary::from_json(
      read_file((model_dir / "vocab.json").string()), cfg.ngrams);
  pipeline.lexicon =
      lexicon_from_json(read_file((model_dir / "lexicon.json").string()));

  const auto docs = load_corpus(o);
  const auto predictions = eval::predict_pipeline(docs, cfg, pipeline);

  const fs::path out_dir = prepare_out_dir(o);
  write_config_echo(out_dir, "predict", o);
  std::ofstream out(out_dir / "predictions.jsonl", std::ios::binary);
  if (!out) throw Error("cannot write predictions.jsonl");
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out << json{{"id", docs[i].id}, {"label", predictions[i]}}.dump() << '\n';
  }
  std::cout << "predict: " << docs.size() << " documents scored\n";
  return 0;
}

int cmd_synth(const Options& o) {
  corpus::SynthSpec spec;
  if (o.synth_classes < 2) throw ConfigError("classes must be >= 2");
  for (int i = 0; i < o.synth_classes; ++i) {
    corpus::SynthClass cls;
    std::string suffix;
    int n = i;
    do {
      suffix += static_cast<char>('a' + n % 26);
      n /= 26;
    } while (n > 0);
    cls.label = "class" + suffix;
    cls.year = std::min(1950 + 10 * i, 2015);
    spec.classes.push_back(std::move(cls));
  }
  spec.docs_per_class = o.docs_per_class;
  spec.shared_vocab_size = o.shared_vocab;
  spec.class_vocab_size = o.class_vocab;
  spec.min_tokens = o.min_tokens;
  spec.max_tokens = o.max_tokens;
  spec.signal_ratio = o.signal_ratio;
  spec.leak_labels = o.leak;

  const auto docs =
      corpus::generate_synthetic(spec, derive_seed(o.seed, "synth"));

  const fs::path out_dir = prepare_out_dir(o);
  write_config_echo(out_dir, "synth", o);
  std::ofstream out(out_dir / "corpus.jsonl", std::ios::binary);
  if (!out) throw Error("cannot write corpus.jsonl");
  corpus::write_jsonl(out, docs);

  std::cout << "synth: " << docs.size() << " documents written\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Legal text classification pipeline"};
  app.require_subcommand(1);
  Options o;

  CLI::App* ingest = app.add_subcommand(
      "ingest", "Parse a corpus, drop duplicates/incomplete entries");
  add_corpus_options(*ingest, o);
  add_run_options(*ingest, o);
  ingest->add_option("--require", o.required_fields,
                     "Fields an entry must carry to be kept");

  CLI::App* cluster = app.add_subcommand(
      "cluster-labels", "Ward-cluster the task's surviving labels");
  add_corpus_options(*cluster, o);
  add_task_options(*cluster, o);
  add_run_options(*cluster, o);
  cluster->add_option("--cut", o.cut_k, "Also export a k-cluster cut");

  CLI::App* audit = app.add_subcommand(
      "mask-audit", "Rank features by ANOVA F and flag label leaks");
  add_corpus_options(*audit, o);
  add_task_options(*audit, o);
  add_feature_options(*audit, o);
  add_run_options(*audit, o);
  audit->add_option("--top", o.top_k, "Number of top features to report");

  CLI::App* cv = app.add_subcommand(
      "cv", "Stratified cross-validated SVM experiment");
  add_corpus_options(*cv, o);
  add_task_options(*cv, o);
  add_feature_options(*cv, o);
  add_svm_options(*cv, o);
  add_run_options(*cv, o);
  cv->add_option("--folds", o.folds, "Number of folds");
  cv->add_option("--vocab-mode", o.vocab_mode,
                 "Vocabulary scope: full-corpus or per-fold")
      ->check(CLI::IsMember({"full-corpus", "per-fold"}));

  CLI::App* train = app.add_subcommand(
      "train", "Train on the full corpus and persist the model");
  add_corpus_options(*train, o);
  add_task_options(*train, o);
  add_feature_options(*train, o);
  add_svm_options(*train, o);
  add_run_options(*train, o);

  CLI::App* predict = app.add_subcommand(
      "predict", "Score new documents with a persisted model");
  add_corpus_options(*predict, o);
  add_run_options(*predict, o);
  predict->add_option("--model-dir", o.model_dir,
                      "Directory written by the train command");

  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a seeded synthetic corpus");
  add_run_options(*synth, o);
  synth->add_option("--classes", o.synth_classes, "Number of classes");
  synth->add_option("--docs-per-class", o.docs_per_class, "Documents per class");
  synth->add_option("--signal", o.signal_ratio,
                    "Fraction of class-specific tokens");
  synth->add_option("--shared-vocab", o.shared_vocab, "Shared vocabulary size");
  synth->add_option("--class-vocab", o.class_vocab,
                    "Per-class vocabulary size");
  synth->add_option("--min-tokens", o.min_tokens, "Minimum tokens per doc");
  synth->add_option("--max-tokens", o.max_tokens, "Maximum tokens per doc");
  synth->add_flag("--leak", o.leak, "Plant each label into its descriptions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    apply_config_file(*cmd, o);
    if (cmd == ingest) return cmd_ingest(o);
    if (cmd == cluster) return cmd_cluster_labels(o);
    if (cmd == audit) return cmd_mask_audit(o);
    if (cmd == cv) return cmd_cv(o);
    if (cmd == train) return cmd_train(o);
    if (cmd == predict) return cmd_predict(o);
    if (cmd == synth) return cmd_synth(o);
    std::cerr << "error: no subcommand dispatched\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
