#include "lexiclass/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "lexiclass/errors.hpp"
#include "lexiclass/rng.hpp"

namespace lexiclass::svm {

using nlohmann::json;

std::string loss_name(LossKind loss) {
  return loss == LossKind::squared_hinge ? "squared_hinge" : "hinge";
}

LossKind loss_from_name(const std::string& name) {
  if (name == "squared_hinge") return LossKind::squared_hinge;
  if (name == "hinge") return LossKind::hinge;
  throw ConfigError("unknown loss: " + name);
}

namespace {

void check_config(const SvmConfig& config) {
  if (config.C <= 0.0) throw ConfigError("C must be positive");
  if (config.tolerance <= 0.0) throw ConfigError("tolerance must be positive");
  if (config.max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
}

double dot(std::span<const double> w, std::span<const SparseEntry> row) {
  double s = 0.0;
  for (const SparseEntry& e : row) s += w[e.index] * e.value;
  return s;
}

void axpy(double a, std::span<const SparseEntry> row, std::vector<double>& w) {
  for (const SparseEntry& e : row) w[e.index] += a * e.value;
}

/// Canonical row order: sort by (y, row content). Identical (x, y) pairs are
/// interchangeable, so this makes training invariant to input row order for
/// a fixed seed.
std::vector<std::size_t> canonical_order(const SparseMatrix& X,
                                         std::span<const int> y) {
  std::vector<std::size_t> order(X.rows());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (y[a] != y[b]) return y[a] < y[b];
    const auto ra = X.row(a);
    const auto rb = X.row(b);
    return std::lexicographical_compare(
        ra.begin(), ra.end(), rb.begin(), rb.end(),
        [](const SparseEntry& p, const SparseEntry& q) {
          if (p.index != q.index) return p.index < q.index;
          return p.value < q.value;
        });
  });
  return order;
}

BinaryDetail solve(const SparseMatrix& X, std::span<const int> y,
                   const SvmConfig& config) {
  const std::size_t n = X.rows();
  const double diag =
      config.loss == LossKind::squared_hinge ? 1.0 / (2.0 * config.C) : 0.0;
  const double upper = config.loss == LossKind::squared_hinge
                           ? std::numeric_limits<double>::infinity()
                           : config.C;

  const std::vector<std::size_t> order = canonical_order(X, y);

  std::vector<double> qd(n);
  for (std::size_t t = 0; t < n; ++t) {
    double sq = diag;
    for (const SparseEntry& e : X.row(order[t])) sq += e.value * e.value;
    qd[t] = sq;
  }

  BinaryDetail out;
  out.weights.assign(X.cols(), 0.0);
  out.alpha.assign(n, 0.0);
  std::vector<double>& w = out.weights;
  std::vector<double>& alpha = out.alpha;

  Rng rng(config.seed);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);

  for (out.epochs = 1; out.epochs <= config.max_epochs; ++out.epochs) {
    rng.shuffle(idx);
    double max_violation = 0.0;
    for (std::size_t t : idx) {
      const std::size_t i = order[t];
      const auto row = X.row(i);
      const double yi = y[i];
      const double g = yi * dot(w, row) - 1.0 + alpha[t] * diag;

      double pg = g;
      if (alpha[t] == 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha[t] >= upper) {
        pg = std::max(g, 0.0);
      }
      max_violation = std::max(max_violation, std::fabs(pg));
      if (pg == 0.0) continue;

      const double next =
          std::clamp(alpha[t] - g / qd[t], 0.0, upper);
      const double delta = next - alpha[t];
      alpha[t] = next;
      if (delta != 0.0) axpy(delta * yi, row, w);
    }
    if (max_violation < config.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.epochs = std::min(out.epochs, config.max_epochs);

  double w_sq = 0.0;
  for (double v : w) w_sq += v * v;
  double alpha_sum = 0.0, alpha_sq = 0.0;
  for (double a : alpha) {
    alpha_sum += a;
    alpha_sq += a * a;
  }
  out.dual_objective = alpha_sum - 0.5 * (w_sq + diag * alpha_sq);

  double loss_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double slack = std::max(0.0, 1.0 - y[i] * dot(w, X.row(i)));
    loss_sum += config.loss == LossKind::squared_hinge ? slack * slack : slack;
  }
  out.primal_objective = 0.5 * w_sq + config.C * loss_sum;
  return out;
}

SparseMatrix with_bias(const SparseMatrix& X) {
  return X.append_column(std::vector<double>(X.rows(), 1.0));
}

void check_trainable(const SparseMatrix& X, std::span<const int> y) {
  if (X.rows() == 0) throw Error("cannot train on an empty matrix");
  if (y.size() != X.rows()) throw Error("label count does not match rows");
  if (!X.all_finite()) throw Error("non-finite feature values");
  for (int v : y) {
    if (v != 1 && v != -1) throw Error("binary labels must be +1 or -1");
  }
}

}  // namespace

BinaryDetail train_binary_detail(const SparseMatrix& X, std::span<const int> y,
                                 const SvmConfig& config) {
  check_config(config);
  check_trainable(X, y);
  if (config.use_bias) return solve(with_bias(X), y, config);
  return solve(X, y, config);
}

std::vector<double> train_binary(const SparseMatrix& X, std::span<const int> y,
                                 const SvmConfig& config) {
  return train_binary_detail(X, y, config).weights;
}

SvmModel train_ovr(const SparseMatrix& X, const std::vector<std::string>& y,
                   const SvmConfig& config) {
  check_config(config);
  if (X.rows() == 0) throw Error("cannot train on an empty matrix");
  if (y.size() != X.rows()) throw Error("label count does not match rows");
  if (!X.all_finite()) throw Error("non-finite feature values");

  const std::set<std::string> distinct(y.begin(), y.end());
  if (distinct.size() < 2) {
    throw Error("one-vs-rest training needs at least 2 classes");
  }

  SvmModel model;
  model.class_order.assign(distinct.begin(), distinct.end());
  model.feature_dim = X.cols();
  model.config = config;

  const SparseMatrix Xt = config.use_bias ? with_bias(X) : X;
  std::vector<int> y_bin(y.size());
  for (std::size_t c = 0; c < model.class_order.size(); ++c) {
    const std::string& positive = model.class_order[c];
    for (std::size_t i = 0; i < y.size(); ++i) {
      y_bin[i] = y[i] == positive ? 1 : -1;
    }
    SvmConfig sub = config;
    sub.seed = derive_seed(config.seed, static_cast<std::uint64_t>(c));
    model.weights.push_back(solve(Xt, y_bin, sub).weights);
  }
  return model;
}

std::vector<std::vector<double>> decision_values(const SvmModel& model,
                                                 const SparseMatrix& X) {
  if (X.cols() != model.feature_dim) {
    throw Error("feature dimension mismatch: matrix has " +
                std::to_string(X.cols()) + ", model expects " +
                std::to_string(model.feature_dim));
  }
  std::vector<std::vector<double>> scores(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto row = X.row(i);
    scores[i].reserve(model.weights.size());
    for (const std::vector<double>& w : model.weights) {
      double s = dot(w, row);
      if (model.config.use_bias) s += w.back();
      scores[i].push_back(s);
    }
  }
  return scores;
}

std::vector<std::string> predict(const SvmModel& model, const SparseMatrix& X) {
  const auto scores = decision_values(model, X);
  std::vector<std::string> labels;
  labels.reserve(scores.size());
  for (const std::vector<double>& row : scores) {
    const std::size_t best =
        std::max_element(row.begin(), row.end()) - row.begin();
    labels.push_back(model.class_order[best]);
  }
  return labels;
}

std::string SvmModel::to_json() const {
  json j;
  j["format_version"] = 1;
  j["class_order"] = class_order;
  j["feature_dim"] = feature_dim;
  j["weights"] = weights;
  j["config"] = {{"C", config.C},
                 {"tolerance", config.tolerance},
                 {"max_epochs", config.max_epochs},
                 {"seed", config.seed},
                 {"use_bias", config.use_bias},
                 {"loss", loss_name(config.loss)}};
  return j.dump(2);
}

SvmModel SvmModel::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(1, std::string("invalid model JSON: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw Error("unsupported model format version");
    }
    SvmModel model;
    model.class_order = j.at("class_order").get<std::vector<std::string>>();
    model.feature_dim = j.at("feature_dim").get<std::size_t>();
    model.weights =
        j.at("weights").get<std::vector<std::vector<double>>>();
    const json& cfg = j.at("config");
    model.config.C = cfg.at("C").get<double>();
    model.config.tolerance = cfg.at("tolerance").get<double>();
    model.config.max_epochs = cfg.at("max_epochs").get<std::size_t>();
    model.config.seed = cfg.at("seed").get<std::uint64_t>();
    model.config.use_bias = cfg.at("use_bias").get<bool>();
    model.config.loss = loss_from_name(cfg.at("loss").get<std::string>());

    if (model.weights.size() != model.class_order.size()) {
      throw Error("model weights do not match class order");
    }
    const std::size_t expect =
        model.feature_dim + (model.config.use_bias ? 1 : 0);
    for (const auto& w : model.weights) {
      if (w.size() != expect) throw Error("model weight vector size mismatch");
      for (double v : w) {
        if (!std::isfinite(v)) throw Error("non-finite model weight");
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw ParseError(1, std::string("invalid model JSON: ") + e.what());
  }
}

DummyModel dummy_fit(const std::vector<std::string>& y, std::uint64_t seed) {
  if (y.empty()) throw Error("cannot fit a baseline on empty labels");
  std::map<std::string, std::size_t> counts;
  for (const std::string& label : y) ++counts[label];

  DummyModel model;
  model.seed = seed;
  for (const auto& [label, count] : counts) {
    model.class_order.push_back(label);
    model.priors.push_back(static_cast<double>(count) /
                           static_cast<double>(y.size()));
  }
  return model;
}

std::vector<std::string> dummy_predict(const DummyModel& model,
                                       std::size_t n) {
  if (model.class_order.empty()) throw Error("baseline model has no classes");
  std::vector<double> cumulative(model.priors.size());
  std::partial_sum(model.priors.begin(), model.priors.end(),
                   cumulative.begin());
  cumulative.back() = 1.0;

  Rng rng(model.seed);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rng.uniform();
    const std::size_t idx =
        std::upper_bound(cumulative.begin(), cumulative.end(), r) -
        cumulative.begin();
    out.push_back(model.class_order[std::min(idx, cumulative.size() - 1)]);
  }
  return out;
}

}  // namespace lexiclass::svm
