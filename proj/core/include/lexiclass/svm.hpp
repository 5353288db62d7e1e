#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lexiclass/sparse.hpp"

namespace lexiclass::svm {

enum class LossKind { squared_hinge, hinge };

std::string loss_name(LossKind loss);
LossKind loss_from_name(const std::string& name);

struct SvmConfig {
  double C = 0.1;
  /// Convergence: maximum projected-gradient violation over an epoch.
  double tolerance = 1e-4;
  std::size_t max_epochs = 1000;
  /// Seeds the per-epoch coordinate permutations.
  std::uint64_t seed = 0;
  /// Augment every instance with a constant 1.0 feature (regularized bias).
  bool use_bias = true;
  LossKind loss = LossKind::squared_hinge;
};

/// Dual coordinate descent for min_w 1/2 w.w + C sum_i loss(1 - y_i w.x_i).
/// Rows are re-sorted into a canonical order before the seeded epoch
/// permutations, so the result depends only on the multiset of (x, y) pairs.
/// y entries are +1/-1; a single-class input is allowed and trains against
/// an empty opposition. Returns the weight vector (cols + 1 entries when
/// config.use_bias). Throws Error on an empty or non-finite matrix.
std::vector<double> train_binary(const SparseMatrix& X, std::span<const int> y,
                                 const SvmConfig& config);

/// train_binary plus solver internals, for diagnostics and tests. The dual
/// objective is reported in maximization form,
/// sum(alpha) - 1/2 alpha'(Q + D)alpha.
struct BinaryDetail {
  std::vector<double> weights;
  std::vector<double> alpha;  // canonical row order
  double dual_objective = 0.0;
  double primal_objective = 0.0;
  std::size_t epochs = 0;
  bool converged = false;
};

BinaryDetail train_binary_detail(const SparseMatrix& X, std::span<const int> y,
                                 const SvmConfig& config);

struct SvmModel {
  std::vector<std::string> class_order;  // sorted distinct labels
  std::vector<std::vector<double>> weights;  // one per class
  std::size_t feature_dim = 0;               // without the bias column
  SvmConfig config;

  std::string to_json() const;
  static SvmModel from_json(const std::string& text);
};

/// One-vs-rest reduction: one binary problem per class (that class +1, rest
/// -1), per-class solver seeds derived from config.seed. Throws Error on
/// fewer than 2 distinct labels.
SvmModel train_ovr(const SparseMatrix& X, const std::vector<std::string>& y,
                   const SvmConfig& config);

/// Per row: class_order[argmax of per-class scores], ties to the smallest
/// class index. Throws Error when X's column count differs from the model's
/// feature dimension.
std::vector<std::string> predict(const SvmModel& model, const SparseMatrix& X);

/// Per-class decision values, one row per instance (class order matches
/// model.class_order).
std::vector<std::vector<double>> decision_values(const SvmModel& model,
                                                 const SparseMatrix& X);

struct DummyModel {
  std::vector<std::string> class_order;
  std::vector<double> priors;  // nonnegative, sum 1
  std::uint64_t seed = 0;
};

/// priors = empirical class frequencies of y. Throws Error on empty y.
DummyModel dummy_fit(const std::vector<std::string>& y, std::uint64_t seed);

/// n independent draws from the priors via the model's seeded generator;
/// identical calls give identical sequences.
std::vector<std::string> dummy_predict(const DummyModel& model, std::size_t n);

}  // namespace lexiclass::svm
