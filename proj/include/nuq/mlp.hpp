#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace nuq {

/// Feed-forward classifier: ReLU hidden layers, softmax head.
/// weights[l] has shape (dims[l+1], dims[l]); forward is W a + b.
struct MlpModel {
  std::vector<int> layer_dims;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  std::string activation = "relu";

  int input_width() const { return layer_dims.front(); }
  int output_width() const { return layer_dims.back(); }

  /// Softmax probabilities for one input.
  Eigen::VectorXd predict(const Eigen::VectorXd& input) const;
  int predict_label(const Eigen::VectorXd& input) const;
};

/// Glorot-uniform init (+-sqrt(6/(fan_in+fan_out))), zero biases; fully
/// reproducible from the seed.
MlpModel init_mlp(const std::vector<int>& layer_dims, std::uint64_t seed);

struct TrainConfig {
  double split_fraction = 0.10;
  std::uint64_t seed = 12345;
  double learning_rate = 1e-2;
  double momentum = 0.9;
  int batch_size = 32;
  int epochs = 200;
  std::vector<int> hidden = {128, 128};
};

struct LabeledData {
  Eigen::MatrixXd inputs;   // one sample per row
  std::vector<int> labels;  // 0..n_classes-1

  int size() const { return static_cast<int>(labels.size()); }
};

/// Shuffled split: floor(fraction * n) test indices, rest train, disjoint.
struct SplitIndices {
  std::vector<int> train;
  std::vector<int> test;
};
SplitIndices split_dataset(int n, double fraction, std::uint64_t seed);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double test_accuracy = 0.0;
};

struct TrainResult {
  MlpModel model;  // weights from the best held-out epoch
  std::vector<EpochStats> log;
  double best_test_accuracy = 0.0;
  int best_epoch = -1;
  SplitIndices split;
};

/// Mini-batch gradient descent (classical momentum) on softmax
/// cross-entropy. Deterministic for a fixed config and seed.
TrainResult train_mlp(const LabeledData& data, const TrainConfig& cfg);

double mean_cross_entropy(const MlpModel& model, const LabeledData& data,
                          const std::vector<int>& indices);
double accuracy(const MlpModel& model, const LabeledData& data,
                const std::vector<int>& indices);

/// Backprop vs central finite differences (step 1e-5) on one sample's
/// cross-entropy. rel_error is the worst parameter deviation relative to
/// the largest gradient magnitude.
struct GradientCheckResult {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
};
GradientCheckResult gradient_check(const MlpModel& model,
                                   const Eigen::VectorXd& input, int label,
                                   double step = 1e-5);

/// eps_tag = eff * (2a - 1)^2; both arguments in [0, 1].
double tagging_power(double eff, double a);

/// Versioned JSON round-trip (bitwise-stable doubles).
std::string save_mlp(const MlpModel& model, const TrainConfig& cfg);
MlpModel load_mlp(const std::string& text, TrainConfig* cfg_out = nullptr);

}  // namespace nuq
