#include "nuq/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace nuq {

namespace {

constexpr int kNumClasses = 4;

// Wrapper that pins the exact bit stream used for shuffles and init, so
// trained weights are reproducible across platforms.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : eng_(seed) {}
  double uniform() {  // [0, 1), 53-bit
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

Eigen::MatrixXd softmax_cols(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd p = z;
  for (Eigen::Index c = 0; c < p.cols(); ++c) {
    p.col(c).array() -= p.col(c).maxCoeff();
    p.col(c) = p.col(c).array().exp();
    p.col(c) /= p.col(c).sum();
  }
  return p;
}

struct ForwardPass {
  std::vector<Eigen::MatrixXd> activations;  // a_0 = input, ..., a_L = logits
};

ForwardPass forward_batch(const MlpModel& m, const Eigen::MatrixXd& input) {
  ForwardPass fp;
  fp.activations.push_back(input);
  const std::size_t layers = m.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z =
        (m.weights[l] * fp.activations.back()).colwise() + m.biases[l];
    if (l + 1 < layers) z = z.cwiseMax(0.0);
    fp.activations.push_back(std::move(z));
  }
  return fp;
}

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

// Mean softmax cross-entropy gradient over the batch columns.
Gradients backward_batch(const MlpModel& m, const ForwardPass& fp,
                         const std::vector<int>& labels) {
  const std::size_t layers = m.weights.size();
  const Eigen::Index bsz = fp.activations.front().cols();
  Gradients g;
  g.weights.resize(layers);
  g.biases.resize(layers);

  Eigen::MatrixXd delta = softmax_cols(fp.activations.back());
  for (Eigen::Index c = 0; c < bsz; ++c) delta(labels[c], c) -= 1.0;
  delta /= static_cast<double>(bsz);

  for (std::size_t l = layers; l-- > 0;) {
    g.weights[l] = delta * fp.activations[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = (m.weights[l].transpose() * delta).eval();
      delta = delta.array() * (fp.activations[l].array() > 0.0).cast<double>();
    }
  }
  return g;
}

double batch_loss(const Eigen::MatrixXd& logits, const std::vector<int>& labels) {
  const Eigen::MatrixXd p = softmax_cols(logits);
  double loss = 0.0;
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    loss -= std::log(std::max(p(labels[c], c), 1e-300));
  }
  return loss / logits.cols();
}

Eigen::MatrixXd gather_rows_as_cols(const Eigen::MatrixXd& rows,
                                    const std::vector<int>& idx) {
  Eigen::MatrixXd out(rows.cols(), idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out.col(k) = rows.row(idx[k]).transpose();
  }
  return out;
}

}  // namespace

Eigen::VectorXd MlpModel::predict(const Eigen::VectorXd& input) const {
  if (input.size() != input_width()) {
    throw std::invalid_argument("MlpModel::predict: input width mismatch");
  }
  const ForwardPass fp = forward_batch(*this, input);
  return softmax_cols(fp.activations.back()).col(0);
}

int MlpModel::predict_label(const Eigen::VectorXd& input) const {
  Eigen::Index best = 0;
  predict(input).maxCoeff(&best);
  return static_cast<int>(best);
}

namespace {

MlpModel init_mlp_with(const std::vector<int>& dims, DetRng& rng) {
  if (dims.size() < 2) {
    throw std::invalid_argument("init_mlp: need at least input and output");
  }
  MlpModel m;
  m.layer_dims = dims;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l], fan_out = dims[l + 1];
    const double lim = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        w(r, c) = lim * (2.0 * rng.uniform() - 1.0);
      }
    }
    m.weights.push_back(std::move(w));
    m.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return m;
}

}  // namespace

MlpModel init_mlp(const std::vector<int>& layer_dims, std::uint64_t seed) {
  DetRng rng(seed);
  return init_mlp_with(layer_dims, rng);
}

SplitIndices split_dataset(int n, double fraction, std::uint64_t seed) {
  if (fraction < 0.0 || fraction >= 1.0) {
    throw std::invalid_argument("split_dataset: fraction must be in [0, 1)");
  }
  std::vector<int> idx(n);
  for (int k = 0; k < n; ++k) idx[k] = k;
  DetRng rng(seed);
  rng.shuffle(idx);
  const int ntest = static_cast<int>(fraction * n);
  SplitIndices out;
  out.test.assign(idx.begin(), idx.begin() + ntest);
  out.train.assign(idx.begin() + ntest, idx.end());
  return out;
}

double mean_cross_entropy(const MlpModel& model, const LabeledData& data,
                          const std::vector<int>& indices) {
  if (indices.empty()) return 0.0;
  const Eigen::MatrixXd x = gather_rows_as_cols(data.inputs, indices);
  std::vector<int> y(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) y[k] = data.labels[indices[k]];
  return batch_loss(forward_batch(model, x).activations.back(), y);
}

double accuracy(const MlpModel& model, const LabeledData& data,
                const std::vector<int>& indices) {
  if (indices.empty()) return 0.0;
  const Eigen::MatrixXd x = gather_rows_as_cols(data.inputs, indices);
  const Eigen::MatrixXd logits = forward_batch(model, x).activations.back();
  int hits = 0;
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    Eigen::Index best = 0;
    logits.col(c).maxCoeff(&best);
    if (static_cast<int>(best) == data.labels[indices[c]]) ++hits;
  }
  return static_cast<double>(hits) / indices.size();
}

TrainResult train_mlp(const LabeledData& data, const TrainConfig& cfg) {
  const int n = data.size();
  if (n < 2) throw std::invalid_argument("train_mlp: dataset too small");
  if (data.inputs.rows() != n) {
    throw std::invalid_argument("train_mlp: inputs/labels size mismatch");
  }
  std::set<int> classes;
  for (int y : data.labels) {
    if (y < 0 || y >= kNumClasses) {
      throw std::invalid_argument("train_mlp: label outside 4-way head");
    }
    classes.insert(y);
  }

  // one RNG drives split, init, and epoch shuffles, in that order
  DetRng rng(cfg.seed);
  std::vector<int> idx(n);
  for (int k = 0; k < n; ++k) idx[k] = k;
  rng.shuffle(idx);
  const int ntest = static_cast<int>(cfg.split_fraction * n);
  TrainResult result;
  result.split.test.assign(idx.begin(), idx.begin() + ntest);
  result.split.train.assign(idx.begin() + ntest, idx.end());

  std::set<int> train_classes;
  for (int k : result.split.train) train_classes.insert(data.labels[k]);
  if (train_classes != classes) {
    throw std::runtime_error(
        "train_mlp: a dataset class is missing from the training split");
  }

  std::vector<int> dims;
  dims.push_back(static_cast<int>(data.inputs.cols()));
  dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
  dims.push_back(kNumClasses);
  MlpModel model = init_mlp_with(dims, rng);

  std::vector<Eigen::MatrixXd> vel_w;
  std::vector<Eigen::VectorXd> vel_b;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    vel_w.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(),
                                          model.weights[l].cols()));
    vel_b.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
  }

  std::vector<int> order = result.split.train;
  result.model = model;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    int seen = 0;
    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(),
                                        start + cfg.batch_size);
      const std::vector<int> batch(order.begin() + start, order.begin() + stop);
      const Eigen::MatrixXd x = gather_rows_as_cols(data.inputs, batch);
      std::vector<int> y(batch.size());
      for (std::size_t k = 0; k < batch.size(); ++k) y[k] = data.labels[batch[k]];

      const ForwardPass fp = forward_batch(model, x);
      loss_sum += batch_loss(fp.activations.back(), y) * batch.size();
      seen += static_cast<int>(batch.size());
      const Gradients g = backward_batch(model, fp, y);
      for (std::size_t l = 0; l < model.weights.size(); ++l) {
        vel_w[l] = cfg.momentum * vel_w[l] - cfg.learning_rate * g.weights[l];
        vel_b[l] = cfg.momentum * vel_b[l] - cfg.learning_rate * g.biases[l];
        model.weights[l] += vel_w[l];
        model.biases[l] += vel_b[l];
      }
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / seen;
    stats.test_accuracy = accuracy(
        model, data,
        result.split.test.empty() ? result.split.train : result.split.test);
    result.log.push_back(stats);
    if (stats.test_accuracy > result.best_test_accuracy) {
      result.best_test_accuracy = stats.test_accuracy;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

GradientCheckResult gradient_check(const MlpModel& model,
                                   const Eigen::VectorXd& input, int label,
                                   double step) {
  const std::vector<int> y{label};
  const ForwardPass fp = forward_batch(model, input);
  const Gradients g = backward_batch(model, fp, y);

  MlpModel probe = model;
  double gmax = 0.0;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    gmax = std::max(gmax, g.weights[l].cwiseAbs().maxCoeff());
    gmax = std::max(gmax, g.biases[l].cwiseAbs().maxCoeff());
  }

  GradientCheckResult out;
  auto probe_loss = [&]() {
    return batch_loss(forward_batch(probe, input).activations.back(), y);
  };
  auto check_param = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + step;
    const double up = probe_loss();
    param = saved - step;
    const double down = probe_loss();
    param = saved;
    const double fd = (up - down) / (2.0 * step);
    const double abs_err = std::abs(analytic - fd);
    out.max_abs_error = std::max(out.max_abs_error, abs_err);
    out.max_rel_error =
        std::max(out.max_rel_error, abs_err / std::max(gmax, 1e-12));
  };
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    for (Eigen::Index r = 0; r < model.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < model.weights[l].cols(); ++c) {
        check_param(probe.weights[l](r, c), g.weights[l](r, c));
      }
    }
    for (Eigen::Index r = 0; r < model.biases[l].size(); ++r) {
      check_param(probe.biases[l](r), g.biases[l](r));
    }
  }
  return out;
}

double tagging_power(double eff, double a) {
  if (eff < 0.0 || eff > 1.0 || a < 0.0 || a > 1.0) {
    throw std::invalid_argument("tagging_power: arguments must be in [0, 1]");
  }
  const double d = 2.0 * a - 1.0;
  return eff * d * d;
}

std::string save_mlp(const MlpModel& model, const TrainConfig& cfg) {
  nlohmann::json j;
  j["format"] = "nuq-mlp";
  j["version"] = 1;
  j["activation"] = model.activation;
  j["layer_dims"] = model.layer_dims;
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    std::vector<double> w;  // row-major
    w.reserve(model.weights[l].size());
    for (Eigen::Index r = 0; r < model.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < model.weights[l].cols(); ++c) {
        w.push_back(model.weights[l](r, c));
      }
    }
    weights.push_back(w);
    biases.push_back(std::vector<double>(
        model.biases[l].data(), model.biases[l].data() + model.biases[l].size()));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  j["config"] = {{"split_fraction", cfg.split_fraction},
                 {"seed", cfg.seed},
                 {"learning_rate", cfg.learning_rate},
                 {"momentum", cfg.momentum},
                 {"batch_size", cfg.batch_size},
                 {"epochs", cfg.epochs},
                 {"hidden", cfg.hidden}};
  return j.dump(2) + "\n";
}

MlpModel load_mlp(const std::string& text, TrainConfig* cfg_out) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("format") != "nuq-mlp" || j.at("version") != 1) {
    throw std::runtime_error("load_mlp: unrecognized model format");
  }
  MlpModel m;
  m.activation = j.at("activation");
  m.layer_dims = j.at("layer_dims").get<std::vector<int>>();
  const auto& weights = j.at("weights");
  const auto& biases = j.at("biases");
  for (std::size_t l = 0; l + 1 < m.layer_dims.size(); ++l) {
    const int rows = m.layer_dims[l + 1], cols = m.layer_dims[l];
    const auto w = weights.at(l).get<std::vector<double>>();
    if (static_cast<int>(w.size()) != rows * cols) {
      throw std::runtime_error("load_mlp: weight size mismatch");
    }
    Eigen::MatrixXd wm(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) wm(r, c) = w[r * cols + c];
    }
    m.weights.push_back(std::move(wm));
    const auto b = biases.at(l).get<std::vector<double>>();
    m.biases.push_back(
        Eigen::Map<const Eigen::VectorXd>(b.data(), b.size()));
  }
  if (cfg_out != nullptr) {
    const auto& c = j.at("config");
    cfg_out->split_fraction = c.at("split_fraction");
    cfg_out->seed = c.at("seed");
    cfg_out->learning_rate = c.at("learning_rate");
    cfg_out->momentum = c.at("momentum");
    cfg_out->batch_size = c.at("batch_size");
    cfg_out->epochs = c.at("epochs");
    cfg_out->hidden = c.at("hidden").get<std::vector<int>>();
  }
  return m;
}

}  // namespace nuq
