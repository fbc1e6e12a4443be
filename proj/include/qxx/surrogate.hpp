#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace qxx {

/// Regression data: one row per sample.
struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;

  std::size_t rows() const { return static_cast<std::size_t>(y.size()); }
  std::size_t dims() const { return static_cast<std::size_t>(x.cols()); }
  Dataset subset(std::span<const std::size_t> indices) const;
};

/// Per-feature min-max scaling to [0, 1]. Constant features map to 0.
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  MinMaxScaler(Eigen::VectorXd min, Eigen::VectorXd max)
      : min_(std::move(min)), max_(std::move(max)) {}

  static MinMaxScaler fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd transform_row(std::span<const double> row) const;

  const Eigen::VectorXd& min() const { return min_; }
  const Eigen::VectorXd& max() const { return max_; }

 private:
  Eigen::VectorXd min_;
  Eigen::VectorXd max_;
};

/// k-nearest-neighbour regression under a Minkowski-p metric.
class KnnRegressor {
 public:
  /// Inputs are expected to be scaled already.
  KnnRegressor(Eigen::MatrixXd x, Eigen::VectorXd y, std::size_t k, int p);

  double predict(const Eigen::VectorXd& row) const;

  std::size_t k() const { return k_; }
  int p() const { return p_; }
  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  std::size_t k_;
  int p_;
};

enum class Activation { relu, tanh };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MlpOptions {
  std::size_t hidden = 100;
  Activation activation = Activation::relu;
  std::size_t epochs = 200;
  double learning_rate = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
};

/**
 * inputs -> hidden -> 1 perceptron with an identity output, trained by
 * mini-batch SGD with momentum on 0.5 * mean squared error.
 */
class Mlp {
 public:
  /// Glorot-uniform initialisation from `seed`.
  Mlp(std::size_t inputs, std::size_t hidden, Activation activation,
      std::uint64_t seed);

  double predict(const Eigen::VectorXd& row) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;

  double loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const;
  /// d loss / d parameters, in parameters() order.
  Eigen::VectorXd gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const;

  /// Flattened [W1 (row-major, hidden x inputs), b1, w2, b2].
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& theta);

  /// Throws TrainingError if the loss stops being finite.
  void train(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpOptions& options);

  std::size_t inputs() const { return static_cast<std::size_t>(w1_.cols()); }
  std::size_t hidden() const { return static_cast<std::size_t>(w1_.rows()); }
  Activation activation() const { return activation_; }
  const Eigen::MatrixXd& w1() const { return w1_; }
  const Eigen::VectorXd& b1() const { return b1_; }
  const Eigen::VectorXd& w2() const { return w2_; }
  double b2() const { return b2_; }

 private:
  Eigen::MatrixXd hidden_pre(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd activate(const Eigen::MatrixXd& z) const;

  Eigen::MatrixXd w1_;  // hidden x inputs
  Eigen::VectorXd b1_;
  Eigen::VectorXd w2_;
  double b2_ = 0.0;
  Activation activation_;
};

struct KnnHyper {
  std::size_t k = 5;
  int p = 2;
  friend bool operator==(const KnnHyper&, const KnnHyper&) = default;
};
struct MlpHyper {
  std::size_t hidden = 100;
  Activation activation = Activation::relu;
  friend bool operator==(const MlpHyper&, const MlpHyper&) = default;
};
using Hyper = std::variant<KnnHyper, MlpHyper>;

std::string describe(const Hyper& h);

/// Candidate grids: k in 2..8 with p in {1,2}; hidden in {3,10,20,50,100}
/// with ReLU or tanh.
std::vector<Hyper> knn_grid();
std::vector<Hyper> mlp_grid();

/// Scaler plus a fitted regressor; predictions take raw (unscaled) rows.
class SurrogateModel {
 public:
  /// Fits the scaler on `data`, then the model. `mlp` supplies training
  /// settings; its hidden/activation are overridden by an MlpHyper.
  static SurrogateModel fit(const Dataset& data, const Hyper& hyper,
                            const MlpOptions& mlp = {});

  double predict(std::span<const double> raw_row) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& raw_x) const;

  const MinMaxScaler& scaler() const { return scaler_; }
  const Hyper& hyper() const { return hyper_; }
  bool is_mlp() const { return std::holds_alternative<Mlp>(model_); }
  const Mlp& mlp() const { return std::get<Mlp>(model_); }

  /// Layer sizes, weights, scaler ranges, feature order and training metadata.
  std::string to_json(const std::vector<std::string>& feature_names = {}) const;
  static SurrogateModel from_json(std::string_view text);
  void save(const std::string& path,
            const std::vector<std::string>& feature_names = {}) const;
  static SurrogateModel load(const std::string& path);

  std::size_t training_rows = 0;
  MlpOptions training;  ///< as used, for the model file

 private:
  SurrogateModel(MinMaxScaler scaler, std::variant<KnnRegressor, Mlp> model, Hyper hyper)
      : scaler_(std::move(scaler)), model_(std::move(model)), hyper_(hyper) {}

  MinMaxScaler scaler_;
  std::variant<KnnRegressor, Mlp> model_;
  Hyper hyper_;
};

/// Shuffled partition of 0..n-1 into k folds whose sizes differ by at most 1.
std::vector<std::vector<std::size_t>> kfold(std::size_t n, std::size_t k, std::uint64_t seed);

double mean_squared_error(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth);

struct GridSearchResult {
  Hyper best;
  double best_mse = 0.0;
  std::vector<double> mse;  ///< per grid entry
};

/// k-fold CV over the grid, minimising MSE; ties keep the earlier entry.
GridSearchResult grid_search(const Dataset& data, const std::vector<Hyper>& grid,
                             std::size_t folds, const MlpOptions& mlp,
                             std::uint64_t seed);

struct CvResult {
  std::vector<double> fold_mse;
  std::vector<Hyper> fold_best;
  double mean_mse = 0.0;
  double sd_mse = 0.0;
};

/// Nested CV: outer folds estimate MSE, each picking hyperparameters by an
/// inner grid search on its training portion only.
CvResult cross_validate(const Dataset& data, const std::vector<Hyper>& grid,
                        std::size_t outer_folds, std::size_t inner_folds,
                        const MlpOptions& mlp, std::uint64_t seed);

}  // namespace qxx
