#include "qxx/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qxx/seeding.hpp"

namespace qxx {

using json = nlohmann::ordered_json;

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.x.resize(static_cast<Eigen::Index>(indices.size()), x.cols());
  out.y.resize(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = static_cast<Eigen::Index>(indices[i]);
    out.x.row(static_cast<Eigen::Index>(i)) = x.row(src);
    out.y(static_cast<Eigen::Index>(i)) = y(src);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scaling

MinMaxScaler MinMaxScaler::fit(const Eigen::MatrixXd& x) {
  if (x.rows() == 0) throw std::invalid_argument("scaler: no rows");
  return MinMaxScaler(x.colwise().minCoeff().transpose(),
                      x.colwise().maxCoeff().transpose());
}

Eigen::MatrixXd MinMaxScaler::transform(const Eigen::MatrixXd& x) const {
  if (x.cols() != min_.size()) throw std::invalid_argument("scaler: width mismatch");
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double span = max_(j) - min_(j);
    if (span > 0.0) {
      out.col(j) = (x.col(j).array() - min_(j)) / span;
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

Eigen::VectorXd MinMaxScaler::transform_row(std::span<const double> row) const {
  if (static_cast<Eigen::Index>(row.size()) != min_.size()) {
    throw std::invalid_argument("scaler: width mismatch");
  }
  Eigen::VectorXd out(min_.size());
  for (Eigen::Index j = 0; j < min_.size(); ++j) {
    const double span = max_(j) - min_(j);
    out(j) = span > 0.0 ? (row[static_cast<std::size_t>(j)] - min_(j)) / span : 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// KNN

KnnRegressor::KnnRegressor(Eigen::MatrixXd x, Eigen::VectorXd y, std::size_t k, int p)
    : x_(std::move(x)), y_(std::move(y)), k_(k), p_(p) {
  if (y_.size() == 0) throw std::invalid_argument("knn: empty dataset");
  if (k_ == 0 || k_ > static_cast<std::size_t>(y_.size())) {
    throw std::invalid_argument("knn: k = " + std::to_string(k_) +
                                " exceeds the dataset size " +
                                std::to_string(y_.size()));
  }
  if (p_ < 1) throw std::invalid_argument("knn: Minkowski p must be >= 1");
}

double KnnRegressor::predict(const Eigen::VectorXd& row) const {
  const auto n = static_cast<std::size_t>(x_.rows());
  std::vector<std::pair<double, std::size_t>> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto diff = (x_.row(static_cast<Eigen::Index>(i)).transpose() - row).array().abs();
    const double dist = p_ == 1   ? diff.sum()
                        : p_ == 2 ? diff.square().sum()
                                  : diff.pow(p_).sum();
    d[i] = {dist, i};
  }
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k_), d.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < k_; ++i) sum += y_(static_cast<Eigen::Index>(d[i].second));
  return sum / static_cast<double>(k_);
}

// ---------------------------------------------------------------------------
// MLP

std::string_view to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

Mlp::Mlp(std::size_t inputs, std::size_t hidden, Activation activation,
         std::uint64_t seed)
    : w1_(static_cast<Eigen::Index>(hidden), static_cast<Eigen::Index>(inputs)),
      b1_(static_cast<Eigen::Index>(hidden)),
      w2_(static_cast<Eigen::Index>(hidden)),
      activation_(activation) {
  if (inputs == 0 || hidden == 0) throw std::invalid_argument("mlp: empty layer");
  std::mt19937_64 rng(seed);
  auto fill = [&](auto& m, double fan_in, double fan_out) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = limit * u(rng);
  };
  fill(w1_, inputs, hidden);
  fill(b1_, inputs, hidden);
  fill(w2_, hidden, 1);
  Eigen::VectorXd b2(1);
  fill(b2, hidden, 1);
  b2_ = b2(0);
}

Eigen::MatrixXd Mlp::hidden_pre(const Eigen::MatrixXd& x) const {
  if (x.cols() != w1_.cols()) throw std::invalid_argument("mlp: input width mismatch");
  return (x * w1_.transpose()).rowwise() + b1_.transpose();
}

Eigen::MatrixXd Mlp::activate(const Eigen::MatrixXd& z) const {
  if (activation_ == Activation::relu) return z.cwiseMax(0.0);
  return z.array().tanh().matrix();
}

double Mlp::predict(const Eigen::VectorXd& row) const {
  return predict(Eigen::MatrixXd(row.transpose()))(0);
}

Eigen::VectorXd Mlp::predict(const Eigen::MatrixXd& x) const {
  return (activate(hidden_pre(x)) * w2_).array() + b2_;
}

double Mlp::loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const {
  return 0.5 * (predict(x) - y).squaredNorm() / static_cast<double>(y.size());
}

Eigen::VectorXd Mlp::gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const {
  const Eigen::MatrixXd z = hidden_pre(x);
  const Eigen::MatrixXd a = activate(z);
  const Eigen::VectorXd r =
      ((a * w2_).array() + b2_ - y.array()).matrix() / static_cast<double>(y.size());
  Eigen::MatrixXd dz = r * w2_.transpose();
  if (activation_ == Activation::relu) {
    dz.array() *= (z.array() > 0.0).cast<double>();
  } else {
    dz.array() *= 1.0 - a.array().square();
  }
  const Eigen::MatrixXd gw1 = dz.transpose() * x;
  Eigen::VectorXd g(parameters().size());
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < gw1.rows(); ++i) {
    for (Eigen::Index j = 0; j < gw1.cols(); ++j) g(at++) = gw1(i, j);
  }
  g.segment(at, b1_.size()) = dz.colwise().sum().transpose();
  at += b1_.size();
  g.segment(at, w2_.size()) = a.transpose() * r;
  at += w2_.size();
  g(at) = r.sum();
  return g;
}

Eigen::VectorXd Mlp::parameters() const {
  Eigen::VectorXd theta(w1_.size() + b1_.size() + w2_.size() + 1);
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < w1_.rows(); ++i) {
    for (Eigen::Index j = 0; j < w1_.cols(); ++j) theta(at++) = w1_(i, j);
  }
  theta.segment(at, b1_.size()) = b1_;
  at += b1_.size();
  theta.segment(at, w2_.size()) = w2_;
  at += w2_.size();
  theta(at) = b2_;
  return theta;
}

void Mlp::set_parameters(const Eigen::VectorXd& theta) {
  if (theta.size() != w1_.size() + b1_.size() + w2_.size() + 1) {
    throw std::invalid_argument("mlp: parameter vector has the wrong length");
  }
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < w1_.rows(); ++i) {
    for (Eigen::Index j = 0; j < w1_.cols(); ++j) w1_(i, j) = theta(at++);
  }
  b1_ = theta.segment(at, b1_.size());
  at += b1_.size();
  w2_ = theta.segment(at, w2_.size());
  at += w2_.size();
  b2_ = theta(at);
}

void Mlp::train(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                const MlpOptions& options) {
  const auto n = static_cast<std::size_t>(y.size());
  if (n == 0 || static_cast<std::size_t>(x.rows()) != n) {
    throw std::invalid_argument("mlp: inconsistent training data");
  }
  if (options.batch_size == 0) throw std::invalid_argument("mlp: batch_size must be > 0");
  std::mt19937_64 rng(derive_seed(options.seed, {0x736775}));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Eigen::VectorXd theta = parameters();
  Eigen::VectorXd velocity = Eigen::VectorXd::Zero(theta.size());
  Eigen::MatrixXd bx;
  Eigen::VectorXd by;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += options.batch_size) {
      const std::size_t stop = std::min(n, start + options.batch_size);
      const auto m = static_cast<Eigen::Index>(stop - start);
      bx.resize(m, x.cols());
      by.resize(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto src = static_cast<Eigen::Index>(order[start + static_cast<std::size_t>(i)]);
        bx.row(i) = x.row(src);
        by(i) = y(src);
      }
      velocity = options.momentum * velocity - options.learning_rate * gradient(bx, by);
      theta += velocity;
      set_parameters(theta);
    }
    const double l = loss(x, y);
    if (!std::isfinite(l)) {
      throw TrainingError("mlp training diverged at epoch " + std::to_string(epoch + 1) +
                          " (loss " + std::to_string(l) + ", learning rate " +
                          std::to_string(options.learning_rate) + ")");
    }
  }
}

// ---------------------------------------------------------------------------
// Hyperparameters and the fitted pipeline

std::string describe(const Hyper& h) {
  if (const auto* k = std::get_if<KnnHyper>(&h)) {
    return "knn(k=" + std::to_string(k->k) + ",p=" + std::to_string(k->p) + ")";
  }
  const auto& m = std::get<MlpHyper>(h);
  return "mlp(hidden=" + std::to_string(m.hidden) + "," +
         std::string(to_string(m.activation)) + ")";
}

std::vector<Hyper> knn_grid() {
  std::vector<Hyper> grid;
  for (std::size_t k = 2; k <= 8; ++k) {
    for (int p : {1, 2}) grid.push_back(KnnHyper{k, p});
  }
  return grid;
}

std::vector<Hyper> mlp_grid() {
  std::vector<Hyper> grid;
  for (std::size_t h : {3, 10, 20, 50, 100}) {
    for (Activation a : {Activation::relu, Activation::tanh}) grid.push_back(MlpHyper{h, a});
  }
  return grid;
}

SurrogateModel SurrogateModel::fit(const Dataset& data, const Hyper& hyper,
                                   const MlpOptions& mlp) {
  auto scaler = MinMaxScaler::fit(data.x);
  Eigen::MatrixXd xs = scaler.transform(data.x);
  MlpOptions used = mlp;
  if (const auto* k = std::get_if<KnnHyper>(&hyper)) {
    SurrogateModel model(std::move(scaler), KnnRegressor(std::move(xs), data.y, k->k, k->p),
                         hyper);
    model.training_rows = data.rows();
    return model;
  }
  const auto& m = std::get<MlpHyper>(hyper);
  used.hidden = m.hidden;
  used.activation = m.activation;
  Mlp net(data.dims(), used.hidden, used.activation, used.seed);
  net.train(xs, data.y, used);
  SurrogateModel model(std::move(scaler), std::move(net), hyper);
  model.training_rows = data.rows();
  model.training = used;
  return model;
}

double SurrogateModel::predict(std::span<const double> raw_row) const {
  const Eigen::VectorXd row = scaler_.transform_row(raw_row);
  return std::visit([&](const auto& m) { return m.predict(row); }, model_);
}

Eigen::VectorXd SurrogateModel::predict(const Eigen::MatrixXd& raw_x) const {
  const Eigen::MatrixXd xs = scaler_.transform(raw_x);
  if (const auto* net = std::get_if<Mlp>(&model_)) return net->predict(xs);
  const auto& knn = std::get<KnnRegressor>(model_);
  Eigen::VectorXd out(xs.rows());
  for (Eigen::Index i = 0; i < xs.rows(); ++i) out(i) = knn.predict(xs.row(i).transpose());
  return out;
}

namespace {

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(std::move(r));
  }
  return rows;
}

Eigen::MatrixXd rows_matrix(const json& rows, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto& r = rows.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(r.size()) != cols) {
      throw std::invalid_argument("model file: ragged matrix");
    }
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = r.at(static_cast<std::size_t>(j));
  }
  return m;
}

json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd json_vector(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string SurrogateModel::to_json(const std::vector<std::string>& feature_names) const {
  json doc;
  doc["format"] = "qxx-surrogate";
  doc["version"] = 1;
  doc["family"] = is_mlp() ? "mlp" : "knn";
  doc["features"] = feature_names;
  doc["scaler"] = {{"min", vector_json(scaler_.min())}, {"max", vector_json(scaler_.max())}};
  if (const auto* net = std::get_if<Mlp>(&model_)) {
    doc["activation"] = to_string(net->activation());
    doc["output_activation"] = "identity";
    json layers = json::array();
    layers.push_back({{"inputs", net->inputs()},
                      {"outputs", net->hidden()},
                      {"weights", matrix_rows(net->w1())},
                      {"bias", vector_json(net->b1())}});
    layers.push_back({{"inputs", net->hidden()},
                      {"outputs", 1},
                      {"weights", matrix_rows(Eigen::MatrixXd(net->w2().transpose()))},
                      {"bias", std::vector<double>{net->b2()}}});
    doc["layers"] = std::move(layers);
    doc["training"] = {{"rows", training_rows},
                       {"optimizer", "sgd-momentum"},
                       {"loss", "0.5*mse"},
                       {"epochs", training.epochs},
                       {"learning_rate", training.learning_rate},
                       {"momentum", training.momentum},
                       {"batch_size", training.batch_size},
                       {"seed", training.seed}};
  } else {
    const auto& knn = std::get<KnnRegressor>(model_);
    doc["k"] = knn.k();
    doc["p"] = knn.p();
    doc["train_x"] = matrix_rows(knn.x());
    doc["train_y"] = vector_json(knn.y());
    doc["training"] = {{"rows", training_rows}};
  }
  return doc.dump();
}

SurrogateModel SurrogateModel::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("model file: ") + e.what());
  }
  try {
    if (doc.value("format", std::string{}) != "qxx-surrogate") {
      throw std::invalid_argument("model file: not a qxx-surrogate model");
    }
    MinMaxScaler scaler(json_vector(doc.at("scaler").at("min")),
                        json_vector(doc.at("scaler").at("max")));
    const auto dims = scaler.min().size();
    const auto family = doc.at("family").get<std::string>();
    if (family == "mlp") {
      const auto& layers = doc.at("layers");
      const auto hidden = layers.at(0).at("outputs").get<std::size_t>();
      const auto activation = parse_activation(doc.at("activation").get<std::string>());
      Mlp net(static_cast<std::size_t>(dims), hidden, activation, 0);
      const Eigen::MatrixXd w1 =
          rows_matrix(layers.at(0).at("weights"), dims);
      const Eigen::VectorXd b1 = json_vector(layers.at(0).at("bias"));
      const Eigen::MatrixXd w2 =
          rows_matrix(layers.at(1).at("weights"), static_cast<Eigen::Index>(hidden));
      Eigen::VectorXd theta(w1.size() + b1.size() + w2.size() + 1);
      Eigen::Index at = 0;
      for (Eigen::Index i = 0; i < w1.rows(); ++i) {
        for (Eigen::Index j = 0; j < w1.cols(); ++j) theta(at++) = w1(i, j);
      }
      theta.segment(at, b1.size()) = b1;
      at += b1.size();
      theta.segment(at, w2.size()) = w2.row(0).transpose();
      at += w2.size();
      theta(at) = layers.at(1).at("bias").at(0).get<double>();
      net.set_parameters(theta);
      SurrogateModel model(std::move(scaler), std::move(net), MlpHyper{hidden, activation});
      const auto& t = doc.at("training");
      model.training_rows = t.value("rows", std::size_t{0});
      model.training.hidden = hidden;
      model.training.activation = activation;
      model.training.epochs = t.value("epochs", model.training.epochs);
      model.training.learning_rate = t.value("learning_rate", model.training.learning_rate);
      model.training.momentum = t.value("momentum", model.training.momentum);
      model.training.batch_size = t.value("batch_size", model.training.batch_size);
      model.training.seed = t.value("seed", model.training.seed);
      return model;
    }
    if (family == "knn") {
      const auto k = doc.at("k").get<std::size_t>();
      const auto p = doc.at("p").get<int>();
      KnnRegressor knn(rows_matrix(doc.at("train_x"), dims), json_vector(doc.at("train_y")),
                       k, p);
      SurrogateModel model(std::move(scaler), std::move(knn), KnnHyper{k, p});
      model.training_rows = doc.at("training").value("rows", std::size_t{0});
      return model;
    }
    throw std::invalid_argument("model file: unknown family '" + family + "'");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("model file: ") + e.what());
  }
}

void SurrogateModel::save(const std::string& path,
                          const std::vector<std::string>& feature_names) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file " + path);
  out << to_json(feature_names) << '\n';
}

SurrogateModel SurrogateModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

// ---------------------------------------------------------------------------
// Cross-validation

std::vector<std::vector<std::size_t>> kfold(std::size_t n, std::size_t k,
                                            std::uint64_t seed) {
  if (k < 2 || k > n) {
    throw std::invalid_argument("kfold: need 2 <= k <= n (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t f = 0, at = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(at),
                    order.begin() + static_cast<std::ptrdiff_t>(at + size));
    at += size;
  }
  return folds;
}

double mean_squared_error(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth) {
  if (predicted.size() != truth.size() || truth.size() == 0) {
    throw std::invalid_argument("mse: size mismatch");
  }
  return (predicted - truth).squaredNorm() / static_cast<double>(truth.size());
}

namespace {

std::vector<std::size_t> complement(const std::vector<std::vector<std::size_t>>& folds,
                                    std::size_t skip) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f != skip) out.insert(out.end(), folds[f].begin(), folds[f].end());
  }
  return out;
}

}  // namespace

GridSearchResult grid_search(const Dataset& data, const std::vector<Hyper>& grid,
                             std::size_t folds, const MlpOptions& mlp,
                             std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
  const auto parts = kfold(data.rows(), folds, seed);
  GridSearchResult result{grid.front(), 0.0, {}};
  for (std::size_t h = 0; h < grid.size(); ++h) {
    double sse = 0.0;
    for (std::size_t f = 0; f < parts.size(); ++f) {
      const auto train_idx = complement(parts, f);
      const auto model = SurrogateModel::fit(data.subset(train_idx), grid[h], mlp);
      const Dataset test = data.subset(parts[f]);
      sse += (model.predict(test.x) - test.y).squaredNorm();
    }
    const double mse = sse / static_cast<double>(data.rows());
    result.mse.push_back(mse);
    if (h == 0 || mse < result.best_mse) {
      result.best = grid[h];
      result.best_mse = mse;
    }
  }
  return result;
}

CvResult cross_validate(const Dataset& data, const std::vector<Hyper>& grid,
                        std::size_t outer_folds, std::size_t inner_folds,
                        const MlpOptions& mlp, std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("cross_validate: empty grid");
  if (data.rows() < outer_folds) {
    throw std::invalid_argument("cross_validate: fewer rows than outer folds");
  }
  const auto parts = kfold(data.rows(), outer_folds, seed);
  CvResult result;
  for (std::size_t f = 0; f < parts.size(); ++f) {
    const Dataset train = data.subset(complement(parts, f));
    const Dataset test = data.subset(parts[f]);
    Hyper best = grid.front();
    if (grid.size() > 1) {
      best = grid_search(train, grid, inner_folds, mlp, derive_seed(seed, {f})).best;
    }
    const auto model = SurrogateModel::fit(train, best, mlp);
    result.fold_mse.push_back(mean_squared_error(model.predict(test.x), test.y));
    result.fold_best.push_back(best);
  }
  const double n = static_cast<double>(result.fold_mse.size());
  result.mean_mse = std::accumulate(result.fold_mse.begin(), result.fold_mse.end(), 0.0) / n;
  double var = 0.0;
  for (double m : result.fold_mse) var += (m - result.mean_mse) * (m - result.mean_mse);
  result.sd_mse = std::sqrt(var / n);
  return result;
}

}  // namespace qxx
