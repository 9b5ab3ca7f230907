#pragma once

// Single-hidden-layer MLP (tanh hidden, SoftMax output, 9 classes) with
// cross-entropy loss, analytic backpropagation and Moller's scaled
// conjugate gradient optimiser. One optimiser iteration over the full
// training set counts as one epoch; validation is checked once per epoch
// and early stopping returns the parameters of the best check.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastintra/random.hpp"

namespace fastintra {

inline constexpr int kScoreClasses = 9;
inline constexpr double kLossClamp = 1e-12;  // floor for log arguments

struct ClassScores {
  std::array<double, kScoreClasses> p{};  // in (0,1), sums to 1

  int argmax() const {
    int best = 0;
    for (int i = 1; i < kScoreClasses; ++i)
      if (p[i] > p[best]) best = i;
    return best;
  }
};

// Parameters live in one flat vector (the optimiser works on it directly):
// [hidden_weights (h x in, row-major) | hidden_biases (h) |
//  output_weights (9 x h, row-major) | output_biases (9)].
struct MlpModel {
  int input_dim = 0;
  int hidden_width = 0;
  std::vector<double> params;

  int param_count() const {
    return hidden_width * input_dim + hidden_width + kScoreClasses * hidden_width + kScoreClasses;
  }
  const double* w1() const { return params.data(); }
  const double* b1() const { return params.data() + hidden_width * input_dim; }
  const double* w2() const { return b1() + hidden_width; }
  const double* b2() const { return w2() + kScoreClasses * hidden_width; }
  double* w1() { return params.data(); }
  double* b1() { return params.data() + hidden_width * input_dim; }
  double* w2() { return b1() + hidden_width; }
  double* b2() { return w2() + kScoreClasses * hidden_width; }
};

// Weights drawn uniformly from [-r, r], r = sqrt(6 / (fan_in + fan_out));
// biases start at zero.
inline MlpModel init_model(int input_dim, int hidden_width, std::uint64_t seed) {
  if (input_dim < 1 || hidden_width < 1)
    throw std::invalid_argument("init_model: dimensions must be positive");
  MlpModel m;
  m.input_dim = input_dim;
  m.hidden_width = hidden_width;
  m.params.assign(m.param_count(), 0.0);
  Rng rng(seed);
  const double r1 = std::sqrt(6.0 / (input_dim + hidden_width));
  for (int i = 0; i < hidden_width * input_dim; ++i) m.w1()[i] = rng.uniform(-r1, r1);
  const double r2 = std::sqrt(6.0 / (hidden_width + kScoreClasses));
  for (int i = 0; i < kScoreClasses * hidden_width; ++i) m.w2()[i] = rng.uniform(-r2, r2);
  return m;
}

inline ClassScores forward(const MlpModel& model, const double* x, int len) {
  if (len != model.input_dim) throw std::invalid_argument("forward: dimension mismatch");
  for (int i = 0; i < len; ++i)
    if (!std::isfinite(x[i])) throw std::invalid_argument("forward: non-finite input");
  const int h = model.hidden_width;
  std::vector<double> hidden(h);
  for (int j = 0; j < h; ++j) {
    double a = model.b1()[j];
    const double* wrow = model.w1() + static_cast<std::size_t>(j) * model.input_dim;
    for (int i = 0; i < model.input_dim; ++i) a += wrow[i] * x[i];
    hidden[j] = std::tanh(a);
  }
  std::array<double, kScoreClasses> logits;
  for (int c = 0; c < kScoreClasses; ++c) {
    double a = model.b2()[c];
    const double* wrow = model.w2() + static_cast<std::size_t>(c) * h;
    for (int j = 0; j < h; ++j) a += wrow[j] * hidden[j];
    logits[c] = a;
  }
  double mx = logits[0];
  for (int c = 1; c < kScoreClasses; ++c) mx = std::max(mx, logits[c]);
  ClassScores out;
  double sum = 0.0;
  for (int c = 0; c < kScoreClasses; ++c) {
    out.p[c] = std::exp(logits[c] - mx);
    sum += out.p[c];
  }
  for (int c = 0; c < kScoreClasses; ++c) out.p[c] /= sum;
  return out;
}

template <std::size_t N>
inline ClassScores forward(const MlpModel& model, const std::array<double, N>& x) {
  return forward(model, x.data(), static_cast<int>(N));
}

// -log(yhat_c) for the true class c, with yhat clamped away from zero.
inline double cross_entropy(const ClassScores& yhat, const std::array<double, 9>& one_hot) {
  int hot = -1;
  for (int i = 0; i < kScoreClasses; ++i) {
    if (one_hot[i] == 1.0) {
      if (hot >= 0) throw std::invalid_argument("cross_entropy: label is not one-hot");
      hot = i;
    } else if (one_hot[i] != 0.0) {
      throw std::invalid_argument("cross_entropy: label is not one-hot");
    }
  }
  if (hot < 0) throw std::invalid_argument("cross_entropy: label is not one-hot");
  return -std::log(std::max(yhat.p[hot], kLossClamp));
}

// Labelled sample set, inputs row-major n x input_dim, labels as class ids.
struct TrainSet {
  int input_dim = 0;
  std::vector<double> inputs;
  std::vector<int> labels;

  int size() const { return static_cast<int>(labels.size()); }
  const double* row(int i) const {
    return inputs.data() + static_cast<std::size_t>(i) * input_dim;
  }
  void push(const double* x, int label) {
    inputs.insert(inputs.end(), x, x + input_dim);
    labels.push_back(label);
  }
};

inline double mean_loss(const MlpModel& model, const TrainSet& set) {
  if (set.size() == 0) throw std::invalid_argument("mean_loss: empty set");
  double total = 0.0;
  for (int i = 0; i < set.size(); ++i) {
    const ClassScores s = forward(model, set.row(i), set.input_dim);
    total += -std::log(std::max(s.p[set.labels[i]], kLossClamp));
  }
  return total / set.size();
}

// Analytic gradient of the mean cross-entropy over the batch, laid out
// exactly like MlpModel::params. Optionally returns the loss.
inline std::vector<double> gradient(const MlpModel& model, const TrainSet& batch,
                                    double* loss_out = nullptr) {
  if (batch.size() == 0) throw std::invalid_argument("gradient: empty batch");
  if (batch.input_dim != model.input_dim) throw std::invalid_argument("gradient: dimension mismatch");
  const int h = model.hidden_width;
  const int in = model.input_dim;
  std::vector<double> grad(model.params.size(), 0.0);
  double* gw1 = grad.data();
  double* gb1 = grad.data() + h * in;
  double* gw2 = gb1 + h;
  double* gb2 = gw2 + kScoreClasses * h;

  std::vector<double> hidden(h), dhidden(h);
  double loss = 0.0;
  const double inv_n = 1.0 / batch.size();
  for (int s = 0; s < batch.size(); ++s) {
    const double* x = batch.row(s);
    for (int j = 0; j < h; ++j) {
      double a = model.b1()[j];
      const double* wrow = model.w1() + static_cast<std::size_t>(j) * in;
      for (int i = 0; i < in; ++i) a += wrow[i] * x[i];
      hidden[j] = std::tanh(a);
    }
    std::array<double, kScoreClasses> logits;
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < kScoreClasses; ++c) {
      double a = model.b2()[c];
      const double* wrow = model.w2() + static_cast<std::size_t>(c) * h;
      for (int j = 0; j < h; ++j) a += wrow[j] * hidden[j];
      logits[c] = a;
      mx = std::max(mx, a);
    }
    std::array<double, kScoreClasses> prob;
    double sum = 0.0;
    for (int c = 0; c < kScoreClasses; ++c) {
      prob[c] = std::exp(logits[c] - mx);
      sum += prob[c];
    }
    for (int c = 0; c < kScoreClasses; ++c) prob[c] /= sum;
    const int label = batch.labels[s];
    loss += -std::log(std::max(prob[label], kLossClamp));

    // delta_out = (yhat - y) / n; hidden delta through tanh'.
    std::array<double, kScoreClasses> dout;
    for (int c = 0; c < kScoreClasses; ++c)
      dout[c] = (prob[c] - (c == label ? 1.0 : 0.0)) * inv_n;
    for (int j = 0; j < h; ++j) dhidden[j] = 0.0;
    for (int c = 0; c < kScoreClasses; ++c) {
      const double* wrow = model.w2() + static_cast<std::size_t>(c) * h;
      double* grow = gw2 + static_cast<std::size_t>(c) * h;
      for (int j = 0; j < h; ++j) {
        grow[j] += dout[c] * hidden[j];
        dhidden[j] += dout[c] * wrow[j];
      }
      gb2[c] += dout[c];
    }
    for (int j = 0; j < h; ++j) {
      const double d = dhidden[j] * (1.0 - hidden[j] * hidden[j]);
      double* grow = gw1 + static_cast<std::size_t>(j) * in;
      for (int i = 0; i < in; ++i) grow[i] += d * x[i];
      gb1[j] += d;
    }
  }
  if (loss_out) *loss_out = loss * inv_n;
  return grad;
}

struct TrainConfig {
  int max_epochs = 1000;
  int patience = 6;  // consecutive non-improving validation checks before stopping
  double validation_fraction = 0.2;
  std::uint64_t rng_seed = 0;
};

enum class StopReason { max_epochs, patience_exhausted, gradient_converged, trust_region_collapse };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::max_epochs: return "max_epochs";
    case StopReason::patience_exhausted: return "patience_exhausted";
    case StopReason::gradient_converged: return "gradient_converged";
    case StopReason::trust_region_collapse: return "trust_region_collapse";
  }
  return "unknown";
}

struct TrainHistory {
  std::vector<double> train_loss;  // one entry per epoch run
  std::vector<double> val_loss;    // check 0 = initial parameters, then one per epoch
  int best_epoch = 0;              // 0 = initial parameters
  StopReason stop_reason = StopReason::max_epochs;
};

// Seeded split into train/validation with at least one sample on each side
// when the set has two or more samples. A single-sample set is duplicated
// into both (degenerate but keeps the training contract total).
inline void split_train_val(const TrainSet& all, double fraction, std::uint64_t seed,
                            TrainSet& train, TrainSet& val) {
  if (all.size() == 0) throw std::invalid_argument("split_train_val: empty set");
  if (fraction <= 0.0 || fraction >= 1.0)
    throw std::invalid_argument("split_train_val: fraction must be in (0, 1)");
  train.input_dim = val.input_dim = all.input_dim;
  train.inputs.clear(); train.labels.clear();
  val.inputs.clear(); val.labels.clear();
  const int n = all.size();
  if (n == 1) {
    train.push(all.row(0), all.labels[0]);
    val.push(all.row(0), all.labels[0]);
    return;
  }
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  shuffle(idx, rng);
  int n_val = static_cast<int>(std::lround(fraction * n));
  n_val = std::min(std::max(n_val, 1), n - 1);
  for (int i = 0; i < n; ++i) {
    TrainSet& dst = i < n_val ? val : train;
    dst.push(all.row(idx[i]), all.labels[idx[i]]);
  }
}

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

// Moller's scaled conjugate gradient: conjugate directions with a scaled
// model-trust-region adjustment, no line search. sigma = 1e-4, initial
// lambda = 1e-6. Returns the parameters of the best validation check.
inline std::pair<MlpModel, TrainHistory> scg_train(const MlpModel& initial, const TrainSet& train,
                                                   const TrainSet& val, const TrainConfig& cfg) {
  if (train.size() == 0 || val.size() == 0)
    throw std::invalid_argument("scg_train: train and validation sets must be nonempty");
  if (cfg.max_epochs < 1 || cfg.patience < 1) throw std::invalid_argument("scg_train: bad config");

  constexpr double kSigma = 1e-4;
  constexpr double kLambdaMax = 1e15;

  MlpModel model = initial;
  const int np = model.param_count();
  TrainHistory hist;
  MlpModel best_model = model;
  double best_val = mean_loss(model, val);
  hist.val_loss.push_back(best_val);
  hist.best_epoch = 0;
  int bad_checks = 0;

  double loss = 0.0;
  std::vector<double> grad = gradient(model, train, &loss);
  std::vector<double> r(np), p(np);
  for (int i = 0; i < np; ++i) r[i] = p[i] = -grad[i];
  double lambda = 1e-6, lambda_bar = 0.0;
  bool success = true;
  double delta = 0.0;
  hist.stop_reason = StopReason::max_epochs;

  MlpModel probe = model;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const double p_norm2 = detail::dot(p, p);
    if (p_norm2 <= 0.0 || detail::dot(r, r) <= 1e-24) {
      hist.stop_reason = StopReason::gradient_converged;
      break;
    }
    if (success) {
      const double sigma_k = kSigma / std::sqrt(p_norm2);
      for (int i = 0; i < np; ++i) probe.params[i] = model.params[i] + sigma_k * p[i];
      const std::vector<double> grad_probe = gradient(probe, train);
      delta = 0.0;
      for (int i = 0; i < np; ++i) delta += p[i] * (grad_probe[i] - grad[i]) / sigma_k;
    }
    delta += (lambda - lambda_bar) * p_norm2;
    if (delta <= 0.0) {  // make the Hessian model positive definite
      lambda_bar = 2.0 * (lambda - delta / p_norm2);
      delta = -delta + lambda * p_norm2;
      lambda = lambda_bar;
    }
    const double mu = detail::dot(p, r);
    const double alpha = mu / delta;
    for (int i = 0; i < np; ++i) probe.params[i] = model.params[i] + alpha * p[i];
    const double loss_new = mean_loss(probe, train);
    double comparison = 2.0 * delta * (loss - loss_new) / (mu * mu);
    if (!std::isfinite(comparison)) comparison = -1.0;  // degenerate step: reject and rescale

    if (comparison >= 0.0) {  // successful step
      model.params = probe.params;
      loss = loss_new;
      grad = gradient(model, train);
      lambda_bar = 0.0;
      success = true;
      std::vector<double> r_new(np);
      for (int i = 0; i < np; ++i) r_new[i] = -grad[i];
      if (epoch % np == 0) {
        p = r_new;  // periodic restart along steepest descent
      } else {
        const double beta = (detail::dot(r_new, r_new) - detail::dot(r_new, r)) / mu;
        for (int i = 0; i < np; ++i) p[i] = r_new[i] + beta * p[i];
      }
      r = std::move(r_new);
      if (comparison >= 0.75) lambda *= 0.25;
    } else {
      lambda_bar = lambda;
      success = false;
    }
    if (comparison < 0.25) lambda += delta * (1.0 - comparison) / p_norm2;

    hist.train_loss.push_back(loss);
    const double vloss = mean_loss(model, val);
    hist.val_loss.push_back(vloss);
    if (vloss < best_val) {
      best_val = vloss;
      best_model = model;
      hist.best_epoch = epoch;
      bad_checks = 0;
    } else {
      ++bad_checks;
      if (bad_checks >= cfg.patience) {
        hist.stop_reason = StopReason::patience_exhausted;
        break;
      }
    }
    if (lambda > kLambdaMax) {
      hist.stop_reason = StopReason::trust_region_collapse;
      break;
    }
  }
  return {best_model, hist};
}

}  // namespace fastintra
