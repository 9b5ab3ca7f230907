#pragma once

// The three training strategies (offline texture model, online neighbour
// model, mixed late-fusion model) and the candidate-list rule that turns
// class scores into the set of intra modes the encoder actually checks.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastintra/features.hpp"
#include "fastintra/intra.hpp"
#include "fastintra/mlp.hpp"
#include "fastintra/pca.hpp"

namespace fastintra {

enum class StrategyKind { offline, online, mixed };

inline const char* to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::offline: return "offline";
    case StrategyKind::online: return "online";
    case StrategyKind::mixed: return "mixed";
  }
  return "unknown";
}

inline StrategyKind strategy_from_string(const std::string& s) {
  if (s == "offline") return StrategyKind::offline;
  if (s == "online") return StrategyKind::online;
  if (s == "mixed") return StrategyKind::mixed;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

// Default hidden widths; parameter totals 109 / 37 / 65.
inline constexpr int kDefaultHiddenOffline = 4;
inline constexpr int kDefaultHiddenOnline = 2;
inline constexpr int kDefaultHiddenMixed = 2;

// x3 = y1 || y2: concatenated unimodal score vectors.
struct FusedScores {
  std::array<double, 2 * kScoreClasses> values{};
};

inline FusedScores fuse_scores(const ClassScores& texture, const ClassScores& neighbor) {
  FusedScores f;
  for (int i = 0; i < kScoreClasses; ++i) {
    f.values[i] = texture.p[i];
    f.values[kScoreClasses + i] = neighbor.p[i];
  }
  return f;
}

// The modes the encoder will consider for one block: the selected classes'
// angular modes plus DC and Planar, ascending.
struct CandidateList {
  std::vector<int> mode_classes;   // selected class indices, ascending
  std::vector<IntraMode> modes;    // always contains Planar (0) and DC (1)
};

// If the top score clears tau, only that class is selected; otherwise the
// k highest-scoring classes are. Ties prefer the lower class index. DC and
// Planar are appended unconditionally.
inline CandidateList build_candidate_list(const ClassScores& scores, double tau, int k) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("candidate list: tau must be in (0,1)");
  if (k < 1 || k > kNumClasses) throw std::invalid_argument("candidate list: k must be in [1,9]");
  CandidateList list;
  const int top = scores.argmax();  // argmax scans ascending, so ties pick the lowest index
  if (scores.p[top] >= tau) {
    list.mode_classes.push_back(top);
  } else {
    std::array<int, kNumClasses> order;
    for (int i = 0; i < kNumClasses; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&scores](int a, int b) { return scores.p[a] > scores.p[b]; });
    list.mode_classes.assign(order.begin(), order.begin() + k);
    std::sort(list.mode_classes.begin(), list.mode_classes.end());
  }
  list.modes.reserve(2 + 8 * list.mode_classes.size());
  list.modes.push_back(IntraMode{kModePlanar});
  list.modes.push_back(IntraMode{kModeDc});
  for (int cls : list.mode_classes)
    for (IntraMode m : detail::class_mode_table()[cls]) list.modes.push_back(m);
  std::sort(list.modes.begin(), list.modes.end());
  return list;
}

// Trained models for one block size. The online and mixed models are only
// present after online training; when frame-0 training produced no angular
// samples for this size, scoring falls back to the offline model.
struct SizeModels {
  MlpModel offline;
  PcaModel pca;
  std::optional<MlpModel> online;
  std::optional<MlpModel> mixed;
};

struct StrategyBundle {
  StrategyKind kind = StrategyKind::offline;
  double tau = 0.7;
  int k = 2;
  int r = 2;
  std::map<int, SizeModels> by_size;

  const SizeModels& models_for(int block_size) const {
    auto it = by_size.find(block_size);
    if (it == by_size.end())
      throw std::logic_error("no models for block size " + std::to_string(block_size));
    return it->second;
  }
};

// Per-block scoring. The offline strategy reads only the texture features,
// the online strategy only the neighbour codes, the mixed strategy fuses
// the two unimodal score vectors.
inline ClassScores score_block(const StrategyBundle& bundle, int block_size,
                               const TextureFeatures* texture, const NeighborCodes* neighbors) {
  const SizeModels& m = bundle.models_for(block_size);
  auto offline_scores = [&]() {
    if (!texture) throw std::invalid_argument("score_block: texture features required");
    return forward(m.offline, texture->values);
  };
  switch (bundle.kind) {
    case StrategyKind::offline:
      return offline_scores();
    case StrategyKind::online: {
      if (!m.online) return offline_scores();  // frame-0 fallback
      if (!neighbors) throw std::invalid_argument("score_block: neighbor codes required");
      return forward(*m.online, neighbors->values);
    }
    case StrategyKind::mixed: {
      if (!m.online || !m.mixed) return offline_scores();  // frame-0 fallback
      if (!neighbors) throw std::invalid_argument("score_block: neighbor codes required");
      const ClassScores y1 = offline_scores();
      const ClassScores y2 = forward(*m.online, neighbors->values);
      return forward(*m.mixed, fuse_scores(y1, y2).values);
    }
  }
  throw std::logic_error("score_block: unreachable");
}

struct TrainOutcome {
  MlpModel model;
  TrainHistory history;
  std::string warning;  // nonempty when the sample count is marginal
};

// Offline strategy: texture features, epoch cap 1000 by default.
inline TrainOutcome train_offline_model(const TrainSet& texture_samples, int hidden_width,
                                        TrainConfig cfg) {
  if (texture_samples.size() == 0)
    throw std::invalid_argument("train_offline_model: empty dataset");
  TrainSet train, val;
  split_train_val(texture_samples, cfg.validation_fraction, cfg.rng_seed, train, val);
  MlpModel init = init_model(texture_samples.input_dim, hidden_width, cfg.rng_seed);
  auto [model, hist] = scg_train(init, train, val, cfg);
  return {std::move(model), std::move(hist), ""};
}

// Online strategy: 4-dimensional neighbour codes from frame 0, epoch cap
// 100 by default. Trains even on very small sets but reports a warning
// when the data is thinner than 10 samples per hidden-layer parameter.
inline TrainOutcome train_online_model(const TrainSet& neighbor_samples, int hidden_width,
                                       TrainConfig cfg) {
  if (neighbor_samples.size() == 0)
    throw std::invalid_argument("train_online_model: empty dataset");
  TrainOutcome out;
  const int hidden_params = hidden_width * (neighbor_samples.input_dim + 1);
  if (neighbor_samples.size() < 10 * hidden_params)
    out.warning = "online training set has " + std::to_string(neighbor_samples.size()) +
                  " samples for " + std::to_string(hidden_params) +
                  " hidden parameters; model may underfit";
  TrainSet train, val;
  split_train_val(neighbor_samples, cfg.validation_fraction, cfg.rng_seed, train, val);
  MlpModel init = init_model(neighbor_samples.input_dim, hidden_width, cfg.rng_seed);
  auto [model, hist] = scg_train(init, train, val, cfg);
  out.model = std::move(model);
  out.history = std::move(hist);
  return out;
}

// Mixed strategy: trains on the concatenated scores of the two frozen
// unimodal models over the frame-0 samples.
inline TrainOutcome train_mixed_model(const MlpModel& offline, const MlpModel& online,
                                      const TrainSet& texture_samples,
                                      const TrainSet& neighbor_samples, int hidden_width,
                                      TrainConfig cfg) {
  if (texture_samples.size() == 0 || texture_samples.size() != neighbor_samples.size())
    throw std::invalid_argument("train_mixed_model: sample sets empty or misaligned");
  TrainSet fused;
  fused.input_dim = 2 * kScoreClasses;
  for (int i = 0; i < texture_samples.size(); ++i) {
    const ClassScores y1 = forward(offline, texture_samples.row(i), texture_samples.input_dim);
    const ClassScores y2 = forward(online, neighbor_samples.row(i), neighbor_samples.input_dim);
    const FusedScores x3 = fuse_scores(y1, y2);
    fused.push(x3.values.data(), texture_samples.labels[i]);
  }
  TrainSet train, val;
  split_train_val(fused, cfg.validation_fraction, cfg.rng_seed, train, val);
  MlpModel init = init_model(fused.input_dim, hidden_width, cfg.rng_seed);
  auto [model, hist] = scg_train(init, train, val, cfg);
  return {std::move(model), std::move(hist), ""};
}

}  // namespace fastintra
