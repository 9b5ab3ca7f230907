#pragma once

// The encoding harness: replays the fast mode-decision loop over a scene,
// measures prediction accuracy against the exhaustive oracle, and accounts
// for per-stage time. Frames are processed in raster block order; a block's
// neighbour codes come from the decisions already made for its left,
// upper-left, top and upper-right neighbours in the same frame.
//
// For the online and mixed strategies, frame 0 is encoded by the exhaustive
// baseline; its oracle labels provide the online training data. The offline
// strategy encodes every frame, including frame 0, through the fast path.

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastintra/features.hpp"
#include "fastintra/frame.hpp"
#include "fastintra/intra.hpp"
#include "fastintra/pca.hpp"
#include "fastintra/strategy.hpp"

namespace fastintra {

struct EncodeParams {
  StrategyKind strategy = StrategyKind::offline;
  double tau = 0.7;
  int k = 2;
  int r = 2;
  int qp = 32;
  int block_size = 16;
  std::uint64_t seed = 0;
  int hidden_online = kDefaultHiddenOnline;
  int hidden_mixed = kDefaultHiddenMixed;
  int online_max_epochs = 100;
  int patience = 6;
  double validation_fraction = 0.2;
};

struct BlockDecision {
  int frame = 0;
  int bx = 0;  // grid column
  int by = 0;  // grid row
  bool baseline = false;          // exhaustive search, not the fast path
  std::vector<int> candidates;    // candidate list mode indices
  std::vector<int> rmd_modes;     // modes given a Hadamard cost
  std::vector<int> rdo_modes;     // modes given a full proxy-RDO cost
  int chosen = 0;
  int oracle = 0;
  bool hit = false;               // oracle mode was among the evaluated modes
  int evaluated_angular = 0;      // distinct angular modes evaluated (65 = exhaustive)
};

struct StageTimings {
  double feature_ms = 0.0;  // texture + neighbour feature extraction
  double infer_ms = 0.0;    // MLP forward passes
  double train_ms = 0.0;    // online/mixed training incl. sample assembly
  double search_ms = 0.0;   // fast-path RMD + RDO
  double oracle_ms = 0.0;   // exhaustive labelling done within this call
  double total_ms = 0.0;    // wall clock of the whole call
};

struct SceneReport {
  std::string scene;
  std::string strategy;
  int block_size = 0;
  int qp = 0;
  double tau = 0.0;
  int k = 0;
  int r = 0;
  std::uint64_t seed = 0;
  int blocks = 0;
  int hits = 0;
  double accuracy_pct = 0.0;
  double mode_reduction_pct = 0.0;
  double overhead_pct = 0.0;  // (train + infer + feature) / total
  StageTimings timings;
  std::string train_warning;
  std::vector<BlockDecision> decisions;
};

// Exhaustive oracle labels of every block in a scene at one (qp, size).
struct SceneOracle {
  int qp = 0;
  int block_size = 0;
  std::vector<std::vector<BlockLabel>> labels;  // [frame][raster block index]
};

inline void validate_params(const EncodeParams& p) {
  if (!(p.tau > 0.0 && p.tau < 1.0)) throw std::invalid_argument("tau must be in (0, 1)");
  if (p.k < 1 || p.k > 9) throw std::invalid_argument("k must be in [1, 9]");
  if (p.r < 1) throw std::invalid_argument("r must be >= 1");
  if (p.qp < 0 || p.qp > 51) throw std::invalid_argument("qp must be in [0, 51]");
  if (!is_supported_block_size(p.block_size))
    throw std::invalid_argument("block size must be one of {4, 8, 16, 32, 64}");
}

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

struct GridDims {
  int cols = 0, rows = 0;
  int count() const { return cols * rows; }
};

inline GridDims grid_dims(const LumaFrame& f, int block_size) {
  return {f.width / block_size, f.height / block_size};
}

// Neighbour lookup against per-frame decision records, order (L, UL, U, UR).
inline NeighborCodes neighbor_codes_from(const std::vector<std::optional<BlockLabel>>& decided,
                                         const GridDims& g, int bx, int by) {
  std::array<std::optional<BlockLabel>, 4> n;
  auto get = [&](int cx, int cy) -> std::optional<BlockLabel> {
    if (cx < 0 || cy < 0 || cx >= g.cols || cy >= g.rows) return std::nullopt;
    return decided[static_cast<std::size_t>(cy) * g.cols + cx];
  };
  n[0] = get(bx - 1, by);      // left
  n[1] = get(bx - 1, by - 1);  // upper-left
  n[2] = get(bx, by - 1);      // top
  n[3] = get(bx + 1, by - 1);  // upper-right
  return encode_neighbor_codes(n);
}

inline BlockLabel label_from_mode(int mode_index) {
  BlockLabel l;
  l.best_mode = IntraMode{mode_index};
  if (is_angular(l.best_mode)) l.best_class = mode_to_class(l.best_mode);
  return l;
}

struct SearchOutcome {
  std::vector<int> rmd_modes;
  std::vector<int> rdo_modes;
  int chosen = 0;
  int evaluated_angular = 0;
};

// RMD on DC, Planar and the even-index angular candidates, then the +-1
// refinement of the best angular mode so far, then proxy RDO on the r
// cheapest modes.
inline SearchOutcome mode_search(const LumaBlock& block, const ReferenceSamples& refs,
                                 const CandidateList& list, int r, int qp) {
  SearchOutcome out;
  std::vector<std::pair<double, int>> rmd;  // (cost, mode)
  auto rmd_eval = [&](int mode_index) {
    const Prediction pred = predict(block.size, refs, IntraMode{mode_index});
    const Residual res = residual(pred, block);
    rmd.emplace_back(satd_cost(res, IntraMode{mode_index}), mode_index);
    out.rmd_modes.push_back(mode_index);
  };
  for (const IntraMode& m : list.modes)
    if (!is_angular(m) || m.index % 2 == 0) rmd_eval(m.index);

  auto best_angular = [&]() {
    int best = -1;
    double best_cost = 0.0;
    for (const auto& [cost, mode] : rmd)
      if (mode >= kFirstAngular && (best < 0 || cost < best_cost || (cost == best_cost && mode < best))) {
        best = mode;
        best_cost = cost;
      }
    return best;
  };
  const int pivot = best_angular();
  if (pivot >= 0) {
    for (int nb : {pivot - 1, pivot + 1}) {
      nb = std::clamp(nb, kFirstAngular, kLastAngular);
      bool seen = false;
      for (const auto& [cost, mode] : rmd) seen |= (mode == nb);
      if (!seen) rmd_eval(nb);
    }
  }

  std::sort(rmd.begin(), rmd.end());  // by cost, then lowest mode index
  const int n_rdo = std::min<int>(r, static_cast<int>(rmd.size()));
  int chosen = -1;
  double chosen_cost = 0.0;
  for (int i = 0; i < n_rdo; ++i) {
    const int mode = rmd[i].second;
    out.rdo_modes.push_back(mode);
    const double cost = rdo_proxy_cost(block, refs, IntraMode{mode}, qp);
    if (chosen < 0 || cost < chosen_cost || (cost == chosen_cost && mode < chosen)) {
      chosen = mode;
      chosen_cost = cost;
    }
  }
  out.chosen = chosen;
  for (int m : out.rmd_modes)
    if (m >= kFirstAngular) ++out.evaluated_angular;
  return out;
}

inline std::vector<int> all_mode_indices() {
  std::vector<int> v(kNumModes);
  for (int i = 0; i < kNumModes; ++i) v[i] = i;
  return v;
}

}  // namespace detail

inline SceneOracle compute_scene_oracle(const std::vector<LumaFrame>& frames, int qp,
                                        int block_size) {
  SceneOracle oracle;
  oracle.qp = qp;
  oracle.block_size = block_size;
  oracle.labels.reserve(frames.size());
  for (const LumaFrame& f : frames) {
    std::vector<BlockLabel> labels;
    for (const LumaBlock& b : partition_grid(f, block_size))
      labels.push_back(label_block(b, gather_reference_samples(f, b), qp));
    oracle.labels.push_back(std::move(labels));
  }
  return oracle;
}

// Trains the online (and mixed) models on frame 0's oracle-labelled blocks.
// Returns the elapsed milliseconds; leaves the models unset when frame 0
// has no angular-labelled blocks (scoring then falls back to offline).
inline double train_bundle_on_frame0(StrategyBundle& bundle, const std::vector<LumaFrame>& frames,
                                     const EncodeParams& params, const SceneOracle& oracle,
                                     std::string* warning_out = nullptr) {
  if (bundle.kind == StrategyKind::offline) return 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  const LumaFrame& f0 = frames.front();
  const detail::GridDims g = detail::grid_dims(f0, params.block_size);
  const std::vector<LumaBlock> blocks = partition_grid(f0, params.block_size);
  auto it = bundle.by_size.find(params.block_size);
  if (it == bundle.by_size.end())
    throw std::logic_error("no models for block size " + std::to_string(params.block_size));
  SizeModels& models = it->second;

  std::vector<std::optional<BlockLabel>> decided(g.count());
  for (int i = 0; i < g.count(); ++i) decided[i] = oracle.labels[0][i];

  TrainSet neighbor_set;
  neighbor_set.input_dim = 4;
  TrainSet texture_set;
  texture_set.input_dim = kPooledCount;
  for (int by = 0; by < g.rows; ++by) {
    for (int bx = 0; bx < g.cols; ++bx) {
      const int idx = by * g.cols + bx;
      const BlockLabel& label = oracle.labels[0][idx];
      if (!label.best_class) continue;  // Planar/DC winners are not training samples
      const NeighborCodes codes = detail::neighbor_codes_from(decided, g, bx, by);
      neighbor_set.push(codes.values.data(), label.best_class->index);
      if (bundle.kind == StrategyKind::mixed) {
        const LumaBlock& b = blocks[idx];
        const TextureFeatures x1 =
            extract_texture_features(b, gather_reference_samples(f0, b), models.pca);
        texture_set.push(x1.values.data(), label.best_class->index);
      }
    }
  }

  TrainConfig cfg;
  cfg.max_epochs = params.online_max_epochs;
  cfg.patience = params.patience;
  cfg.validation_fraction = params.validation_fraction;
  cfg.rng_seed = params.seed;
  if (neighbor_set.size() > 0) {
    TrainOutcome online = train_online_model(neighbor_set, params.hidden_online, cfg);
    if (warning_out && !online.warning.empty()) *warning_out = online.warning;
    models.online = std::move(online.model);
    if (bundle.kind == StrategyKind::mixed) {
      TrainOutcome mixed = train_mixed_model(models.offline, *models.online, texture_set,
                                             neighbor_set, params.hidden_mixed, cfg);
      models.mixed = std::move(mixed.model);
    }
  } else if (warning_out) {
    *warning_out = "frame 0 has no angular-labelled blocks; falling back to the offline model";
  }
  return detail::ms_since(t0);
}

// Fast-path scene encode with already-trained models. train_ms is carried
// into the report so sweep rows still account for their shared training.
inline SceneReport encode_scene_trained(const std::vector<LumaFrame>& frames,
                                        const StrategyBundle& bundle, const EncodeParams& params,
                                        const std::string& scene_name, const SceneOracle& oracle,
                                        double train_ms_carry = 0.0,
                                        const std::string& train_warning = "",
                                        double oracle_ms_carry = 0.0) {
  const auto t_total = std::chrono::steady_clock::now();
  if (frames.empty()) throw std::invalid_argument("encode_scene: empty scene");
  if (bundle.kind != params.strategy)
    throw std::invalid_argument("encode_scene: bundle strategy does not match parameters");
  validate_params(params);
  const SizeModels& models = bundle.models_for(params.block_size);  // throws when untrained

  SceneReport rep;
  rep.scene = scene_name;
  rep.strategy = to_string(params.strategy);
  rep.block_size = params.block_size;
  rep.qp = params.qp;
  rep.tau = params.tau;
  rep.k = params.k;
  rep.r = params.r;
  rep.seed = params.seed;
  rep.timings.train_ms = train_ms_carry;
  rep.timings.oracle_ms = oracle_ms_carry;
  rep.train_warning = train_warning;

  const bool needs_x1_always = params.strategy != StrategyKind::online;
  double reduction_sum = 0.0;

  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    const LumaFrame& frame = frames[fi];
    const detail::GridDims g = detail::grid_dims(frame, params.block_size);
    const std::vector<LumaBlock> blocks = partition_grid(frame, params.block_size);
    std::vector<std::optional<BlockLabel>> decided(g.count());

    const bool baseline_frame = fi == 0 && params.strategy != StrategyKind::offline;
    for (int by = 0; by < g.rows; ++by) {
      for (int bx = 0; bx < g.cols; ++bx) {
        const int idx = by * g.cols + bx;
        const BlockLabel& truth = oracle.labels[fi][idx];
        BlockDecision d;
        d.frame = static_cast<int>(fi);
        d.bx = bx;
        d.by = by;
        d.oracle = truth.best_mode.index;

        if (baseline_frame) {
          d.baseline = true;
          d.candidates = detail::all_mode_indices();
          d.rdo_modes = d.candidates;
          d.chosen = truth.best_mode.index;
          d.hit = true;
          d.evaluated_angular = kNumAngular;
          decided[idx] = truth;
        } else {
          const LumaBlock& block = blocks[idx];
          auto t_feat = std::chrono::steady_clock::now();
          const ReferenceSamples refs = gather_reference_samples(frame, block);
          const NeighborCodes codes = detail::neighbor_codes_from(decided, g, bx, by);
          std::optional<TextureFeatures> x1;
          const bool online_fallback =
              params.strategy == StrategyKind::online && !models.online;
          const bool mixed_fallback =
              params.strategy == StrategyKind::mixed && (!models.online || !models.mixed);
          if (needs_x1_always || online_fallback || mixed_fallback)
            x1 = extract_texture_features(block, refs, models.pca);
          rep.timings.feature_ms += detail::ms_since(t_feat);

          auto t_inf = std::chrono::steady_clock::now();
          const ClassScores scores =
              score_block(bundle, params.block_size, x1 ? &*x1 : nullptr, &codes);
          rep.timings.infer_ms += detail::ms_since(t_inf);

          auto t_search = std::chrono::steady_clock::now();
          const CandidateList list = build_candidate_list(scores, params.tau, params.k);
          const detail::SearchOutcome search =
              detail::mode_search(block, refs, list, params.r, params.qp);
          rep.timings.search_ms += detail::ms_since(t_search);

          d.candidates.reserve(list.modes.size());
          for (const IntraMode& m : list.modes) d.candidates.push_back(m.index);
          d.rmd_modes = search.rmd_modes;
          d.rdo_modes = search.rdo_modes;
          d.chosen = search.chosen;
          d.evaluated_angular = search.evaluated_angular;
          for (int m : search.rmd_modes) d.hit |= (m == truth.best_mode.index);
          decided[idx] = detail::label_from_mode(search.chosen);
        }
        rep.hits += d.hit ? 1 : 0;
        reduction_sum += 1.0 - static_cast<double>(d.evaluated_angular) / kNumAngular;
        rep.decisions.push_back(std::move(d));
      }
    }
  }

  rep.blocks = static_cast<int>(rep.decisions.size());
  if (rep.blocks > 0) {
    rep.accuracy_pct = 100.0 * rep.hits / rep.blocks;
    rep.mode_reduction_pct = 100.0 * reduction_sum / rep.blocks;
  }
  rep.timings.total_ms = detail::ms_since(t_total) + train_ms_carry + oracle_ms_carry;
  if (rep.timings.total_ms > 0.0)
    rep.overhead_pct = 100.0 *
                       (rep.timings.train_ms + rep.timings.infer_ms + rep.timings.feature_ms) /
                       rep.timings.total_ms;
  return rep;
}

// Full Algorithm-style scene encode: labels the scene, trains the online
// and mixed models on frame 0 when the strategy calls for them, then runs
// the fast path. Pass a precomputed oracle to share labelling across runs.
inline SceneReport encode_scene(const std::vector<LumaFrame>& frames, const StrategyBundle& bundle,
                                const EncodeParams& params, const std::string& scene_name,
                                const SceneOracle* shared_oracle = nullptr) {
  if (frames.empty()) throw std::invalid_argument("encode_scene: empty scene");
  if (bundle.kind != params.strategy)
    throw std::invalid_argument("encode_scene: bundle strategy does not match parameters");
  bundle.models_for(params.block_size);  // untrained bundle -> error

  SceneOracle local;
  double oracle_ms = 0.0;
  const SceneOracle* oracle = shared_oracle;
  if (!oracle) {
    const auto t0 = std::chrono::steady_clock::now();
    local = compute_scene_oracle(frames, params.qp, params.block_size);
    oracle_ms = detail::ms_since(t0);
    oracle = &local;
  } else if (oracle->qp != params.qp || oracle->block_size != params.block_size ||
             oracle->labels.size() != frames.size()) {
    throw std::invalid_argument("encode_scene: shared oracle does not match this run");
  }

  StrategyBundle trained = bundle;
  std::string warning;
  const double train_ms = train_bundle_on_frame0(trained, frames, params, *oracle, &warning);
  return encode_scene_trained(frames, trained, params, scene_name, *oracle, train_ms, warning,
                              oracle_ms);
}

// Exhaustive 67-mode encode of every block: the ground-truth reference run.
// Accuracy is 100% and mode reduction 0% by construction.
inline SceneReport baseline_encode(const std::vector<LumaFrame>& frames, int qp, int block_size,
                                   const std::string& scene_name,
                                   const SceneOracle* shared_oracle = nullptr) {
  const auto t_total = std::chrono::steady_clock::now();
  if (frames.empty()) throw std::invalid_argument("baseline_encode: empty scene");
  SceneOracle local;
  const SceneOracle* oracle = shared_oracle;
  double oracle_ms = 0.0;
  if (!oracle) {
    const auto t0 = std::chrono::steady_clock::now();
    local = compute_scene_oracle(frames, qp, block_size);
    oracle_ms = detail::ms_since(t0);
    oracle = &local;
  }
  SceneReport rep;
  rep.scene = scene_name;
  rep.strategy = "baseline";
  rep.block_size = block_size;
  rep.qp = qp;
  rep.timings.oracle_ms = oracle_ms;
  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    const detail::GridDims g = detail::grid_dims(frames[fi], block_size);
    for (int by = 0; by < g.rows; ++by)
      for (int bx = 0; bx < g.cols; ++bx) {
        const BlockLabel& truth = oracle->labels[fi][static_cast<std::size_t>(by) * g.cols + bx];
        BlockDecision d;
        d.frame = static_cast<int>(fi);
        d.bx = bx;
        d.by = by;
        d.baseline = true;
        d.candidates = detail::all_mode_indices();
        d.rdo_modes = d.candidates;
        d.chosen = truth.best_mode.index;
        d.oracle = truth.best_mode.index;
        d.hit = true;
        d.evaluated_angular = kNumAngular;
        rep.decisions.push_back(std::move(d));
      }
  }
  rep.blocks = static_cast<int>(rep.decisions.size());
  rep.hits = rep.blocks;
  rep.accuracy_pct = rep.blocks > 0 ? 100.0 : 0.0;
  rep.mode_reduction_pct = 0.0;
  rep.timings.total_ms = detail::ms_since(t_total);
  return rep;
}

// One labelled feature sample: the pre-PCA texture descriptor plus the
// neighbour codes, with the angular oracle class as the label.
struct DatasetSample {
  int frame = 0;
  int bx = 0;
  int by = 0;
  int qp = 0;
  int label_class = 0;
  int best_mode = 0;
  std::array<double, kConcatDim> concat{};
  std::array<double, 4> neighbor_codes{};
};

struct FeatureDataset {
  int block_size = 0;
  std::vector<int> qps;
  std::vector<DatasetSample> samples;
};

// One sample per (block, qp) whose oracle label is angular. Neighbour codes
// come from the already-labelled causal neighbours at the same qp.
inline FeatureDataset extract_dataset(const std::vector<LumaFrame>& frames,
                                      const std::vector<int>& qps, int block_size) {
  if (qps.empty()) throw std::invalid_argument("extract_dataset: no qps given");
  FeatureDataset ds;
  ds.block_size = block_size;
  ds.qps = qps;
  for (int qp : qps) {
    for (std::size_t fi = 0; fi < frames.size(); ++fi) {
      const LumaFrame& frame = frames[fi];
      const detail::GridDims g = detail::grid_dims(frame, block_size);
      const std::vector<LumaBlock> blocks = partition_grid(frame, block_size);
      std::vector<std::optional<BlockLabel>> decided(g.count());
      for (int by = 0; by < g.rows; ++by) {
        for (int bx = 0; bx < g.cols; ++bx) {
          const int idx = by * g.cols + bx;
          const LumaBlock& b = blocks[idx];
          const ReferenceSamples refs = gather_reference_samples(frame, b);
          const BlockLabel label = label_block(b, refs, qp);
          const NeighborCodes codes = detail::neighbor_codes_from(decided, g, bx, by);
          decided[idx] = label;
          if (!label.best_class) continue;
          DatasetSample s;
          s.frame = static_cast<int>(fi);
          s.bx = bx;
          s.by = by;
          s.qp = qp;
          s.label_class = label.best_class->index;
          s.best_mode = label.best_mode.index;
          s.concat = block_concat_features(b, refs).values;
          s.neighbor_codes = codes.values;
          ds.samples.push_back(std::move(s));
        }
      }
    }
  }
  return ds;
}

// Parameter sweep sharing one oracle and one set of trained models across
// the whole grid. Reports come out in (tau, k, r) lexicographic order.
inline std::vector<SceneReport> sweep(const std::vector<LumaFrame>& frames,
                                      const StrategyBundle& bundle, const EncodeParams& base,
                                      const std::vector<double>& taus, const std::vector<int>& ks,
                                      const std::vector<int>& rs, const std::string& scene_name,
                                      const SceneOracle* shared_oracle = nullptr) {
  if (taus.empty() || ks.empty() || rs.empty())
    throw std::invalid_argument("sweep: empty parameter grid");
  SceneOracle local;
  const SceneOracle* oracle = shared_oracle;
  if (!oracle) {
    local = compute_scene_oracle(frames, base.qp, base.block_size);
    oracle = &local;
  }
  StrategyBundle trained = bundle;
  std::string warning;
  const double train_ms = train_bundle_on_frame0(trained, frames, base, *oracle, &warning);

  std::vector<SceneReport> reports;
  reports.reserve(taus.size() * ks.size() * rs.size());
  for (double tau : taus)
    for (int k : ks)
      for (int r : rs) {
        EncodeParams p = base;
        p.tau = tau;
        p.k = k;
        p.r = r;
        reports.push_back(
            encode_scene_trained(frames, trained, p, scene_name, *oracle, train_ms, warning));
      }
  return reports;
}

}  // namespace fastintra
