// Acceptance suite: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion. Exits nonzero when any criterion fails.
//
// Criteria 7-10 share a desk-scale benchmark: an offline model trained on
// two synthetic natural-texture images (QPs 15/25/35/45), evaluated over
// two 4-frame test scenes at block size 16, qp 32 (>= 2000 blocks total).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fastintra/harness.hpp"
#include "fastintra/model_io.hpp"
#include "fastintra/report_io.hpp"
#include "fastintra/synthetic.hpp"

using namespace fastintra;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name;
  if (!detail.empty()) std::cout << " — " << detail;
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
// Brute-force reimplementation of the candidate-list rule.
std::vector<int> reference_candidate_modes(const ClassScores& s, double tau, int k) {
  int arg = 0;
  for (int i = 1; i < 9; ++i)
    if (s.p[i] > s.p[arg]) arg = i;
  std::vector<int> classes;
  if (s.p[arg] >= tau) {
    classes.push_back(arg);
  } else {
    std::array<bool, 9> used{};
    for (int pick = 0; pick < k; ++pick) {
      int best = -1;
      for (int i = 0; i < 9; ++i)
        if (!used[i] && (best < 0 || s.p[i] > s.p[best])) best = i;
      used[best] = true;
      classes.push_back(best);
    }
  }
  std::vector<int> modes = {0, 1};
  for (int m = 2; m <= 66; ++m)
    for (int cls : classes)
      if (9 * (m - 2) / 65 == cls) modes.push_back(m);
  std::sort(modes.begin(), modes.end());
  return modes;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  const std::vector<double> taus = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  long mismatches = 0;
  std::vector<int> got;
  for (int trial = 0; trial < 100000; ++trial) {
    ClassScores s;
    double sum = 0.0;
    for (double& p : s.p) {
      p = rng.uniform(1e-4, 1.0);
      sum += p;
    }
    for (double& p : s.p) p /= sum;
    for (double tau : taus) {
      for (int k = 1; k <= 4; ++k) {
        const CandidateList list = build_candidate_list(s, tau, k);
        got.clear();
        for (IntraMode m : list.modes) got.push_back(m.index);
        if (got != reference_candidate_modes(s, tau, k)) ++mismatches;
      }
    }
  }
  const double secs = seconds_since(t0);
  report(1, "candidate-list oracle equivalence (1e5 vectors x 36 settings)",
         mismatches == 0 && secs < 10.0,
         std::to_string(mismatches) + " mismatches, " + fmt(secs) + " s");
}

// ---------------------------------------------------------------- criterion 2
void criterion2() {
  Rng rng(102);
  long violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    DctCoefficients c;
    c.mode = IntraMode{0};
    c.size = 8;
    c.values.resize(64);
    for (double& v : c.values) v = rng.uniform(-100.0, 100.0);
    const PooledFeatures p = selective_max_pool(c);
    if (p.values[4] != std::max(p.values[2], p.values[3])) ++violations;
    if (p.values[10] != std::max(p.values[8], p.values[9])) ++violations;
    if (p.values[6] < p.values[5]) ++violations;
    if (p.values[14] < p.values[13]) ++violations;
  }
  report(2, "pooling containment suite (1e4 random 8x8 matrices)", violations == 0,
         std::to_string(violations) + " violations");
}

// ---------------------------------------------------------------- criterion 3
void criterion3() {
  Rng rng(103);
  double worst_energy = 0.0, worst_roundtrip = 0.0;
  for (int n : {4, 8, 16, 32, 64}) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> x(static_cast<std::size_t>(n) * n);
      for (double& v : x) v = std::floor(rng.uniform(-255.0, 256.0));
      const std::vector<double> c = dct2_forward(x, n);
      double ex = 0.0, ec = 0.0;
      for (double v : x) ex += v * v;
      for (double v : c) ec += v * v;
      if (ex > 0.0) worst_energy = std::max(worst_energy, std::abs(ex - ec) / ex);
      const std::vector<double> back = dct2_inverse(c, n);
      double diff2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) diff2 += (back[i] - x[i]) * (back[i] - x[i]);
      if (ex > 0.0) worst_roundtrip = std::max(worst_roundtrip, std::sqrt(diff2 / ex));
    }
  }
  report(3, "DCT Parseval + inverse round trip (1e3 per size 4..64)",
         worst_energy <= 1e-9 && worst_roundtrip <= 1e-9,
         "worst energy err " + fmt(worst_energy * 1e12, 3) + "e-12, worst round trip " +
             fmt(worst_roundtrip * 1e12, 3) + "e-12");
}

// ---------------------------------------------------------------- criterion 4
void criterion4(const std::vector<ConcatFeatures>& training_features, const PcaModel& pca) {
  double max_ortho = 0.0;
  for (int i = 0; i < pca.dim; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < pca.dim; ++j) {
      double dot = 0.0;
      for (int r = 0; r < pca.dim; ++r) dot += pca.basis_at(r, i) * pca.basis_at(r, j);
      row_sum += std::abs(dot - (i == j ? 1.0 : 0.0));
    }
    max_ortho = std::max(max_ortho, row_sum);
  }

  bool nonincreasing = true;
  double total_explained = 0.0;
  for (int i = 0; i < pca.dim; ++i) {
    if (i > 0 && pca.explained_variance[i] > pca.explained_variance[i - 1] + 1e-15)
      nonincreasing = false;
    total_explained += pca.explained_variance[i];
  }

  const int n = static_cast<int>(training_features.size());
  std::vector<double> mean(kConcatDim, 0.0);
  for (const ConcatFeatures& s : training_features)
    for (int j = 0; j < kConcatDim; ++j) mean[j] += s.values[j] / n;
  double input_var = 0.0;
  for (const ConcatFeatures& s : training_features)
    for (int j = 0; j < kConcatDim; ++j)
      input_var += (s.values[j] - mean[j]) * (s.values[j] - mean[j]) / (n - 1);
  const double trace_err = std::abs(total_explained - input_var) / input_var;

  bool always_15 = true;
  for (int size : {4, 8, 16, 32, 64}) {
    const LumaFrame frame = synth_frame(2 * size, 2 * size, 104, 0);
    const std::vector<LumaBlock> blocks = partition_grid(frame, size);
    const TextureFeatures x1 =
        extract_texture_features(blocks[3], gather_reference_samples(frame, blocks[3]), pca);
    always_15 &= x1.values.size() == 15;
  }

  report(4, "PCA orthogonality, variance order, trace, 15-feature output",
         max_ortho <= 1e-9 && nonincreasing && trace_err <= 1e-9 && always_15,
         "|WtW-I|inf " + fmt(max_ortho * 1e12, 3) + "e-12, trace err " + fmt(trace_err * 1e12, 3) +
             "e-12");
}

// ---------------------------------------------------------------- criterion 5
void criterion5() {
  Rng rng(105);
  int pairs = 0;
  double worst = 0.0;
  for (int input_dim : {15, 4, 18}) {
    const int hidden = input_dim == 15 ? 4 : 2;
    for (int trial = 0; trial < 34; ++trial) {
      MlpModel m = init_model(input_dim, hidden, rng.next_u32());
      for (double& p : m.params) p = rng.uniform(-0.5, 0.5);
      TrainSet batch;
      batch.input_dim = input_dim;
      std::vector<double> x(input_dim);
      for (int s = 0; s < 6; ++s) {
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        batch.push(x.data(), static_cast<int>(rng.below(9)));
      }
      const std::vector<double> grad = gradient(m, batch);
      for (int i = 0; i < m.param_count(); ++i) {
        MlpModel probe = m;
        probe.params[i] += 1e-5;
        const double up = mean_loss(probe, batch);
        probe.params[i] -= 2e-5;
        const double down = mean_loss(probe, batch);
        const double fd = (up - down) / 2e-5;
        worst = std::max(worst, std::abs(grad[i] - fd) / std::max(std::abs(fd), 1e-6));
      }
      ++pairs;
    }
  }
  report(5, "analytic gradient vs central differences (dims 15/4/18)",
         pairs >= 100 && worst <= 1e-4,
         std::to_string(pairs) + " pairs, worst relative error " + fmt(worst * 1e6, 3) + "e-6");
}

// ---------------------------------------------------------------- criterion 6
void criterion6() {
  // (a) separable 9-class clusters: loss falls below 10% of initial.
  Rng rng(106);
  TrainSet all;
  all.input_dim = 15;
  for (int c = 0; c < 9; ++c) {
    for (int i = 0; i < 45; ++i) {
      std::array<double, 15> x{};
      for (double& v : x) v = rng.uniform(-0.05, 0.05);
      x[c] += 4.0;
      all.push(x.data(), c);
    }
  }
  TrainSet train, val;
  split_train_val(all, 0.2, 0, train, val);
  TrainConfig cfg;
  cfg.max_epochs = 1000;
  cfg.patience = 6;
  cfg.rng_seed = 0;
  const MlpModel init = init_model(15, kDefaultHiddenOffline, cfg.rng_seed);
  const double initial_loss = mean_loss(init, train);
  const auto [trained, hist] = scg_train(init, train, val, cfg);
  const double final_loss = mean_loss(trained, train);
  const bool converged = final_loss < 0.1 * initial_loss;

  // (b) adversarial split: stop after exactly 6 non-improving checks with
  // the initial parameters returned.
  TrainSet atrain, aval;
  atrain.input_dim = aval.input_dim = 4;
  const std::array<double, 4> ax{1.0, -1.0, 0.5, 0.25};
  for (int i = 0; i < 8; ++i) atrain.push(ax.data(), 0);
  for (int i = 0; i < 4; ++i) aval.push(ax.data(), 1);
  TrainConfig acfg;
  acfg.max_epochs = 100;
  acfg.patience = 6;
  acfg.rng_seed = 9;
  const MlpModel ainit = init_model(4, 2, acfg.rng_seed);
  const auto [amodel, ahist] = scg_train(ainit, atrain, aval, acfg);
  const bool early_stop = ahist.stop_reason == StopReason::patience_exhausted &&
                          ahist.train_loss.size() == 6 && ahist.best_epoch == 0 &&
                          amodel.params == ainit.params;

  report(6, "SCG convergence on separable set + exact-patience early stop",
         converged && early_stop,
         "loss " + fmt(initial_loss, 3) + " -> " + fmt(final_loss, 4) + " in " +
             std::to_string(hist.train_loss.size()) + " epochs; adversarial stop after " +
             std::to_string(ahist.train_loss.size()) + " checks");
}

// ------------------------------------------------------- shared benchmark 7-10
struct PooledMetrics {
  long hits = 0;
  long blocks = 0;
  double reduction_weighted = 0.0;
  double accuracy() const { return blocks ? 100.0 * hits / blocks : 0.0; }
  double reduction() const { return blocks ? reduction_weighted / blocks : 0.0; }
  void add(const SceneReport& r) {
    hits += r.hits;
    blocks += r.blocks;
    reduction_weighted += r.mode_reduction_pct * r.blocks;
  }
};

struct Benchmark {
  std::vector<std::vector<LumaFrame>> scenes;
  std::vector<SceneOracle> oracles;
  std::vector<ConcatFeatures> training_features;
  PcaModel pca;
  MlpModel offline_model;
  StrategyBundle offline_bundle;
  std::vector<StrategyBundle> online_bundles;  // per scene, trained on its frame 0
  std::vector<StrategyBundle> mixed_bundles;
  EncodeParams base_params;
};

Benchmark build_benchmark() {
  Benchmark b;
  b.base_params.qp = 32;
  b.base_params.block_size = 16;
  b.base_params.tau = 0.7;
  b.base_params.r = 2;
  b.base_params.seed = 0;

  // Offline training data: two textured images, training QPs 15/25/35/45.
  const std::vector<LumaFrame> train_images = {synth_frame(512, 320, 7101, 0),
                                               synth_frame(512, 320, 7102, 0)};
  const FeatureDataset ds = extract_dataset(train_images, {15, 25, 35, 45}, 16);
  b.training_features.reserve(ds.samples.size());
  for (const DatasetSample& s : ds.samples) {
    ConcatFeatures c;
    c.values = s.concat;
    b.training_features.push_back(c);
  }
  b.pca = pca_fit(b.training_features, 16);

  TrainSet texture;
  texture.input_dim = kPooledCount;
  for (const DatasetSample& s : ds.samples) {
    ConcatFeatures c;
    c.values = s.concat;
    const TextureFeatures x1 = pca_apply(c, b.pca);
    texture.push(x1.values.data(), s.label_class);
  }
  TrainConfig cfg;
  cfg.max_epochs = 1000;
  cfg.patience = 6;
  cfg.rng_seed = 0;
  b.offline_model = train_offline_model(texture, kDefaultHiddenOffline, cfg).model;

  SizeModels models;
  models.offline = b.offline_model;
  models.pca = b.pca;
  b.offline_bundle.kind = StrategyKind::offline;
  b.offline_bundle.by_size.emplace(16, models);

  // Two test scenes, 4 frames each.
  b.scenes.push_back(synth_scene(640, 384, 4, 7201));
  b.scenes.push_back(synth_scene(640, 384, 4, 7202));
  for (const auto& scene : b.scenes)
    b.oracles.push_back(compute_scene_oracle(scene, b.base_params.qp, b.base_params.block_size));

  for (std::size_t i = 0; i < b.scenes.size(); ++i) {
    for (StrategyKind kind : {StrategyKind::online, StrategyKind::mixed}) {
      StrategyBundle bundle;
      bundle.kind = kind;
      bundle.by_size.emplace(16, models);
      EncodeParams p = b.base_params;
      p.strategy = kind;
      train_bundle_on_frame0(bundle, b.scenes[i], p, b.oracles[i]);
      (kind == StrategyKind::online ? b.online_bundles : b.mixed_bundles)
          .push_back(std::move(bundle));
    }
  }
  return b;
}

PooledMetrics run_pooled(const Benchmark& b, StrategyKind kind, double tau, int k) {
  PooledMetrics pooled;
  for (std::size_t i = 0; i < b.scenes.size(); ++i) {
    EncodeParams p = b.base_params;
    p.strategy = kind;
    p.tau = tau;
    p.k = k;
    const StrategyBundle& bundle = kind == StrategyKind::offline ? b.offline_bundle
                                   : kind == StrategyKind::online ? b.online_bundles[i]
                                                                  : b.mixed_bundles[i];
    pooled.add(encode_scene_trained(b.scenes[i], bundle, p, "bench", b.oracles[i]));
  }
  return pooled;
}

void criterion7(const Benchmark& b, std::array<PooledMetrics, 4>& offline_by_k,
                double build_secs) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 1; k <= 4; ++k) offline_by_k[k - 1] = run_pooled(b, StrategyKind::offline, 0.7, k);

  const long total_blocks = offline_by_k[0].blocks;
  bool acc_nondecreasing = true;
  for (int k = 1; k < 4; ++k)
    if (offline_by_k[k].accuracy() < offline_by_k[k - 1].accuracy() - 1.0)
      acc_nondecreasing = false;
  bool k1_highest = true, strictly_decreasing = true;
  for (int k = 1; k < 4; ++k) {
    if (offline_by_k[0].reduction() <= offline_by_k[k].reduction()) k1_highest = false;
    if (offline_by_k[k].reduction() >= offline_by_k[k - 1].reduction())
      strictly_decreasing = false;
  }
  const double secs = seconds_since(t0) + build_secs;  // include labelling + training
  std::ostringstream detail;
  detail << total_blocks << " blocks; acc(K=1..4) ";
  for (int k = 0; k < 4; ++k) detail << fmt(offline_by_k[k].accuracy()) << " ";
  detail << "; red(K=1..4) ";
  for (int k = 0; k < 4; ++k) detail << fmt(offline_by_k[k].reduction()) << " ";
  detail << "; " << fmt(secs) << " s incl. setup";
  report(7, "accuracy/mode-reduction trends vs K at tau=0.7",
         total_blocks >= 2000 && acc_nondecreasing && k1_highest && strictly_decreasing &&
             secs < 300.0,
         detail.str());
}

void criterion8(const Benchmark& b, const std::array<PooledMetrics, 4>& offline_by_k) {
  bool within_slack = true;
  int cells = 0, mixed_wins = 0;
  std::ostringstream detail;
  for (int k : {2, 3}) {
    const double off = offline_by_k[k - 1].accuracy();
    const double onl = run_pooled(b, StrategyKind::online, 0.7, k).accuracy();
    const double mix = run_pooled(b, StrategyKind::mixed, 0.7, k).accuracy();
    ++cells;
    if (mix >= off && mix >= onl) ++mixed_wins;
    if (mix < std::max(off, onl) - 1.0) within_slack = false;
    detail << "K=" << k << " off/on/mix " << fmt(off) << "/" << fmt(onl) << "/" << fmt(mix)
           << "  ";
  }
  report(8, "bimodal advantage (mixed vs unimodal at tau=0.7, K in {2,3})",
         within_slack && 2 * mixed_wins >= cells, detail.str());
}

void criterion9(const Benchmark& b) {
  // Uniform scorer: all-zero models produce uniform scores in every path.
  SizeModels uniform_models;
  uniform_models.offline.input_dim = kPooledCount;
  uniform_models.offline.hidden_width = kDefaultHiddenOffline;
  uniform_models.offline.params.assign(uniform_models.offline.param_count(), 0.0);
  uniform_models.pca = b.pca;
  MlpModel zero_online;
  zero_online.input_dim = 4;
  zero_online.hidden_width = kDefaultHiddenOnline;
  zero_online.params.assign(zero_online.param_count(), 0.0);
  MlpModel zero_mixed;
  zero_mixed.input_dim = 18;
  zero_mixed.hidden_width = kDefaultHiddenMixed;
  zero_mixed.params.assign(zero_mixed.param_count(), 0.0);

  bool all_clear = true;
  std::ostringstream detail;
  for (StrategyKind kind : {StrategyKind::offline, StrategyKind::online, StrategyKind::mixed}) {
    StrategyBundle uniform_bundle;
    uniform_bundle.kind = kind;
    SizeModels m = uniform_models;
    if (kind != StrategyKind::offline) m.online = zero_online;
    if (kind == StrategyKind::mixed) m.mixed = zero_mixed;
    uniform_bundle.by_size.emplace(16, m);

    for (int k : {2, 3}) {
      PooledMetrics uniform_pooled;
      for (std::size_t i = 0; i < b.scenes.size(); ++i) {
        EncodeParams p = b.base_params;
        p.strategy = kind;
        p.k = k;
        uniform_pooled.add(
            encode_scene_trained(b.scenes[i], uniform_bundle, p, "uniform", b.oracles[i]));
      }
      const double trained = run_pooled(b, kind, 0.7, k).accuracy();
      const double floor = uniform_pooled.accuracy();
      if (trained < floor + 5.0) all_clear = false;
      detail << to_string(kind) << "/K" << k << " " << fmt(trained, 1) << " vs " << fmt(floor, 1)
             << "  ";
    }
  }
  report(9, "learning-signal floor (trained >= uniform scorer + 5pp)", all_clear, detail.str());
}

void criterion10(const Benchmark& b) {
  double worst_overhead = 0.0, worst_infer_us = 0.0;
  for (std::size_t i = 0; i < b.scenes.size(); ++i) {
    EncodeParams p = b.base_params;
    p.strategy = StrategyKind::mixed;
    p.k = 3;
    StrategyBundle bundle;
    bundle.kind = StrategyKind::mixed;
    bundle.by_size.emplace(16, b.offline_bundle.by_size.at(16));
    // Full end-to-end run: labelling, training and search all inside.
    const SceneReport rep = encode_scene(b.scenes[i], bundle, p, "overhead");
    worst_overhead = std::max(worst_overhead, rep.overhead_pct);
    int fast_blocks = 0;
    for (const BlockDecision& d : rep.decisions) fast_blocks += !d.baseline;
    if (fast_blocks > 0)
      worst_infer_us =
          std::max(worst_infer_us, 1000.0 * rep.timings.infer_ms / fast_blocks);
  }
  report(10, "overhead proxy (features+inference+training <= 5% of encode; <= 50us/block)",
         worst_overhead <= 5.0 && worst_infer_us <= 50.0,
         "overhead " + fmt(worst_overhead, 3) + "%, inference " + fmt(worst_infer_us, 2) +
             " us/block");
}

// ---------------------------------------------------------------- criterion 11
int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion11(const std::string& cli) {
  if (cli.empty()) {
    report(11, "CLI determinism", false, "no --cli path given");
    return;
  }
  const fs::path dir = fs::temp_directory_path() / "fastintra_acceptance_cli";
  fs::create_directories(dir);
  auto in_dir = [&dir](const std::string& name) { return (dir / name).string(); };

  bool ok = run_cli(cli, "--seed 5 synth -o " + in_dir("scene.y4m") +
                             " --width 144 --height 96 --frames 2") == 0;
  std::vector<std::pair<std::string, std::string>> compares;

  for (const std::string tag : {"a", "b"}) {
    ok = ok && run_cli(cli, "extract -i " + in_dir("scene.y4m") + " --block-size 8 --qps 25 35" +
                                " -o " + in_dir("ds_" + tag + ".json")) == 0;
    ok = ok && run_cli(cli, "fit-pca --dataset " + in_dir("ds_" + tag + ".json") + " -o " +
                                in_dir("pca_" + tag + ".json")) == 0;
    ok = ok && run_cli(cli, "--seed 5 train-offline --dataset " + in_dir("ds_" + tag + ".json") +
                                " --pca " + in_dir("pca_" + tag + ".json") +
                                " --max-epochs 60 -o " + in_dir("model_" + tag + ".json")) == 0;
    ok = ok && run_cli(cli, "--seed 5 --no-timing encode -i " + in_dir("scene.y4m") +
                                " --strategy mixed --model " + in_dir("model_" + tag + ".json") +
                                " --block-size 8 --tau 0.7 --k 3 --r 2 --report " +
                                in_dir("rep_" + tag + ".csv") + " --save-models " +
                                in_dir("trained_" + tag)) == 0;
    ok = ok && run_cli(cli, "--seed 5 --no-timing encode -i " + in_dir("scene.y4m") +
                                " --strategy mixed --model " + in_dir("model_" + tag + ".json") +
                                " --block-size 8 --report-format json --blocks --report " +
                                in_dir("rep_" + tag + ".json")) == 0;
    ok = ok && run_cli(cli, "--seed 5 --no-timing sweep -i " + in_dir("scene.y4m") +
                                " --strategy offline --model " + in_dir("model_" + tag + ".json") +
                                " --block-size 8 --taus 0.5 0.7 --ks 1 2 --rs 1 2 --report " +
                                in_dir("sweep_" + tag + ".csv")) == 0;
    ok = ok && run_cli(cli, "--no-timing baseline -i " + in_dir("scene.y4m") +
                                " --block-size 8 --qp 32 --report " +
                                in_dir("base_" + tag + ".csv")) == 0;
  }
  compares = {{"ds_a.json", "ds_b.json"},
              {"pca_a.json", "pca_b.json"},
              {"model_a.json", "model_b.json"},
              {"rep_a.csv", "rep_b.csv"},
              {"rep_a.json", "rep_b.json"},
              {"trained_a_online.json", "trained_b_online.json"},
              {"trained_a_mixed.json", "trained_b_mixed.json"},
              {"sweep_a.csv", "sweep_b.csv"},
              {"base_a.csv", "base_b.csv"}};
  std::string mismatch;
  if (ok) {
    for (const auto& [a, bfile] : compares) {
      const std::string ca = slurp(dir / a), cb = slurp(dir / bfile);
      if (ca.empty() || ca != cb) {
        ok = false;
        mismatch = a + " differs or is empty";
        break;
      }
    }
  } else {
    mismatch = "a CLI invocation failed";
  }
  report(11, "CLI determinism (byte-identical reports and model files)", ok, mismatch);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

  const auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion5();
  criterion6();

  std::cout << "building shared desk-scale benchmark..." << std::endl;
  const auto t_bench = std::chrono::steady_clock::now();
  const Benchmark bench = build_benchmark();
  const double build_secs = seconds_since(t_bench);
  criterion4(bench.training_features, bench.pca);
  std::array<PooledMetrics, 4> offline_by_k;
  criterion7(bench, offline_by_k, build_secs);
  criterion8(bench, offline_by_k);
  criterion9(bench);
  criterion10(bench);
  criterion11(cli);

  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(g_failures))
            << " (" << fmt(seconds_since(t0), 1) << " s total)" << std::endl;
  return g_failures == 0 ? 0 : 1;
}
