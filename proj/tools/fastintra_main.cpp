// fastintra: fast intra mode decision toolkit.
//
// Subcommands:
//   synth          generate a deterministic synthetic test scene
//   extract        build a labelled feature dataset from frames
//   fit-pca        fit the texture-feature PCA on a dataset
//   train-offline  train the offline texture model
//   encode         run a strategy over a scene (online/mixed train on frame 0)
//   sweep          encode over a (tau, k, r) parameter grid
//   baseline       exhaustive 67-mode reference encode

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fastintra/harness.hpp"
#include "fastintra/model_io.hpp"
#include "fastintra/report_io.hpp"
#include "fastintra/synthetic.hpp"

namespace {

using namespace fastintra;

FrameFormat format_from_string(const std::string& s, const std::string& path) {
  if (s == "pgm") return FrameFormat::pgm;
  if (s == "y4m") return FrameFormat::y4m;
  if (s == "yuv") return FrameFormat::raw_yuv420;
  if (s == "auto") {
    const std::string ext = std::filesystem::path(path).extension().string();
    if (ext == ".pgm") return FrameFormat::pgm;
    if (ext == ".y4m") return FrameFormat::y4m;
    if (ext == ".yuv" || ext == ".raw") return FrameFormat::raw_yuv420;
    throw std::runtime_error("cannot infer format from '" + path + "'; pass --format");
  }
  throw std::runtime_error("unknown format '" + s + "'");
}

struct InputArgs {
  std::vector<std::string> inputs;
  std::string format = "auto";
  int width = 0;
  int height = 0;
  int max_frames = 8;  // desk-scale default: first 8 frames
};

void add_input_options(CLI::App* cmd, InputArgs& in) {
  cmd->add_option("-i,--input", in.inputs, "input file(s): .pgm, .y4m or raw .yuv")
      ->required()
      ->expected(-1);
  cmd->add_option("--format", in.format, "input format: auto|pgm|y4m|yuv (default auto)");
  cmd->add_option("--width", in.width, "frame width (raw yuv only)");
  cmd->add_option("--height", in.height, "frame height (raw yuv only)");
  cmd->add_option("--max-frames", in.max_frames,
                  "frame cap per scene, 0 = all (default 8)");
}

std::vector<LumaFrame> load_inputs(const InputArgs& in) {
  std::vector<LumaFrame> frames;
  for (const std::string& path : in.inputs) {
    const FrameFormat fmt = format_from_string(in.format, path);
    std::vector<LumaFrame> part = load_frames(path, fmt, in.width, in.height, in.max_frames);
    for (LumaFrame& f : part) {
      f.frame_index = static_cast<int>(frames.size());
      frames.push_back(std::move(f));
      if (in.max_frames > 0 && static_cast<int>(frames.size()) >= in.max_frames) return frames;
    }
  }
  return frames;
}

std::string scene_name_of(const InputArgs& in, const std::string& override_name) {
  if (!override_name.empty()) return override_name;
  return std::filesystem::path(in.inputs.front()).stem().string();
}

StrategyBundle bundle_from_model_file(const std::string& path, StrategyKind kind, int block_size) {
  const ModelFile mf = load_model_file(path);
  if (!mf.pca)
    throw std::runtime_error("model file '" + path + "' has no embedded PCA model");
  if (mf.block_size != block_size)
    throw std::runtime_error("model file '" + path + "' was trained for block size " +
                             std::to_string(mf.block_size) + ", run uses " +
                             std::to_string(block_size));
  StrategyBundle bundle;
  bundle.kind = kind;
  SizeModels models;
  models.offline = mf.model;
  models.pca = *mf.pca;
  bundle.by_size.emplace(block_size, std::move(models));
  return bundle;
}

TrainSet texture_train_set(const FeatureDataset& ds, const PcaModel& pca) {
  TrainSet set;
  set.input_dim = kPooledCount;
  for (const DatasetSample& s : ds.samples) {
    ConcatFeatures c;
    c.values = s.concat;
    const TextureFeatures x1 = pca_apply(c, pca);
    set.push(x1.values.data(), s.label_class);
  }
  return set;
}

int run_synth(const std::string& output, int width, int height, int frames, std::uint64_t seed) {
  const std::vector<LumaFrame> scene = synth_scene(width, height, frames, seed);
  const std::string ext = std::filesystem::path(output).extension().string();
  if (ext == ".y4m") {
    save_y4m(scene, output);
  } else if (ext == ".pgm") {
    if (frames == 1) {
      save_pgm(scene.front(), output);
    } else {
      const std::string stem = output.substr(0, output.size() - 4);
      for (const LumaFrame& f : scene)
        save_pgm(f, stem + "_" + std::to_string(f.frame_index) + ".pgm");
    }
  } else {
    throw std::runtime_error("synth output must end in .y4m or .pgm");
  }
  std::cout << "wrote " << frames << " frame(s) " << width << "x" << height << " to " << output
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fast intra mode decision toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool no_timing = false;
  app.add_option("--seed", seed, "RNG seed for training and splits (default 0)");
  app.add_flag("--no-timing", no_timing,
               "zero all timing fields in reports for byte-reproducible output");

  // --- synth ---
  auto* synth = app.add_subcommand("synth", "generate a deterministic synthetic scene");
  std::string synth_out = "scene.y4m";
  int synth_w = 768, synth_h = 512, synth_frames = 8;
  synth->add_option("-o,--output", synth_out, "output path (.y4m or .pgm)");
  synth->add_option("--width", synth_w, "frame width (default 768)");
  synth->add_option("--height", synth_h, "frame height (default 512)");
  synth->add_option("--frames", synth_frames, "frame count (default 8)");

  // --- extract ---
  auto* extract = app.add_subcommand("extract", "extract a labelled feature dataset");
  InputArgs extract_in;
  add_input_options(extract, extract_in);
  int extract_bs = 16;
  std::vector<int> extract_qps = {15, 25, 35, 45};
  std::string extract_out = "dataset.json";
  extract->add_option("--block-size", extract_bs, "block size (default 16)");
  extract->add_option("--qps", extract_qps, "labelling QPs (default 15 25 35 45)");
  extract->add_option("-o,--output", extract_out, "dataset output path");

  // --- fit-pca ---
  auto* fitpca = app.add_subcommand("fit-pca", "fit the texture PCA on a dataset");
  std::string fitpca_dataset, fitpca_out = "pca.json";
  fitpca->add_option("--dataset", fitpca_dataset, "dataset file")->required();
  fitpca->add_option("-o,--output", fitpca_out, "PCA model output path");

  // --- train-offline ---
  auto* train = app.add_subcommand("train-offline", "train the offline texture model");
  std::string train_dataset, train_pca, train_out = "offline_model.json";
  int train_hidden = kDefaultHiddenOffline;
  int train_epochs = 1000;
  int train_patience = 6;
  double train_val_fraction = 0.2;
  train->add_option("--dataset", train_dataset, "dataset file")->required();
  train->add_option("--pca", train_pca, "fitted PCA file")->required();
  train->add_option("--hidden", train_hidden, "hidden width (default 4)");
  train->add_option("--max-epochs", train_epochs, "epoch cap (default 1000)");
  train->add_option("--patience", train_patience, "non-improving checks before stop (default 6)");
  train->add_option("--val-fraction", train_val_fraction, "validation fraction (default 0.2)");
  train->add_option("-o,--output", train_out, "model output path");

  // --- encode / sweep / baseline (shared options) ---
  auto* encode = app.add_subcommand("encode", "run a strategy over a scene");
  auto* sweep_cmd = app.add_subcommand("sweep", "encode over a (tau, k, r) grid");
  auto* baseline = app.add_subcommand("baseline", "exhaustive reference encode");

  InputArgs enc_in, sweep_in, base_in;
  std::string enc_strategy = "offline", sweep_strategy = "offline";
  std::string enc_model, sweep_model;
  EncodeParams enc_params, sweep_params;
  std::string enc_report = "report.csv", sweep_report = "sweep.csv", base_report = "baseline.csv";
  std::string enc_scene_name, sweep_scene_name, base_scene_name;
  std::string enc_format = "csv", sweep_format = "csv", base_format = "csv";
  bool enc_blocks = false;
  std::string enc_save_models;
  std::vector<double> sweep_taus = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<int> sweep_ks = {1, 2, 3, 4};
  std::vector<int> sweep_rs = {2};
  int base_qp = 32, base_bs = 16;

  auto add_encode_options = [](CLI::App* cmd, InputArgs& in, std::string& strategy,
                               std::string& model, EncodeParams& p, std::string& report,
                               std::string& fmt, std::string& scene_name) {
    add_input_options(cmd, in);
    cmd->add_option("--strategy", strategy, "offline|online|mixed (default offline)");
    cmd->add_option("--model", model, "offline model file (with embedded PCA)")->required();
    cmd->add_option("--qp", p.qp, "quantisation parameter (default 32)");
    cmd->add_option("--block-size", p.block_size, "block size (default 16)");
    cmd->add_option("--hidden-online", p.hidden_online, "online hidden width (default 2)");
    cmd->add_option("--hidden-mixed", p.hidden_mixed, "mixed hidden width (default 2)");
    cmd->add_option("--online-epochs", p.online_max_epochs, "online epoch cap (default 100)");
    cmd->add_option("--patience", p.patience, "early-stop patience (default 6)");
    cmd->add_option("--val-fraction", p.validation_fraction, "validation fraction (default 0.2)");
    cmd->add_option("--report", report, "report output path");
    cmd->add_option("--report-format", fmt, "csv|json (default csv)");
    cmd->add_option("--scene-name", scene_name, "scene label in reports (default input stem)");
  };
  add_encode_options(encode, enc_in, enc_strategy, enc_model, enc_params, enc_report, enc_format,
                     enc_scene_name);
  encode->add_option("--tau", enc_params.tau, "confidence threshold (default 0.7)");
  encode->add_option("--k", enc_params.k, "classes checked below tau (default 2)");
  encode->add_option("--r", enc_params.r, "modes given full RDO (default 2)");
  encode->add_flag("--blocks", enc_blocks, "include per-block decisions in JSON reports");
  encode->add_option("--save-models", enc_save_models,
                     "path prefix for models trained in this run");

  add_encode_options(sweep_cmd, sweep_in, sweep_strategy, sweep_model, sweep_params, sweep_report,
                     sweep_format, sweep_scene_name);
  sweep_cmd->add_option("--taus", sweep_taus, "tau grid (default 0.1..0.9)");
  sweep_cmd->add_option("--ks", sweep_ks, "k grid (default 1 2 3 4)");
  sweep_cmd->add_option("--rs", sweep_rs, "r grid (default 2)");

  add_input_options(baseline, base_in);
  baseline->add_option("--qp", base_qp, "quantisation parameter (default 32)");
  baseline->add_option("--block-size", base_bs, "block size (default 16)");
  baseline->add_option("--report", base_report, "report output path");
  baseline->add_option("--report-format", base_format, "csv|json (default csv)");
  baseline->add_option("--scene-name", base_scene_name, "scene label in reports");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(synth)) return run_synth(synth_out, synth_w, synth_h, synth_frames, seed);

    if (app.got_subcommand(extract)) {
      const std::vector<LumaFrame> frames = load_inputs(extract_in);
      const FeatureDataset ds = extract_dataset(frames, extract_qps, extract_bs);
      save_dataset(ds, extract_out);
      std::cout << "extracted " << ds.samples.size() << " angular-labelled samples from "
                << frames.size() << " frame(s) to " << extract_out << "\n";
      return 0;
    }

    if (app.got_subcommand(fitpca)) {
      const FeatureDataset ds = load_dataset(fitpca_dataset);
      std::vector<ConcatFeatures> rows;
      rows.reserve(ds.samples.size());
      for (const DatasetSample& s : ds.samples) {
        ConcatFeatures c;
        c.values = s.concat;
        rows.push_back(c);
      }
      const PcaModel pca = pca_fit(rows, ds.block_size);
      save_pca_file(pca, fitpca_out);
      std::cout << "fitted PCA on " << rows.size() << " samples, wrote " << fitpca_out << "\n";
      return 0;
    }

    if (app.got_subcommand(train)) {
      const FeatureDataset ds = load_dataset(train_dataset);
      const PcaModel pca = load_pca_file(train_pca);
      if (pca.block_size != ds.block_size)
        throw std::runtime_error("PCA and dataset block sizes differ");
      const TrainSet set = texture_train_set(ds, pca);
      TrainConfig cfg;
      cfg.max_epochs = train_epochs;
      cfg.patience = train_patience;
      cfg.validation_fraction = train_val_fraction;
      cfg.rng_seed = seed;
      const TrainOutcome out = train_offline_model(set, train_hidden, cfg);
      ModelFile mf;
      mf.model = out.model;
      mf.strategy = "offline";
      mf.block_size = ds.block_size;
      mf.pca = pca;
      save_model_file(mf, train_out);
      std::cout << "trained offline model on " << set.size() << " samples ("
                << out.history.train_loss.size() << " epochs, best check "
                << out.history.best_epoch << ", stop: " << to_string(out.history.stop_reason)
                << "), wrote " << train_out << "\n";
      return 0;
    }

    if (app.got_subcommand(encode)) {
      const std::vector<LumaFrame> frames = load_inputs(enc_in);
      enc_params.strategy = strategy_from_string(enc_strategy);
      enc_params.seed = seed;
      StrategyBundle bundle =
          bundle_from_model_file(enc_model, enc_params.strategy, enc_params.block_size);
      bundle.tau = enc_params.tau;
      bundle.k = enc_params.k;
      bundle.r = enc_params.r;

      SceneOracle oracle = compute_scene_oracle(frames, enc_params.qp, enc_params.block_size);
      StrategyBundle trained = bundle;
      std::string warning;
      const double train_ms =
          train_bundle_on_frame0(trained, frames, enc_params, oracle, &warning);
      if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
      const SceneReport rep =
          encode_scene_trained(frames, trained, enc_params, scene_name_of(enc_in, enc_scene_name),
                               oracle, train_ms, warning);

      if (!enc_save_models.empty()) {
        const SizeModels& m = trained.models_for(enc_params.block_size);
        if (m.online) {
          ModelFile mf;
          mf.model = *m.online;
          mf.strategy = "online";
          mf.block_size = enc_params.block_size;
          save_model_file(mf, enc_save_models + "_online.json");
        }
        if (m.mixed) {
          ModelFile mf;
          mf.model = *m.mixed;
          mf.strategy = "mixed";
          mf.block_size = enc_params.block_size;
          mf.pca = m.pca;
          save_model_file(mf, enc_save_models + "_mixed.json");
        }
      }

      if (enc_format == "json")
        write_reports_json({rep}, enc_report, enc_blocks, !no_timing);
      else
        write_reports_csv({rep}, enc_report, !no_timing);
      std::cout << rep.scene << " " << rep.strategy << ": accuracy " << rep.accuracy_pct
                << "%, mode reduction " << rep.mode_reduction_pct << "% over " << rep.blocks
                << " blocks -> " << enc_report << "\n";
      return 0;
    }

    if (app.got_subcommand(sweep_cmd)) {
      const std::vector<LumaFrame> frames = load_inputs(sweep_in);
      sweep_params.strategy = strategy_from_string(sweep_strategy);
      sweep_params.seed = seed;
      StrategyBundle bundle =
          bundle_from_model_file(sweep_model, sweep_params.strategy, sweep_params.block_size);
      const std::vector<SceneReport> reports =
          sweep(frames, bundle, sweep_params, sweep_taus, sweep_ks, sweep_rs,
                scene_name_of(sweep_in, sweep_scene_name));
      if (sweep_format == "json")
        write_reports_json(reports, sweep_report, false, !no_timing);
      else
        write_reports_csv(reports, sweep_report, !no_timing);
      std::cout << "wrote " << reports.size() << " reports to " << sweep_report << "\n";
      return 0;
    }

    if (app.got_subcommand(baseline)) {
      const std::vector<LumaFrame> frames = load_inputs(base_in);
      const SceneReport rep =
          baseline_encode(frames, base_qp, base_bs, scene_name_of(base_in, base_scene_name));
      if (base_format == "json")
        write_reports_json({rep}, base_report, false, !no_timing);
      else
        write_reports_csv({rep}, base_report, !no_timing);
      std::cout << rep.scene << " baseline: " << rep.blocks << " blocks -> " << base_report
                << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
