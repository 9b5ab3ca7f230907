#pragma once

// Report and dataset file formats. CSV carries one row per scene report;
// JSON mirrors the CSV fields and can optionally include per-block
// decisions. Timing fields can be zeroed for byte-reproducible output.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fastintra/harness.hpp"

namespace fastintra {

inline constexpr const char* kReportCsvHeader =
    "scene,strategy,block_size,qp,tau,k,r,blocks,accuracy_pct,mode_reduction_pct,"
    "train_ms,infer_ms,search_ms,overhead_pct";

namespace detail {

inline std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

}  // namespace detail

inline std::string reports_to_csv(const std::vector<SceneReport>& reports,
                                  bool include_timing = true) {
  std::ostringstream out;
  out << kReportCsvHeader << "\n";
  for (const SceneReport& r : reports) {
    const double train = include_timing ? r.timings.train_ms : 0.0;
    const double infer = include_timing ? r.timings.infer_ms : 0.0;
    const double search = include_timing ? r.timings.search_ms : 0.0;
    const double overhead = include_timing ? r.overhead_pct : 0.0;
    out << r.scene << ',' << r.strategy << ',' << r.block_size << ',' << r.qp << ','
        << detail::fmt("%.4g", r.tau) << ',' << r.k << ',' << r.r << ',' << r.blocks << ','
        << detail::fmt("%.4f", r.accuracy_pct) << ',' << detail::fmt("%.4f", r.mode_reduction_pct)
        << ',' << detail::fmt("%.3f", train) << ',' << detail::fmt("%.3f", infer) << ','
        << detail::fmt("%.3f", search) << ',' << detail::fmt("%.4f", overhead) << "\n";
  }
  return out.str();
}

inline void write_reports_csv(const std::vector<SceneReport>& reports, const std::string& path,
                              bool include_timing = true) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << reports_to_csv(reports, include_timing);
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline nlohmann::json report_to_json(const SceneReport& r, bool include_blocks,
                                     bool include_timing) {
  nlohmann::json j;
  j["scene"] = r.scene;
  j["strategy"] = r.strategy;
  j["block_size"] = r.block_size;
  j["qp"] = r.qp;
  j["tau"] = r.tau;
  j["k"] = r.k;
  j["r"] = r.r;
  j["seed"] = r.seed;
  j["blocks"] = r.blocks;
  j["hits"] = r.hits;
  j["accuracy_pct"] = r.accuracy_pct;
  j["mode_reduction_pct"] = r.mode_reduction_pct;
  j["overhead_pct"] = include_timing ? r.overhead_pct : 0.0;
  j["timings_ms"] = {
      {"feature", include_timing ? r.timings.feature_ms : 0.0},
      {"inference", include_timing ? r.timings.infer_ms : 0.0},
      {"train", include_timing ? r.timings.train_ms : 0.0},
      {"search", include_timing ? r.timings.search_ms : 0.0},
      {"oracle", include_timing ? r.timings.oracle_ms : 0.0},
      {"total", include_timing ? r.timings.total_ms : 0.0},
  };
  if (!r.train_warning.empty()) j["train_warning"] = r.train_warning;
  if (include_blocks) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const BlockDecision& d : r.decisions) {
      nlohmann::json b;
      b["frame"] = d.frame;
      b["bx"] = d.bx;
      b["by"] = d.by;
      b["baseline"] = d.baseline;
      b["candidates"] = d.candidates;
      b["rmd_modes"] = d.rmd_modes;
      b["rdo_modes"] = d.rdo_modes;
      b["chosen"] = d.chosen;
      b["oracle"] = d.oracle;
      b["hit"] = d.hit;
      b["evaluated_angular"] = d.evaluated_angular;
      blocks.push_back(std::move(b));
    }
    j["block_decisions"] = std::move(blocks);
  }
  return j;
}

inline void write_reports_json(const std::vector<SceneReport>& reports, const std::string& path,
                               bool include_blocks = false, bool include_timing = true) {
  nlohmann::json j = nlohmann::json::array();
  for (const SceneReport& r : reports) j.push_back(report_to_json(r, include_blocks, include_timing));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline constexpr int kDatasetFormatVersion = 1;

inline void save_dataset(const FeatureDataset& ds, const std::string& path) {
  nlohmann::json j;
  j["format_version"] = kDatasetFormatVersion;
  j["kind"] = "dataset";
  j["block_size"] = ds.block_size;
  j["qps"] = ds.qps;
  nlohmann::json samples = nlohmann::json::array();
  for (const DatasetSample& s : ds.samples) {
    nlohmann::json e;
    e["frame"] = s.frame;
    e["bx"] = s.bx;
    e["by"] = s.by;
    e["qp"] = s.qp;
    e["label_class"] = s.label_class;
    e["best_mode"] = s.best_mode;
    e["concat"] = s.concat;
    e["neighbor_codes"] = s.neighbor_codes;
    samples.push_back(std::move(e));
  }
  j["samples"] = std::move(samples);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << j.dump() << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline FeatureDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("corrupt dataset file: ") + e.what());
  }
  if (!j.contains("format_version") || j["format_version"].get<int>() != kDatasetFormatVersion)
    throw std::runtime_error("dataset file version mismatch");
  FeatureDataset ds;
  try {
    ds.block_size = j.at("block_size").get<int>();
    ds.qps = j.at("qps").get<std::vector<int>>();
    for (const nlohmann::json& e : j.at("samples")) {
      DatasetSample s;
      s.frame = e.at("frame").get<int>();
      s.bx = e.at("bx").get<int>();
      s.by = e.at("by").get<int>();
      s.qp = e.at("qp").get<int>();
      s.label_class = e.at("label_class").get<int>();
      s.best_mode = e.at("best_mode").get<int>();
      const auto concat = e.at("concat").get<std::vector<double>>();
      const auto codes = e.at("neighbor_codes").get<std::vector<double>>();
      if (concat.size() != kConcatDim || codes.size() != 4)
        throw std::runtime_error("corrupt dataset file: bad feature lengths");
      std::copy(concat.begin(), concat.end(), s.concat.begin());
      std::copy(codes.begin(), codes.end(), s.neighbor_codes.begin());
      ds.samples.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("corrupt dataset file: ") + e.what());
  }
  return ds;
}

}  // namespace fastintra
