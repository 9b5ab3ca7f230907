#pragma once

// Model and PCA file I/O. Files are versioned JSON with all floating-point
// values written as decimal text at 17 significant digits, so a round trip
// reproduces every parameter bit-exactly.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fastintra/mlp.hpp"
#include "fastintra/pca.hpp"

namespace fastintra {

inline constexpr int kModelFormatVersion = 1;

struct ModelFile {
  MlpModel model;
  std::string strategy;  // "offline", "online" or "mixed"
  int block_size = 0;
  std::optional<PcaModel> pca;  // embedded for offline/mixed models
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_double_array(std::ostream& out, const char* key, const double* v,
                               std::size_t n, bool trailing_comma) {
  out << "  \"" << key << "\": [";
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out << ", ";
    out << fmt_double(v[i]);
  }
  out << "]" << (trailing_comma ? "," : "") << "\n";
}

inline void write_pca_object(std::ostream& out, const PcaModel& pca, int indent_unused) {
  (void)indent_unused;
  out << "  \"pca\": {\n";
  out << "    \"dim\": " << pca.dim << ",\n";
  out << "    \"keep\": " << pca.keep << ",\n";
  out << "    \"block_size\": " << pca.block_size << ",\n";
  auto arr = [&out](const char* key, const std::vector<double>& v, bool comma) {
    out << "    \"" << key << "\": [";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ", ";
      out << fmt_double(v[i]);
    }
    out << "]" << (comma ? "," : "") << "\n";
  };
  arr("mean", pca.mean, true);
  arr("basis", pca.basis, true);
  arr("explained_variance", pca.explained_variance, false);
  out << "  }\n";
}

inline std::vector<double> json_double_array(const nlohmann::json& j, const char* key,
                                             std::size_t expect) {
  if (!j.contains(key) || !j[key].is_array())
    throw std::runtime_error(std::string("corrupt model file: missing array '") + key + "'");
  std::vector<double> v = j[key].get<std::vector<double>>();
  if (v.size() != expect)
    throw std::runtime_error(std::string("corrupt model file: '") + key + "' has " +
                             std::to_string(v.size()) + " entries, expected " +
                             std::to_string(expect));
  return v;
}

}  // namespace detail

inline std::string serialize_model(const ModelFile& mf) {
  const MlpModel& m = mf.model;
  const int h = m.hidden_width;
  const int in = m.input_dim;
  std::ostringstream out;
  out << "{\n";
  out << "  \"format_version\": " << kModelFormatVersion << ",\n";
  out << "  \"strategy\": \"" << mf.strategy << "\",\n";
  out << "  \"block_size\": " << mf.block_size << ",\n";
  out << "  \"input_dim\": " << in << ",\n";
  out << "  \"hidden_width\": " << h << ",\n";
  detail::write_double_array(out, "hidden_weights", m.w1(), static_cast<std::size_t>(h) * in, true);
  detail::write_double_array(out, "hidden_biases", m.b1(), h, true);
  detail::write_double_array(out, "output_weights", m.w2(),
                             static_cast<std::size_t>(kScoreClasses) * h, true);
  detail::write_double_array(out, "output_biases", m.b2(), kScoreClasses, mf.pca.has_value());
  if (mf.pca) detail::write_pca_object(out, *mf.pca, 0);
  out << "}\n";
  return out.str();
}

inline ModelFile deserialize_model(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("corrupt model file: ") + e.what());
  }
  if (!j.contains("format_version") || !j["format_version"].is_number_integer())
    throw std::runtime_error("corrupt model file: missing format_version");
  const int version = j["format_version"].get<int>();
  if (version != kModelFormatVersion)
    throw std::runtime_error("model file version mismatch: got " + std::to_string(version) +
                             ", expected " + std::to_string(kModelFormatVersion));
  ModelFile mf;
  try {
    mf.strategy = j.at("strategy").get<std::string>();
    mf.block_size = j.at("block_size").get<int>();
    mf.model.input_dim = j.at("input_dim").get<int>();
    mf.model.hidden_width = j.at("hidden_width").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("corrupt model file: ") + e.what());
  }
  const int h = mf.model.hidden_width;
  const int in = mf.model.input_dim;
  if (h < 1 || in < 1) throw std::runtime_error("corrupt model file: bad dimensions");
  mf.model.params.assign(mf.model.param_count(), 0.0);
  auto copy = [&](const char* key, double* dst, std::size_t n) {
    const std::vector<double> v = detail::json_double_array(j, key, n);
    std::copy(v.begin(), v.end(), dst);
  };
  copy("hidden_weights", mf.model.w1(), static_cast<std::size_t>(h) * in);
  copy("hidden_biases", mf.model.b1(), h);
  copy("output_weights", mf.model.w2(), static_cast<std::size_t>(kScoreClasses) * h);
  copy("output_biases", mf.model.b2(), kScoreClasses);
  for (double v : mf.model.params)
    if (!std::isfinite(v)) throw std::runtime_error("corrupt model file: non-finite parameter");

  if (j.contains("pca")) {
    const nlohmann::json& p = j["pca"];
    PcaModel pca;
    try {
      pca.dim = p.at("dim").get<int>();
      pca.keep = p.at("keep").get<int>();
      pca.block_size = p.at("block_size").get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(std::string("corrupt model file: ") + e.what());
    }
    if (pca.dim != kConcatDim || pca.keep != kPooledCount)
      throw std::runtime_error("corrupt model file: unexpected PCA dimensions");
    pca.mean = detail::json_double_array(p, "mean", pca.dim);
    pca.basis = detail::json_double_array(p, "basis", static_cast<std::size_t>(pca.dim) * pca.dim);
    pca.explained_variance = detail::json_double_array(p, "explained_variance", pca.dim);
    pca.fitted = true;
    mf.pca = std::move(pca);
  }
  return mf;
}

inline void save_model_file(const ModelFile& mf, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << serialize_model(mf);
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

// Standalone PCA file (the fit-pca output, before it is embedded into an
// offline model file).
inline void save_pca_file(const PcaModel& pca, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << "{\n";
  out << "  \"format_version\": " << kModelFormatVersion << ",\n";
  out << "  \"kind\": \"pca\",\n";
  out << "  \"dim\": " << pca.dim << ",\n";
  out << "  \"keep\": " << pca.keep << ",\n";
  out << "  \"block_size\": " << pca.block_size << ",\n";
  detail::write_double_array(out, "mean", pca.mean.data(), pca.mean.size(), true);
  detail::write_double_array(out, "basis", pca.basis.data(), pca.basis.size(), true);
  detail::write_double_array(out, "explained_variance", pca.explained_variance.data(),
                             pca.explained_variance.size(), false);
  out << "}\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline PcaModel load_pca_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("corrupt PCA file: ") + e.what());
  }
  if (!j.contains("format_version") || j["format_version"].get<int>() != kModelFormatVersion)
    throw std::runtime_error("PCA file version mismatch");
  PcaModel pca;
  try {
    pca.dim = j.at("dim").get<int>();
    pca.keep = j.at("keep").get<int>();
    pca.block_size = j.at("block_size").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("corrupt PCA file: ") + e.what());
  }
  pca.mean = detail::json_double_array(j, "mean", pca.dim);
  pca.basis = detail::json_double_array(j, "basis", static_cast<std::size_t>(pca.dim) * pca.dim);
  pca.explained_variance = detail::json_double_array(j, "explained_variance", pca.dim);
  pca.fitted = true;
  return pca;
}

}  // namespace fastintra
