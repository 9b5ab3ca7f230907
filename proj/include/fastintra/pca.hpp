#pragma once

// PCA over the 45-dimensional concatenated texture features. Fitting
// eigendecomposes the sample covariance (unbiased, mean-centred); the
// transform projects onto the leading 15 components.

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "fastintra/features.hpp"

namespace fastintra {

struct PcaModel {
  int dim = kConcatDim;
  int keep = kPooledCount;
  int block_size = 0;
  std::vector<double> mean;                // dim
  std::vector<double> basis;               // dim*dim row-major; columns are components
  std::vector<double> explained_variance;  // dim, nonincreasing
  bool fitted = false;

  double basis_at(int row, int col) const {
    return basis[static_cast<std::size_t>(row) * dim + col];
  }
};

// Requires more samples than dimensions. Components are ordered by
// descending variance; each column is sign-fixed so its largest-magnitude
// entry is positive. All-constant input degenerates to the identity basis
// with zero variances.
inline PcaModel pca_fit(const std::vector<ConcatFeatures>& samples, int block_size = 0) {
  const int d = kConcatDim;
  const int n = static_cast<int>(samples.size());
  if (n <= d)
    throw std::invalid_argument("pca_fit: need more samples than dimensions (" +
                                std::to_string(d) + ")");
  PcaModel model;
  model.block_size = block_size;
  model.mean.assign(d, 0.0);
  for (const ConcatFeatures& s : samples)
    for (int j = 0; j < d; ++j) model.mean[j] += s.values[j];
  for (int j = 0; j < d; ++j) model.mean[j] /= n;

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd centered(d);
  for (const ConcatFeatures& s : samples) {
    for (int j = 0; j < d; ++j) centered(j) = s.values[j] - model.mean[j];
    cov.noalias() += centered * centered.transpose();
  }
  cov /= static_cast<double>(n - 1);

  model.basis.assign(static_cast<std::size_t>(d) * d, 0.0);
  model.explained_variance.assign(d, 0.0);
  if (cov.cwiseAbs().maxCoeff() == 0.0) {  // zero-variance degenerate input
    for (int j = 0; j < d; ++j) model.basis[static_cast<std::size_t>(j) * d + j] = 1.0;
    model.fitted = true;
    return model;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw std::runtime_error("pca_fit: eigensolver failed");
  // Eigen returns ascending eigenvalues; reverse to descending.
  for (int c = 0; c < d; ++c) {
    const int src = d - 1 - c;
    double ev = solver.eigenvalues()(src);
    if (ev < 0.0) ev = 0.0;  // numerical noise on rank-deficient input
    model.explained_variance[c] = ev;
    Eigen::VectorXd col = solver.eigenvectors().col(src);
    int arg = 0;
    for (int r = 1; r < d; ++r)
      if (std::abs(col(r)) > std::abs(col(arg))) arg = r;
    if (col(arg) < 0.0) col = -col;
    for (int r = 0; r < d; ++r) model.basis[static_cast<std::size_t>(r) * d + c] = col(r);
  }
  model.fitted = true;
  return model;
}

// x1 = first `keep` coordinates of W^T (m - mean).
inline TextureFeatures pca_apply(const ConcatFeatures& m, const PcaModel& model) {
  if (!model.fitted) throw std::logic_error("pca_apply: model not fitted");
  TextureFeatures out;
  for (int c = 0; c < model.keep; ++c) {
    double acc = 0.0;
    for (int r = 0; r < model.dim; ++r)
      acc += model.basis_at(r, c) * (m.values[r] - model.mean[r]);
    out.values[c] = acc;
  }
  return out;
}

// Full-depth projection, used by tests to check the orthogonal round trip.
inline std::vector<double> pca_project_full(const ConcatFeatures& m, const PcaModel& model) {
  if (!model.fitted) throw std::logic_error("pca_project_full: model not fitted");
  std::vector<double> out(model.dim, 0.0);
  for (int c = 0; c < model.dim; ++c)
    for (int r = 0; r < model.dim; ++r)
      out[c] += model.basis_at(r, c) * (m.values[r] - model.mean[r]);
  return out;
}

// End-to-end texture-modality extraction for one block.
inline TextureFeatures extract_texture_features(const LumaBlock& block,
                                                const ReferenceSamples& refs,
                                                const PcaModel& model) {
  return pca_apply(block_concat_features(block, refs), model);
}

}  // namespace fastintra
