#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "iconviz/config.hpp"
#include "iconviz/features.hpp"
#include "iconviz/kmeans.hpp"

namespace iconviz {

inline constexpr int kFeatureDims = 5;

inline Eigen::MatrixXd feature_matrix(std::span<const ChainFeatures> features) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(features.size()), kFeatureDims);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    auto r = static_cast<Eigen::Index>(i);
    X(r, 0) = static_cast<double>(f.n_nodes);
    X(r, 1) = static_cast<double>(f.n_edges);
    X(r, 2) = f.density;
    X(r, 3) = f.avg_clustering;
    X(r, 4) = f.avg_path_length;
  }
  return X;
}

/// Column z-scores with the population standard deviation; columns whose
/// deviation is negligible become zero.
inline Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& X, const Tolerances& tol = {}) {
  if (X.rows() < 2) throw Error(ErrorCode::TooFewChains, "rows=" + std::to_string(X.rows()));
  Eigen::MatrixXd Z(X.rows(), X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double mean = X.col(c).mean();
    const double var = (X.col(c).array() - mean).square().mean();
    const double sd = std::sqrt(var);
    if (sd <= tol.zero_variance * std::max(1.0, std::abs(mean))) {
      Z.col(c).setZero();
    } else {
      Z.col(c) = (X.col(c).array() - mean) / sd;
    }
  }
  return Z;
}

inline Eigen::MatrixXd standardize_features(std::span<const ChainFeatures> features,
                                            const Tolerances& tol = {}) {
  if (features.size() < 2) {
    throw Error(ErrorCode::TooFewChains, "chains=" + std::to_string(features.size()));
  }
  return standardize_columns(feature_matrix(features), tol);
}

struct SpectralModel {
  double sigma = 1.0;
  Eigen::VectorXd weights;      // point multiplicities, all ones for plain input
  Eigen::MatrixXd similarity;   // W: symmetric, zero diagonal, entries in [0, 1]
  Eigen::MatrixXd laplacian;    // D - W (multiplicity-weighted, see below)
  Eigen::VectorXd eigenvalues;  // non-decreasing
  Eigen::MatrixXd eigenvectors;
  int k = 0;
  Eigen::MatrixXd embedding;    // points x k
};

/// Median of all pairwise Euclidean distances, counting each row
/// `weights(i)` times (coincident copies contribute zero distances).
inline double median_pairwise_distance(const Eigen::MatrixXd& X, const Eigen::VectorXd& weights) {
  const Eigen::Index n = X.rows();
  std::vector<std::pair<double, double>> dist;  // (distance, pair count)
  dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2 + 1));
  double zero_pairs = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    zero_pairs += weights(i) * (weights(i) - 1) / 2;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dist.emplace_back((X.row(i) - X.row(j)).norm(), weights(i) * weights(j));
    }
  }
  if (zero_pairs > 0) dist.emplace_back(0.0, zero_pairs);
  std::sort(dist.begin(), dist.end());
  double total = 0.0;
  for (auto& [_, c] : dist) total += c;
  if (total <= 0) return 0.0;
  // 0-based order statistics total/2 (odd) or the mean of total/2-1 and total/2
  auto at = [&](double rank) {
    double acc = 0.0;
    for (auto& [d, c] : dist) {
      acc += c;
      if (rank < acc) return d;
    }
    return dist.back().first;
  };
  const auto count = static_cast<long long>(std::llround(total));
  if (count % 2 == 1) return at(static_cast<double>(count / 2));
  return 0.5 * (at(static_cast<double>(count / 2 - 1)) + at(static_cast<double>(count / 2)));
}

/// Laplacian restricted to vectors constant on coincident copies. With
/// multiplicities m it is the symmetric form M^1/2 (D' - W') M^-1/2, where
/// W'_uv = m_v W_uv; unit weights reduce it to the plain D - W.
inline Eigen::MatrixXd laplacian_matrix(const Eigen::MatrixXd& W, const Eigen::VectorXd& weights) {
  const Eigen::Index n = W.rows();
  Eigen::MatrixXd L(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    double degree = 0.0;
    for (Eigen::Index v = 0; v < n; ++v) {
      if (v == u) continue;
      degree += weights(v) * W(u, v);
      L(u, v) = -std::sqrt(weights(u) * weights(v)) * W(u, v);
    }
    L(u, u) = degree;
  }
  return L;
}

inline SpectralModel similarity_model(Eigen::MatrixXd W, std::optional<Eigen::VectorXd> weights = {},
                                      double sigma = 1.0) {
  SpectralModel m;
  m.sigma = sigma;
  m.weights = weights ? *weights : Eigen::VectorXd::Ones(W.rows());
  m.similarity = std::move(W);
  m.laplacian = laplacian_matrix(m.similarity, m.weights);
  return m;
}

/// Fully connected Gaussian similarity s_ij = exp(-|x_i - x_j|^2 / (2 sigma^2)).
inline SpectralModel build_similarity(const Eigen::MatrixXd& X, std::optional<double> sigma = {},
                                      std::optional<Eigen::VectorXd> weights = {}) {
  const Eigen::Index n = X.rows();
  Eigen::VectorXd w = weights ? *weights : Eigen::VectorXd::Ones(n);
  double s = sigma ? *sigma : median_pairwise_distance(X, w);
  if (!(s > 0.0)) s = 1.0;
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  const double denom = 2.0 * s * s;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double v = std::exp(-(X.row(i) - X.row(j)).squaredNorm() / denom);
      W(i, j) = v;
      W(j, i) = v;
    }
  }
  return similarity_model(std::move(W), w, s);
}

/// k from the spectrum: the number of numerically zero eigenvalues when
/// there are several, otherwise the largest gap among the first ten.
inline int choose_k(const Eigen::VectorXd& eigenvalues, const Tolerances& tol = {}) {
  const Eigen::Index n = eigenvalues.size();
  if (n == 0) return 0;
  const double lambda_max = eigenvalues(n - 1);
  const double eps = tol.zero_eigenvalue * std::max(1.0, lambda_max);
  int zeros = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eigenvalues(i) < eps) ++zeros;
  }
  if (zeros > 1) return zeros;
  const int k_max = static_cast<int>(std::min<Eigen::Index>(10, n - 1));
  if (k_max < 2) return 1;
  int best = 2;
  double best_gap = -1.0;
  for (int j = 2; j <= k_max; ++j) {
    // 1-based lambda_{j+1} - lambda_j
    double gap = eigenvalues(j) - eigenvalues(j - 1);
    if (gap > best_gap) {
      best_gap = gap;
      best = j;
    }
  }
  return best;
}

/// Eigendecomposition of the Laplacian and the k-column spectral embedding.
inline void spectral_embed(SpectralModel& model, std::optional<int> k = {},
                           const Tolerances& tol = {}) {
  const Eigen::Index n = model.laplacian.rows();
  if (n == 0) throw Error(ErrorCode::TooFewChains, "rows=0");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(model.laplacian);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure, "eigen decomposition did not converge");
  }
  model.eigenvalues = solver.eigenvalues();
  model.eigenvectors = solver.eigenvectors();
  const double scale = std::max(1.0, std::abs(model.eigenvalues(n - 1)));
  const double residual =
      (model.laplacian * model.eigenvectors - model.eigenvectors * model.eigenvalues.asDiagonal())
          .cwiseAbs()
          .maxCoeff();
  if (!(residual <= tol.eigensolver * scale * std::max<double>(1.0, std::sqrt(double(n))))) {
    throw Error(ErrorCode::EigensolverFailure, "residual " + std::to_string(residual));
  }
  const int chosen = k ? *k : choose_k(model.eigenvalues, tol);
  if (chosen < 1 || chosen > n) {
    throw Error(ErrorCode::InvalidK, "k=" + std::to_string(chosen) + " points=" + std::to_string(n));
  }
  model.k = chosen;
  // back to per-point coordinates: x = M^-1/2 y
  model.embedding = model.weights.cwiseSqrt().cwiseInverse().asDiagonal() *
                    model.eigenvectors.leftCols(chosen);
}

struct SpectralClustering {
  std::vector<int> assignments;  // per input chain
  int k = 0;
  double sigma = 0.0;
  std::size_t distinct_points = 0;
  std::size_t embedded_points = 0;  // solved exactly; the rest extended out of sample
  Eigen::VectorXd eigenvalues;
  double wcss = 0.0;
};

/// Spectral clustering of chain feature vectors. Coincident rows are solved
/// once with their multiplicity, which is exact for the spectrum of vectors
/// constant on copies. Beyond `spectral_max_points` distinct rows, an evenly
/// spaced subset is solved and the rest receive the Nystrom extension
/// x_j = sum_i m_i w_i x_ij / (d - lambda_j) before nearest-centroid
/// assignment.
inline SpectralClustering cluster_features(std::span<const ChainFeatures> features,
                                           const AnalysisConfig& cfg) {
  SpectralClustering out;
  const std::size_t n = features.size();
  out.assignments.assign(n, 0);
  if (n == 0) return out;
  if (n == 1) {
    out.k = 1;
    out.distinct_points = out.embedded_points = 1;
    return out;
  }
  Eigen::MatrixXd X = feature_matrix(features);
  if (cfg.standardize) X = standardize_columns(X, cfg.tol);

  // distinct rows in lexicographic order with multiplicities
  auto row_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      if (X(a, c) != X(b, c)) return X(a, c) < X(b, c);
    }
    return false;
  };
  std::vector<Eigen::Index> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<Eigen::Index>(i);
  std::stable_sort(order.begin(), order.end(), row_less);
  std::vector<Eigen::Index> representative;
  std::vector<double> multiplicity;
  std::vector<std::size_t> group_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || row_less(order[i - 1], order[i])) {
      representative.push_back(order[i]);
      multiplicity.push_back(0.0);
    }
    multiplicity.back() += 1.0;
    group_of[order[i]] = representative.size() - 1;
  }
  const std::size_t groups = representative.size();
  out.distinct_points = groups;

  std::vector<std::size_t> solved;
  if (groups <= cfg.spectral_max_points) {
    solved.resize(groups);
    for (std::size_t g = 0; g < groups; ++g) solved[g] = g;
  } else {
    for (std::size_t i = 0; i < cfg.spectral_max_points; ++i) {
      solved.push_back(i * groups / cfg.spectral_max_points);
    }
  }
  out.embedded_points = solved.size();

  const auto s = static_cast<Eigen::Index>(solved.size());
  Eigen::MatrixXd Xs(s, X.cols());
  Eigen::VectorXd ws(s);
  for (Eigen::Index i = 0; i < s; ++i) {
    Xs.row(i) = X.row(representative[solved[i]]);
    ws(i) = multiplicity[solved[i]];
  }

  SpectralModel model = build_similarity(Xs, cfg.sigma, ws);
  out.sigma = model.sigma;
  std::optional<int> k = cfg.k;
  if (k) k = std::min<int>(*k, static_cast<int>(s));
  spectral_embed(model, k, cfg.tol);
  out.k = model.k;
  out.eigenvalues = model.eigenvalues;

  auto km = kmeans_cluster(model.embedding, model.k, cfg.seed, cfg.kmeans, &model.weights);
  out.wcss = km.wcss;

  std::vector<int> group_cluster(groups, -1);
  for (Eigen::Index i = 0; i < s; ++i) group_cluster[solved[i]] = km.assignments[i];
  if (static_cast<std::size_t>(s) < groups) {
    const double denom = 2.0 * model.sigma * model.sigma;
    for (std::size_t g = 0; g < groups; ++g) {
      if (group_cluster[g] >= 0) continue;
      Eigen::VectorXd wx(s);
      for (Eigen::Index i = 0; i < s; ++i) {
        wx(i) = ws(i) * std::exp(-(X.row(representative[g]) - Xs.row(i)).squaredNorm() / denom);
      }
      const double degree = wx.sum();
      Eigen::RowVectorXd coords(model.k);
      bool stable = true;
      for (int j = 0; j < model.k; ++j) {
        double gap = degree - model.eigenvalues(j);
        if (std::abs(gap) < 1e-12) {
          stable = false;
          break;
        }
        coords(j) = wx.dot(model.embedding.col(j)) / gap;
      }
      if (!stable) {
        Eigen::Index nearest;
        (Xs.rowwise() - X.row(representative[g])).rowwise().squaredNorm().minCoeff(&nearest);
        coords = model.embedding.row(nearest);
      }
      Eigen::Index best;
      (km.centroids.rowwise() - coords).rowwise().squaredNorm().minCoeff(&best);
      group_cluster[g] = static_cast<int>(best);
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.assignments[i] = group_cluster[group_of[i]];
  return out;
}

}  // namespace iconviz
