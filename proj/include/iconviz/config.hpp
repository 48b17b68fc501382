#pragma once

#include <cstdint>
#include <optional>

namespace iconviz {

/// Every numeric threshold used by the analysis, in one place.
struct Tolerances {
  double zero_variance = 1e-12;      // relative to max(1, |column mean|)
  double zero_eigenvalue = 1e-8;     // relative to max(1, lambda_max)
  double eigensolver = 1e-10;        // residual bound, relative to max(1, lambda_max)
  double laplacian_row_sum = 1e-10;
  double negative_eigenvalue = 1e-8;
  double kmeans_shift = 1e-6;        // centroid movement for convergence
  double share_sum = 1e-9;           // |sum(pq) - 1|
};

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
  double tolerance = 1e-6;
};

struct AnalysisConfig {
  /// Cluster count; nullopt selects it from the Laplacian spectrum.
  std::optional<int> k = 8;
  /// Gaussian bandwidth; nullopt uses the median pairwise distance.
  std::optional<double> sigma;
  std::uint64_t seed = 0;
  bool standardize = true;
  /// Distinct feature rows beyond this are embedded out of sample.
  std::size_t spectral_max_points = 2000;
  KMeansOptions kmeans;
  Tolerances tol;
};

}  // namespace iconviz
