#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "iconviz/config.hpp"
#include "iconviz/error.hpp"
#include "iconviz/patterns.hpp"
#include "iconviz/rng.hpp"

namespace iconviz {

struct KMeansResult {
  std::vector<int> assignments;  // per input row, clusters numbered by first appearance
  Eigen::MatrixXd centroids;     // k x dims, rows follow the numbering above
  double wcss = 0.0;
  std::vector<double> wcss_trace;  // best restart, one entry per assignment step
  int iterations = 0;
};

namespace detail {

struct LloydRun {
  std::vector<int> assign;
  Eigen::MatrixXd centroids;
  double wcss = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
  int iterations = 0;
};

inline double weighted_wcss(const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                            const Eigen::MatrixXd& C, const std::vector<int>& assign) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    total += w(i) * (X.row(i) - C.row(assign[i])).squaredNorm();
  }
  return total;
}

inline Eigen::MatrixXd plus_plus_init(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, int k,
                                      Rng& rng) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd C(k, X.cols());
  std::vector<bool> chosen(n, false);
  auto pick = [&](const Eigen::VectorXd& mass) -> Eigen::Index {
    double total = mass.sum();
    if (!(total > 0.0)) {
      // every remaining point coincides with a centroid
      std::vector<Eigen::Index> free;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!chosen[i]) free.push_back(i);
      }
      if (free.empty()) return 0;
      return free[rng.uniform_int(0, static_cast<std::int64_t>(free.size()) - 1)];
    }
    double target = rng.uniform() * total;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      acc += mass(i);
      if (mass(i) > 0.0 && target < acc) return i;
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      if (mass(i) > 0.0) return i;
    }
    return 0;
  };
  Eigen::Index first = pick(w);
  chosen[first] = true;
  C.row(0) = X.row(first);
  Eigen::VectorXd d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2(i) = (X.row(i) - C.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    Eigen::Index next = pick(w.cwiseProduct(d2));
    chosen[next] = true;
    C.row(c) = X.row(next);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2(i) = std::min(d2(i), (X.row(i) - C.row(c)).squaredNorm());
    }
  }
  return C;
}

inline LloydRun lloyd(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, Eigen::MatrixXd C,
                      const KMeansOptions& opts) {
  const Eigen::Index n = X.rows();
  const int k = static_cast<int>(C.rows());
  LloydRun run;
  run.assign.assign(n, 0);
  for (int it = 0; it < opts.max_iterations; ++it) {
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        double d = (X.row(i) - C.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      run.assign[i] = best;
    }
    run.trace.push_back(weighted_wcss(X, w, C, run.assign));
    ++run.iterations;

    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, X.cols());
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      next.row(run.assign[i]) += w(i) * X.row(i);
      mass(run.assign[i]) += w(i);
    }
    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (mass(c) > 0.0) {
        next.row(c) /= mass(c);
      } else {
        next.row(c) = C.row(c);  // empty cluster keeps its centroid
      }
      shift = std::max(shift, (next.row(c) - C.row(c)).norm());
    }
    C = std::move(next);
    if (shift <= opts.tolerance) break;
  }
  run.centroids = std::move(C);
  run.wcss = weighted_wcss(X, w, run.centroids, run.assign);
  return run;
}

}  // namespace detail

/// Weighted k-means (weights act as row multiplicities) with k-means++
/// seeding and best-of-restarts by within-cluster sum of squares. Rows are
/// sorted lexicographically before seeding, so the partition does not depend
/// on input row order.
inline KMeansResult kmeans_cluster(const Eigen::MatrixXd& X, int k, std::uint64_t seed,
                                   const KMeansOptions& opts = {},
                                   const Eigen::VectorXd* weights = nullptr) {
  const Eigen::Index n = X.rows();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::InvalidK, "k=" + std::to_string(k) + " rows=" + std::to_string(n));
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      if (X(a, c) != X(b, c)) return X(a, c) < X(b, c);
    }
    return false;
  });
  Eigen::MatrixXd Xs(n, X.cols());
  Eigen::VectorXd ws(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Xs.row(i) = X.row(order[i]);
    ws(i) = weights ? (*weights)(order[i]) : 1.0;
  }

  Rng rng(seed);
  detail::LloydRun best;
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    auto run = detail::lloyd(Xs, ws, detail::plus_plus_init(Xs, ws, k, rng), opts);
    if (run.wcss < best.wcss) best = std::move(run);
  }

  // Renumber clusters by first appearance in canonical row order.
  std::vector<int> relabel(k, -1);
  int next_label = 0;
  for (int a : best.assign) {
    if (relabel[a] < 0) relabel[a] = next_label++;
  }
  for (int c = 0; c < k; ++c) {
    if (relabel[c] < 0) relabel[c] = next_label++;
  }
  KMeansResult result;
  result.assignments.assign(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) result.assignments[order[i]] = relabel[best.assign[i]];
  result.centroids.resize(k, X.cols());
  for (int c = 0; c < k; ++c) result.centroids.row(relabel[c]) = best.centroids.row(c);
  result.wcss = best.wcss;
  result.wcss_trace = std::move(best.trace);
  result.iterations = best.iterations;
  return result;
}

/// Adjusted Rand index between two labelings of the same items.
inline double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidK, "label lengths differ");
  const double n = static_cast<double>(a.size());
  if (a.size() < 2) return 1.0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1;
    ra[a[i]] += 1;
    rb[b[i]] += 1;
  }
  auto c2 = [](double x) { return x * (x - 1) / 2; };
  double index = 0, sa = 0, sb = 0;
  for (auto& [_, c] : joint) index += c2(c);
  for (auto& [_, c] : ra) sa += c2(c);
  for (auto& [_, c] : rb) sb += c2(c);
  double expected = sa * sb / c2(n);
  double max_index = (sa + sb) / 2;
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

struct ClusterAlignment {
  std::vector<std::optional<Pattern>> mapping;  // cluster -> modal pattern
  std::vector<std::size_t> cluster_sizes;
  double agreement = 0.0;  // share of items whose cluster maps to their own pattern
  std::vector<std::string> warnings;
};

/// Names each cluster after the most frequent structural pattern among its
/// members; ties go to the lower-numbered pattern.
inline ClusterAlignment align_clusters(std::span<const int> assignments,
                                       std::span<const Pattern> structural, int k) {
  if (assignments.size() != structural.size()) {
    throw Error(ErrorCode::InvalidK, "assignment and label counts differ");
  }
  std::vector<std::array<std::size_t, 8>> votes(k);
  for (auto& v : votes) v.fill(0);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    int c = assignments[i];
    if (c < 0 || c >= k) throw Error(ErrorCode::InvalidK, "cluster " + std::to_string(c));
    ++votes[c][index_of(structural[i])];
  }
  ClusterAlignment out;
  out.mapping.assign(k, std::nullopt);
  out.cluster_sizes.assign(k, 0);
  std::size_t agree = 0;
  for (int c = 0; c < k; ++c) {
    const auto& v = votes[c];
    std::size_t total = std::accumulate(v.begin(), v.end(), std::size_t{0});
    out.cluster_sizes[c] = total;
    if (total == 0) {
      out.warnings.push_back("cluster " + std::to_string(c) + " is empty");
      continue;
    }
    auto best = std::max_element(v.begin(), v.end());  // first max = lowest pattern
    out.mapping[c] = kAllPatterns[best - v.begin()];
    agree += *best;
  }
  out.agreement = assignments.empty() ? 0.0
                                      : static_cast<double>(agree) /
                                            static_cast<double>(assignments.size());
  return out;
}

}  // namespace iconviz
