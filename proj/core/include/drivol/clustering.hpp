#pragma once

// K-means with k-means++ initialization and Lloyd iterations, plus z-score
// standardization, elbow-curve support and behavior labeling. Everything is
// deterministic under a seed: sampling uses a self-contained generator, ties
// break toward the lowest index, and the best restart is chosen by
// (wcss, restart index).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drivol {

// Dense row-major matrix; points are rows.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// splitmix64: tiny deterministic generator with stable cross-platform output.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n).
  std::size_t next_index(std::size_t n) {
    return static_cast<std::size_t>(next_double() * static_cast<double>(n));
  }

 private:
  std::uint64_t state_;
};

struct StandardScaler {
  std::vector<double> mean;
  std::vector<double> std;  // population std, all entries > 0 for a real scaler

  static StandardScaler identity(std::size_t dims);
  std::vector<double> inverse(std::span<const double> standardized) const;
};

// Z-scores each column. Throws ZeroVarianceFeatureError (with the column
// index) and TooFewPointsError when n < 2.
std::pair<Matrix, StandardScaler> standardize(const Matrix& features);

// k-means++: first centroid uniform, each next sampled with probability
// proportional to squared distance to the nearest chosen centroid.
Matrix kmeans_pp_init(const Matrix& points, std::size_t k, SplitMix64& rng);

struct LloydStep {
  Matrix centroids;
  std::vector<std::size_t> assignments;
  double wcss = 0.0;
};

// One assignment + update sweep. The returned wcss is measured against the
// updated centroids. A cluster left empty re-seeds at the point farthest
// from its nearest centroid.
LloydStep lloyd_iterate(const Matrix& points, const Matrix& centroids);

struct KMeansOptions {
  std::size_t k = 3;
  std::uint64_t seed = 42;
  std::size_t restarts = 10;
  std::size_t maxIter = 300;
  double tol = 1e-6;
};

struct ClusterModel {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t restarts = 0;
  std::size_t maxIter = 0;
  double tol = 0.0;
  Matrix centroids;  // in the space the points were given in
  std::vector<std::size_t> assignments;
  double wcss = 0.0;
  std::size_t iterations = 0;  // iterations of the winning restart
  bool converged = false;
  std::size_t bestRestart = 0;
  StandardScaler scaler;     // identity when the points were not standardized
  bool standardized = false;

  // Centroid row mapped back to original units via the scaler.
  std::vector<double> centroid_original(std::size_t cluster) const;
};

// Best of `restarts` k-means++ runs; restart r uses a sub-seed derived
// deterministically from (seed, r). Throws TooFewPointsError when n < k.
ClusterModel kmeans(const Matrix& points, const KMeansOptions& options);

struct ElbowPoint {
  std::size_t k = 0;
  double wcss = 0.0;
};

struct ElbowResult {
  std::vector<ElbowPoint> points;
  // k maximizing wcss(k-1) - 2*wcss(k) + wcss(k+1); advisory only, absent
  // when fewer than three k values were fit.
  std::optional<std::size_t> knee;
};

ElbowResult elbow_curve(const Matrix& points, std::size_t kMin, std::size_t kMax,
                        const KMeansOptions& options);

struct BehaviorLabeling {
  std::vector<std::string> labels;  // cluster index -> label
  std::size_t orderingFeature = 0;  // DV1
  bool triadic = false;             // true when the behavior names apply
};

// k = 3: order de-standardized centroids by the DV1 coordinate; lowest is
// conservative, middle normal, highest aggressive. Other k fall back to
// "cluster-<i>" names.
BehaviorLabeling assign_behavior_labels(const ClusterModel& model);

// Sub-seed scheme shared by kmeans and tests.
std::uint64_t restart_subseed(std::uint64_t seed, std::size_t restart);

}  // namespace drivol
