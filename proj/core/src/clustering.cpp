#include "drivol/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drivol/errors.hpp"

namespace drivol {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

// Index of the closest centroid; ties break toward the lowest index.
std::size_t nearest_centroid(std::span<const double> point, const Matrix& centroids) {
  std::size_t best = 0;
  double bestDist = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(point, centroids.row(c));
    if (d < bestDist) {
      bestDist = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

StandardScaler StandardScaler::identity(std::size_t dims) {
  StandardScaler s;
  s.mean.assign(dims, 0.0);
  s.std.assign(dims, 1.0);
  return s;
}

std::vector<double> StandardScaler::inverse(std::span<const double> standardized) const {
  std::vector<double> out(standardized.size());
  for (std::size_t i = 0; i < standardized.size(); ++i) {
    out[i] = standardized[i] * std[i] + mean[i];
  }
  return out;
}

std::pair<Matrix, StandardScaler> standardize(const Matrix& features) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  if (n < 2) {
    throw TooFewPointsError(n, 2);
  }
  StandardScaler scaler;
  scaler.mean.assign(d, 0.0);
  scaler.std.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += features(i, j);
    }
    scaler.mean[j] = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = features(i, j) - scaler.mean[j];
      sq += diff * diff;
    }
    scaler.std[j] = std::sqrt(sq / static_cast<double>(n));
    if (scaler.std[j] == 0.0) {
      throw ZeroVarianceFeatureError(j);
    }
  }
  Matrix out(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out(i, j) = (features(i, j) - scaler.mean[j]) / scaler.std[j];
    }
  }
  return {std::move(out), std::move(scaler)};
}

Matrix kmeans_pp_init(const Matrix& points, std::size_t k, SplitMix64& rng) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  if (n < k) {
    throw TooFewPointsError(n, k);
  }
  Matrix centroids(k, d);
  std::vector<double> minDist(n, std::numeric_limits<double>::infinity());

  std::size_t first = rng.next_index(n);
  std::copy_n(points.row(first).data(), d, centroids.row(0).data());

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dNew = squared_distance(points.row(i), centroids.row(c - 1));
      if (dNew < minDist[i]) {
        minDist[i] = dNew;
      }
      total += minDist[i];
    }
    std::size_t chosen = 0;
    if (total > 0.0) {
      // Sample proportional to squared distance via the cumulative sum.
      const double target = rng.next_double() * total;
      double acc = 0.0;
      chosen = n - 1;  // guards against rounding at the top end
      for (std::size_t i = 0; i < n; ++i) {
        acc += minDist[i];
        if (acc > target) {
          chosen = i;
          break;
        }
      }
    } else {
      // All points coincide with a centroid already; any choice is equal.
      chosen = rng.next_index(n);
    }
    std::copy_n(points.row(chosen).data(), d, centroids.row(c).data());
  }
  return centroids;
}

LloydStep lloyd_iterate(const Matrix& points, const Matrix& centroids) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  const std::size_t k = centroids.rows();

  LloydStep step;
  step.assignments.resize(n);
  std::vector<std::size_t> counts(k, 0);
  Matrix sums(k, d);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = nearest_centroid(points.row(i), centroids);
    step.assignments[i] = c;
    ++counts[c];
    auto sum = sums.row(c);
    const auto p = points.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      sum[j] += p[j];
    }
  }

  step.centroids = Matrix(k, d);
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] > 0) {
      for (std::size_t j = 0; j < d; ++j) {
        step.centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);
      }
    } else {
      // Re-seed an empty cluster at the point farthest from its nearest
      // centroid, so the restart keeps k distinct clusters.
      std::size_t farthest = 0;
      double farthestDist = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dist =
            squared_distance(points.row(i), centroids.row(step.assignments[i]));
        if (dist > farthestDist) {
          farthestDist = dist;
          farthest = i;
        }
      }
      std::copy_n(points.row(farthest).data(), d, step.centroids.row(c).data());
    }
  }

  step.wcss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    step.wcss += squared_distance(points.row(i), step.centroids.row(step.assignments[i]));
  }
  return step;
}

std::uint64_t restart_subseed(std::uint64_t seed, std::size_t restart) {
  // One splitmix64 output per restart keeps sub-streams decorrelated.
  SplitMix64 gen(seed + 0x51C5D1AA5D3B7E4DULL * static_cast<std::uint64_t>(restart));
  return gen.next();
}

ClusterModel kmeans(const Matrix& points, const KMeansOptions& options) {
  const std::size_t n = points.rows();
  if (options.k == 0 || n < options.k) {
    throw TooFewPointsError(n, options.k);
  }
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
  const std::size_t maxIter = std::max<std::size_t>(options.maxIter, 1);

  ClusterModel best;
  best.k = options.k;
  best.seed = options.seed;
  best.restarts = options.restarts;
  best.maxIter = options.maxIter;
  best.tol = options.tol;
  best.scaler = StandardScaler::identity(points.cols());
  best.wcss = std::numeric_limits<double>::infinity();

  for (std::size_t r = 0; r < restarts; ++r) {
    SplitMix64 rng(restart_subseed(options.seed, r));
    Matrix centroids = kmeans_pp_init(points, options.k, rng);

    std::vector<std::size_t> prev;
    double prevWcss = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
    LloydStep step;

    while (iterations < maxIter) {
      step = lloyd_iterate(points, centroids);
      ++iterations;
      centroids = step.centroids;
      if (step.assignments == prev) {
        converged = true;
        break;
      }
      if (prevWcss - step.wcss < options.tol) {
        converged = true;
        break;
      }
      prev = step.assignments;
      prevWcss = step.wcss;
    }

    if (step.wcss < best.wcss) {
      best.centroids = std::move(step.centroids);
      best.assignments = std::move(step.assignments);
      best.wcss = step.wcss;
      best.iterations = iterations;
      best.converged = converged;
      best.bestRestart = r;
    }
  }
  return best;
}

std::vector<double> ClusterModel::centroid_original(std::size_t cluster) const {
  return scaler.inverse(centroids.row(cluster));
}

ElbowResult elbow_curve(const Matrix& points, std::size_t kMin, std::size_t kMax,
                        const KMeansOptions& options) {
  ElbowResult result;
  for (std::size_t k = kMin; k <= kMax; ++k) {
    KMeansOptions opts = options;
    opts.k = k;
    const ClusterModel model = kmeans(points, opts);
    result.points.push_back({k, model.wcss});
  }
  if (result.points.size() >= 3) {
    double bestDrop = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < result.points.size(); ++i) {
      const double drop = result.points[i - 1].wcss - 2.0 * result.points[i].wcss +
                          result.points[i + 1].wcss;
      if (drop > bestDrop) {
        bestDrop = drop;
        result.knee = result.points[i].k;
      }
    }
  }
  return result;
}

BehaviorLabeling assign_behavior_labels(const ClusterModel& model) {
  BehaviorLabeling labeling;
  labeling.labels.resize(model.k);
  if (model.k != 3) {
    for (std::size_t c = 0; c < model.k; ++c) {
      labeling.labels[c] = "cluster-" + std::to_string(c);
    }
    return labeling;
  }

  labeling.triadic = true;
  std::vector<std::size_t> order = {0, 1, 2};
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return model.centroid_original(a)[labeling.orderingFeature] <
           model.centroid_original(b)[labeling.orderingFeature];
  });
  labeling.labels[order[0]] = "conservative";
  labeling.labels[order[1]] = "normal";
  labeling.labels[order[2]] = "aggressive";
  return labeling;
}

}  // namespace drivol
