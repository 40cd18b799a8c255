#pragma once

// Descriptive statistics, correlation matrix and cluster summaries over a
// feature table, plus emission helpers for the json/csv/plotdata formats.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drivol/clustering.hpp"
#include "drivol/volatility.hpp"

namespace drivol {

struct StatsRow {
  std::string measure;
  std::size_t count = 0;
  double mean = 0;
  double std = 0;  // sample std, divisor N-1
  double min = 0;
  double p25 = 0;
  double p50 = 0;
  double p75 = 0;
  double max = 0;
};

struct DescriptiveStatsTable {
  std::vector<StatsRow> rows;  // one per DV measure, in DV order
};

struct CorrelationMatrix {
  std::vector<std::string> measures;
  // Row-major d*d; nullopt marks undefined entries (zero variance or fewer
  // than two pairwise-complete observations).
  std::vector<std::optional<double>> values;

  std::optional<double> at(std::size_t i, std::size_t j) const {
    return values[i * measures.size() + j];
  }
};

// Count bookkeeping carried across pipeline stages so summaries can state
// the full accounting identity: clustered + incomplete + excludedShort =
// retainedTracks.
struct StageCounts {
  std::size_t retainedTracks = 0;   // ingested, class-filtered, joined
  std::size_t featureRows = 0;      // rows in the features file
  std::size_t excludedShort = 0;    // tracks below the minimum sample count
  std::size_t incompleteRows = 0;   // feature rows with at least one absent DV
  std::size_t clustered = 0;        // rows used to fit the model
};

// One fitted model together with the feature rows it was fit on.
struct GroupClustering {
  std::string group;  // "all" when pooled, else the vehicle class
  ClusterModel model;
  BehaviorLabeling labeling;
  std::vector<std::size_t> usedRows;  // indices into the feature table
};

struct ClusterGroupSummary {
  std::string group;
  std::size_t k = 0;
  std::vector<std::string> labels;         // cluster -> label
  std::vector<std::size_t> clusterCounts;  // cluster -> member count
  std::map<std::string, std::vector<std::size_t>> perClassCounts;
  std::vector<std::vector<double>> centroidsOriginal;
  std::vector<std::array<std::optional<double>, kNumMeasures>> clusterDvMeans;
  StageCounts counts;
};

struct ClusterSummary {
  std::vector<ClusterGroupSummary> groups;
};

// One row per measure over non-absent values. Throws InsufficientDataError
// naming the first measure with fewer than two defined values.
DescriptiveStatsTable descriptive_stats(const FeatureTable& features);

// Pearson over pairwise-complete observations; undefined entries are marked,
// not fabricated.
CorrelationMatrix correlation_matrix(const FeatureTable& features);

// Per-behavior counts (overall and per vehicle class), centroids in original
// DV units, per-cluster DV means, and the exclusion accounting.
ClusterGroupSummary cluster_summary(const GroupClustering& clustering,
                                    const FeatureTable& features,
                                    const StageCounts& counts);

// --- emission ---------------------------------------------------------------

// Fixed header `measure,count,mean,std,min,p25,p50,p75,max`.
void write_stats_csv(const std::filesystem::path& path,
                     const DescriptiveStatsTable& table);
DescriptiveStatsTable read_stats_csv(const std::filesystem::path& path);

// Square matrix with measure row labels; NA for undefined entries.
void write_correlation_csv(const std::filesystem::path& path,
                           const CorrelationMatrix& matrix);

// Long-format plot-ready values: row,col,value (defined entries only).
void write_correlation_plotdata(const std::filesystem::path& path,
                                const CorrelationMatrix& matrix);

// group,class,behavior,count long-format table; class "all" rows hold the
// overall behavior counts.
void write_behavior_counts_csv(const std::filesystem::path& path,
                               const ClusterSummary& summary);

// group,cluster,behavior,DV1..DV10 in original units.
void write_centroids_csv(const std::filesystem::path& path,
                         const ClusterSummary& summary);

// group,cluster,behavior,count,DV1..DV10 per-cluster feature means.
void write_cluster_means_csv(const std::filesystem::path& path,
                             const ClusterSummary& summary);

// Per-point DV1/DV2 scatter: group,recordingId,trackId,cluster,behavior,DV1,DV2.
void write_scatter_plotdata(const std::filesystem::path& path,
                            const FeatureTable& features,
                            std::span<const GroupClustering> groups);

// Two-column `k,wcss` elbow curve.
void write_elbow_csv(const std::filesystem::path& path, const ElbowResult& elbow);

}  // namespace drivol
