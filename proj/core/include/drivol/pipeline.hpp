#pragma once

// Staged pipeline behind the CLI: ingest -> features -> cluster -> report,
// with on-disk intermediates so multi-million-row parsing is paid once.
// Every JSON document a stage emits embeds the effective config and the tool
// version; identical inputs and config produce byte-identical outputs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "drivol/report.hpp"
#include "drivol/trajectory_io.hpp"

namespace drivol {

struct PipelineConfig {
  std::filesystem::path tracksPath;
  std::filesystem::path metaPath;
  std::string classes = "car,truck,bus";
  std::size_t minSamples = 50;
  double frameRate = 25.0;  // Hz; used only for the jerk diagnostic
  std::size_t k = 3;
  std::uint64_t seed = 42;
  std::size_t restarts = 10;
  std::size_t maxIter = 300;
  double tol = 1e-6;
  bool standardize = true;
  bool groupByClass = false;
  ErrorPolicy errorPolicy = ErrorPolicy::lenient;
  std::filesystem::path outDir = "out";
  std::vector<std::string> formats{"json", "csv"};
  std::size_t kMin = 1;  // elbow range
  std::size_t kMax = 10;

  bool wants_format(std::string_view f) const;
};

// Output locations inside the configured directory.
struct OutPaths {
  std::filesystem::path dir;

  std::filesystem::path ingest_report() const { return dir / "ingest_report.json"; }
  std::filesystem::path store() const { return dir / "tracks.store"; }
  std::filesystem::path features_csv() const { return dir / "features.csv"; }
  std::filesystem::path features_report() const { return dir / "features_report.json"; }
  std::filesystem::path model_json(const std::string& group) const {
    return dir / (group == "all" ? std::string("model.json")
                                 : "model_" + group + ".json");
  }
  std::filesystem::path elbow_report() const { return dir / "elbow_report.json"; }
  std::filesystem::path elbow_curve_csv() const { return dir / "elbow_curve.csv"; }
  std::filesystem::path report_json() const { return dir / "report.json"; }
  std::filesystem::path stats_csv() const { return dir / "stats.csv"; }
  std::filesystem::path correlation_csv() const { return dir / "correlation.csv"; }
  std::filesystem::path correlation_plotdata() const {
    return dir / "correlation_heatmap.csv";
  }
  std::filesystem::path behavior_counts_csv() const {
    return dir / "behavior_counts.csv";
  }
  std::filesystem::path centroids_csv() const { return dir / "centroids.csv"; }
  std::filesystem::path cluster_means_csv() const { return dir / "cluster_dv_means.csv"; }
  std::filesystem::path scatter_plotdata() const { return dir / "cluster_scatter.csv"; }
};

struct IngestOutcome {
  std::size_t tracksStored = 0;
  std::size_t rowsStored = 0;
  std::size_t rowsSkipped = 0;
};

struct FeaturesOutcome {
  std::size_t featureRows = 0;
  std::size_t excludedShort = 0;
  std::size_t incompleteRows = 0;
};

struct ClusterOutcome {
  // One entry per fitted group ("all" when pooled).
  std::vector<std::string> groups;
  std::vector<double> wcss;
  std::vector<std::string> skippedGroups;  // groups with fewer than k rows
};

struct ReportOutcome {
  bool clusterSummaryEmitted = false;
};

// Stage entry points. All throw drivol::Error subclasses on fatal problems;
// the CLI maps those to exit code 2.
IngestOutcome cmd_ingest(const PipelineConfig& config);
FeaturesOutcome cmd_features(const PipelineConfig& config);
ClusterOutcome cmd_cluster(const PipelineConfig& config);
ElbowResult cmd_elbow(const PipelineConfig& config);
ReportOutcome cmd_report(const PipelineConfig& config);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

// ingest -> features -> cluster -> report; returns per-stage wall times.
std::vector<StageTiming> cmd_run_all(const PipelineConfig& config);

}  // namespace drivol
