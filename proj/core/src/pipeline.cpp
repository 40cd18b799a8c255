#include "drivol/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "drivol/csv.hpp"
#include "drivol/errors.hpp"
#include "drivol/kinematics.hpp"
#include "drivol/parallel.hpp"
#include "drivol/track_store.hpp"
#include "drivol/version.hpp"
#include "drivol/volatility.hpp"

namespace drivol {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view policy_name(ErrorPolicy p) {
  return p == ErrorPolicy::strict ? "strict" : "lenient";
}

ordered_json config_json(const PipelineConfig& c) {
  ordered_json j;
  j["tracks"] = c.tracksPath.string();
  j["meta"] = c.metaPath.string();
  j["classes"] = c.classes;
  j["minFrames"] = c.minSamples;
  j["frameRate"] = c.frameRate;
  j["k"] = c.k;
  j["seed"] = c.seed;
  j["restarts"] = c.restarts;
  j["maxIter"] = c.maxIter;
  j["tol"] = c.tol;
  j["standardize"] = c.standardize;
  j["groupByClass"] = c.groupByClass;
  j["errorPolicy"] = std::string(policy_name(c.errorPolicy));
  j["out"] = c.outDir.string();
  j["formats"] = c.formats;
  j["kMin"] = c.kMin;
  j["kMax"] = c.kMax;
  return j;
}

// Common frame of every JSON document: schema version, tool identity and the
// full effective config, so any output is self-describing and reproducible.
ordered_json document_base(const PipelineConfig& c) {
  ordered_json j;
  j["schemaVersion"] = kSchemaVersion;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["config"] = config_json(c);
  return j;
}

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
  csv::write_file(path, doc.dump(2) + "\n");
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw MissingFileError(path.string());
  }
  return nlohmann::json::parse(in);
}

ordered_json parse_stats_json(const ParseStats& stats) {
  ordered_json j;
  j["rowsRead"] = stats.rowsRead;
  j["rowsSkipped"] = stats.rowsSkipped;
  j["skipSamples"] = stats.skipSamples;
  return j;
}

Matrix matrix_from_rows(const FeatureTable& features,
                        const std::vector<std::size_t>& rows) {
  Matrix m(rows.size(), kNumMeasures);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const FeatureVector& fv = features.rows[rows[i]];
    for (std::size_t j = 0; j < kNumMeasures; ++j) {
      m(i, j) = *fv.dv[j];
    }
  }
  return m;
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (double v : m.row(r)) {
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows > 0 ? j.at(0).size() : 0;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = j.at(r).at(c).get<double>();
    }
  }
  return m;
}

// Row groups to cluster: pooled under "all", or one per vehicle class.
// Only rows with all ten measures present participate.
std::vector<std::pair<std::string, std::vector<std::size_t>>> cluster_groups(
    const FeatureTable& features, bool groupByClass) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  if (!groupByClass) {
    groups.emplace_back("all", features.complete_rows());
    return groups;
  }
  std::map<std::string, std::vector<std::size_t>> byClass;
  for (std::size_t i = 0; i < features.rows.size(); ++i) {
    if (features.rows[i].complete()) {
      byClass[features.rows[i].className].push_back(i);
    }
  }
  for (auto& [name, rows] : byClass) {
    groups.emplace_back(name, std::move(rows));
  }
  return groups;
}

GroupClustering fit_group(const FeatureTable& features, std::string group,
                          std::vector<std::size_t> usedRows,
                          const PipelineConfig& config) {
  Matrix values = matrix_from_rows(features, usedRows);
  StandardScaler scaler = StandardScaler::identity(kNumMeasures);
  bool standardized = false;
  if (config.standardize) {
    auto [points, fitted] = standardize(values);
    values = std::move(points);
    scaler = std::move(fitted);
    standardized = true;
  }
  KMeansOptions opts;
  opts.k = config.k;
  opts.seed = config.seed;
  opts.restarts = config.restarts;
  opts.maxIter = config.maxIter;
  opts.tol = config.tol;

  GroupClustering clustering;
  clustering.group = std::move(group);
  clustering.model = kmeans(values, opts);
  clustering.model.scaler = std::move(scaler);
  clustering.model.standardized = standardized;
  clustering.labeling = assign_behavior_labels(clustering.model);
  clustering.usedRows = std::move(usedRows);
  return clustering;
}

ordered_json model_json(const GroupClustering& clustering,
                        const PipelineConfig& config) {
  const ClusterModel& model = clustering.model;
  ordered_json doc = document_base(config);
  doc["group"] = clustering.group;
  doc["k"] = model.k;
  doc["seed"] = model.seed;
  doc["restarts"] = model.restarts;
  doc["maxIter"] = model.maxIter;
  doc["tol"] = model.tol;
  doc["standardized"] = model.standardized;
  doc["scaler"] = {{"mean", model.scaler.mean}, {"std", model.scaler.std}};
  doc["measures"] = measure_names();

  ordered_json original = ordered_json::array();
  for (std::size_t c = 0; c < model.k; ++c) {
    original.push_back(model.centroid_original(c));
  }
  doc["centroids"] = {{"fitted", matrix_json(model.centroids)},
                      {"original", std::move(original)}};

  doc["wcss"] = model.wcss;
  doc["iterations"] = model.iterations;
  doc["converged"] = model.converged;
  doc["bestRestart"] = model.bestRestart;
  doc["labels"] = clustering.labeling.labels;

  std::vector<std::size_t> sizes(model.k, 0);
  for (std::size_t a : model.assignments) {
    ++sizes[a];
  }
  doc["clusterSizes"] = sizes;
  doc["rows"] = clustering.usedRows;
  doc["assignments"] = model.assignments;
  return doc;
}

GroupClustering load_model(const std::filesystem::path& path,
                           const FeatureTable& features) {
  const nlohmann::json j = load_json(path);
  GroupClustering clustering;
  clustering.group = j.at("group").get<std::string>();

  ClusterModel& model = clustering.model;
  model.k = j.at("k").get<std::size_t>();
  model.seed = j.at("seed").get<std::uint64_t>();
  model.restarts = j.at("restarts").get<std::size_t>();
  model.maxIter = j.at("maxIter").get<std::size_t>();
  model.tol = j.at("tol").get<double>();
  model.standardized = j.at("standardized").get<bool>();
  model.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
  model.scaler.std = j.at("scaler").at("std").get<std::vector<double>>();
  model.centroids = matrix_from_json(j.at("centroids").at("fitted"));
  model.wcss = j.at("wcss").get<double>();
  model.iterations = j.at("iterations").get<std::size_t>();
  model.converged = j.at("converged").get<bool>();
  model.bestRestart = j.at("bestRestart").get<std::size_t>();
  model.assignments = j.at("assignments").get<std::vector<std::size_t>>();

  clustering.labeling.labels = j.at("labels").get<std::vector<std::string>>();
  clustering.labeling.triadic = model.k == 3;
  clustering.usedRows = j.at("rows").get<std::vector<std::size_t>>();

  if (clustering.usedRows.size() != model.assignments.size()) {
    throw Error(path.string() + ": rows and assignments differ in length");
  }
  for (std::size_t row : clustering.usedRows) {
    if (row >= features.rows.size()) {
      throw Error(path.string() + ": row index " + std::to_string(row) +
                  " outside the features table");
    }
  }
  return clustering;
}

StageCounts load_stage_counts(const OutPaths& paths, const FeatureTable& features) {
  StageCounts counts;
  if (std::filesystem::exists(paths.features_report())) {
    const nlohmann::json j = load_json(paths.features_report());
    const auto& c = j.at("counts");
    counts.retainedTracks = c.at("retainedTracks").get<std::size_t>();
    counts.featureRows = c.at("featureRows").get<std::size_t>();
    counts.excludedShort = c.at("excludedShort").get<std::size_t>();
    counts.incompleteRows = c.at("incompleteRows").get<std::size_t>();
    return counts;
  }
  // Features file alone: the short-track exclusions are unknown.
  counts.featureRows = features.rows.size();
  counts.retainedTracks = counts.featureRows;
  counts.incompleteRows =
      counts.featureRows - features.complete_rows().size();
  return counts;
}

ordered_json summary_group_json(const ClusterGroupSummary& g) {
  ordered_json j;
  j["group"] = g.group;
  j["k"] = g.k;
  j["labels"] = g.labels;
  j["clusterCounts"] = g.clusterCounts;
  ordered_json perClass = ordered_json::object();
  for (const auto& [className, perCluster] : g.perClassCounts) {
    perClass[className] = perCluster;
  }
  j["perClassCounts"] = std::move(perClass);
  j["centroids"] = g.centroidsOriginal;
  ordered_json means = ordered_json::array();
  for (const auto& clusterMeans : g.clusterDvMeans) {
    ordered_json row = ordered_json::array();
    for (const auto& v : clusterMeans) {
      if (v) {
        row.push_back(*v);
      } else {
        row.push_back(nullptr);
      }
    }
    means.push_back(std::move(row));
  }
  j["dvMeans"] = std::move(means);
  j["counts"] = {{"retainedTracks", g.counts.retainedTracks},
                 {"featureRows", g.counts.featureRows},
                 {"excludedShort", g.counts.excludedShort},
                 {"incompleteRows", g.counts.incompleteRows},
                 {"clustered", g.counts.clustered}};
  return j;
}

}  // namespace

bool PipelineConfig::wants_format(std::string_view f) const {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

// --- ingest ------------------------------------------------------------------

IngestOutcome cmd_ingest(const PipelineConfig& config) {
  const OutPaths paths{config.outDir};
  std::filesystem::create_directories(config.outDir);

  TracksParseResult parsed = parse_tracks(config.tracksPath, config.errorPolicy);
  MetaParseResult metaParsed = parse_track_meta(config.metaPath, config.errorPolicy);

  const ClassSet allowed = ClassSet::parse(config.classes);
  std::vector<TrackMeta> retainedMetas;
  std::map<std::string, std::size_t> filteredOutByClass;
  std::set<TrackKey> filteredKeys;
  retainedMetas.reserve(metaParsed.metas.size());
  for (const TrackMeta& meta : metaParsed.metas) {
    if (allowed.contains(meta)) {
      retainedMetas.push_back(meta);
    } else {
      ++filteredOutByClass[meta.className];
      filteredKeys.insert(meta.key());
    }
  }

  // Drop record groups of class-filtered tracks before the join, so join
  // anomaly counts reflect genuinely unmatched data only.
  std::vector<TrackGroup> groups;
  groups.reserve(parsed.groups.size());
  std::size_t filteredRecordGroups = 0;
  for (TrackGroup& group : parsed.groups) {
    if (filteredKeys.contains(group.key)) {
      ++filteredRecordGroups;
    } else {
      groups.push_back(std::move(group));
    }
  }
  parsed.groups.clear();
  parsed.groups.shrink_to_fit();

  JoinResult joined = join_tracks(std::move(groups), retainedMetas, config.errorPolicy);

  TrackStoreWriter writer(paths.store());
  std::map<std::string, std::size_t> storedByClass;
  for (const Track& track : joined.tracks) {
    writer.append(stored_from_track(track, parsed.hasLonAcceleration));
    ++storedByClass[track.meta.className];
  }
  writer.finish();

  ordered_json doc = document_base(config);
  doc["tracksFile"] = parse_stats_json(parsed.stats);
  doc["metaFile"] = parse_stats_json(metaParsed.stats);
  doc["columns"] = {{"extra", parsed.extraColumns},
                    {"hasLatVelocity", parsed.hasLatVelocity},
                    {"hasLonAcceleration", parsed.hasLonAcceleration},
                    {"hasLatAcceleration", parsed.hasLatAcceleration}};
  ordered_json filteredByClass = ordered_json::object();
  for (const auto& [name, count] : filteredOutByClass) {
    filteredByClass[name] = count;
  }
  doc["classFilter"] = {{"allowed", allowed.matches_all()
                                        ? std::vector<std::string>{"all"}
                                        : allowed.names()},
                        {"filteredOutTracks", filteredRecordGroups},
                        {"filteredOutByClass", std::move(filteredByClass)}};
  doc["join"] = {{"orphanRecordGroups", joined.orphanRecordGroups},
                 {"orphanMetas", joined.orphanMetas},
                 {"duplicateMetas", joined.duplicateMetas},
                 {"frameGapWarnings", joined.frameGapWarnings},
                 {"duplicateFrameWarnings", joined.duplicateFrameWarnings},
                 {"countMismatchWarnings", joined.countMismatchWarnings}};
  ordered_json byClass = ordered_json::object();
  for (const auto& [name, count] : storedByClass) {
    byClass[name] = count;
  }
  doc["store"] = {{"tracks", writer.tracks_written()},
                  {"rows", writer.rows_written()},
                  {"byClass", std::move(byClass)}};
  write_json(paths.ingest_report(), doc);

  IngestOutcome outcome;
  outcome.tracksStored = writer.tracks_written();
  outcome.rowsStored = writer.rows_written();
  outcome.rowsSkipped = parsed.stats.rowsSkipped + metaParsed.stats.rowsSkipped;
  return outcome;
}

// --- features ------------------------------------------------------------------

FeaturesOutcome cmd_features(const PipelineConfig& config) {
  const OutPaths paths{config.outDir};
  std::filesystem::create_directories(config.outDir);

  std::vector<StoredTrack> tracks;
  {
    TrackStoreReader reader(paths.store());
    tracks.reserve(reader.track_count());
    while (auto track = reader.next()) {
      tracks.push_back(std::move(*track));
    }
  }

  const std::size_t minSamples = std::max<std::size_t>(config.minSamples, 1);

  struct Slot {
    std::optional<FeatureVector> feature;
    bool excluded = false;
    std::string error;
  };
  std::vector<Slot> slots(tracks.size());

  parallel_for(tracks.size(), [&](std::size_t i) {
    const StoredTrack& t = tracks[i];
    try {
      const KinematicSeries series = derive_kinematics_from_columns(
          t.key, t.xVelocity, t.yVelocity, t.xAcceleration, t.yAcceleration,
          t.heading, t.lonAcceleration, config.frameRate);
      FeatureVector fv = compute_volatility(series, minSamples);
      fv.cls = t.cls;
      fv.className = t.className;
      slots[i].feature = std::move(fv);
    } catch (const SeriesTooShortError&) {
      slots[i].excluded = true;
    } catch (const std::exception& e) {
      slots[i].error = e.what();
    }
  });

  FeaturesOutcome outcome;
  std::vector<FeatureVector> rows;
  rows.reserve(tracks.size());
  std::map<std::string, std::size_t> flagCounts;
  for (Slot& slot : slots) {
    if (slot.excluded) {
      ++outcome.excludedShort;
      continue;
    }
    if (!slot.error.empty()) {
      throw Error(slot.error);
    }
    FeatureVector& fv = *slot.feature;
    if (!fv.complete()) {
      ++outcome.incompleteRows;
    }
    if (fv.has_flag(FeatureFlag::accelPartEmpty)) ++flagCounts["accelPartEmpty"];
    if (fv.has_flag(FeatureFlag::decelPartEmpty)) ++flagCounts["decelPartEmpty"];
    if (fv.has_flag(FeatureFlag::shortSeries)) ++flagCounts["shortSeries"];
    if (fv.has_flag(FeatureFlag::zeroMeanSpeed)) ++flagCounts["zeroMeanSpeed"];
    rows.push_back(std::move(fv));
  }
  outcome.featureRows = rows.size();
  write_features_csv(paths.features_csv(), rows);

  ordered_json doc = document_base(config);
  doc["counts"] = {{"retainedTracks", tracks.size()},
                   {"featureRows", outcome.featureRows},
                   {"excludedShort", outcome.excludedShort},
                   {"incompleteRows", outcome.incompleteRows}};
  ordered_json flags = ordered_json::object();
  for (const auto& [name, count] : flagCounts) {
    flags[name] = count;
  }
  doc["flags"] = std::move(flags);
  write_json(paths.features_report(), doc);
  return outcome;
}

// --- cluster ------------------------------------------------------------------

ClusterOutcome cmd_cluster(const PipelineConfig& config) {
  const OutPaths paths{config.outDir};
  std::filesystem::create_directories(config.outDir);
  const FeatureTable features = read_features_csv(paths.features_csv());

  ClusterOutcome outcome;
  for (auto& [name, rows] : cluster_groups(features, config.groupByClass)) {
    if (rows.size() < config.k) {
      if (!config.groupByClass) {
        throw TooFewPointsError(rows.size(), config.k);
      }
      outcome.skippedGroups.push_back(name);
      continue;
    }
    const GroupClustering clustering =
        fit_group(features, name, std::move(rows), config);
    write_json(paths.model_json(name), model_json(clustering, config));
    outcome.groups.push_back(name);
    outcome.wcss.push_back(clustering.model.wcss);
  }
  if (outcome.groups.empty()) {
    throw TooFewPointsError(0, config.k);
  }
  return outcome;
}

// --- elbow ------------------------------------------------------------------

ElbowResult cmd_elbow(const PipelineConfig& config) {
  if (config.kMin < 1 || config.kMin > config.kMax) {
    throw Error("invalid k range: kMin=" + std::to_string(config.kMin) +
                " kMax=" + std::to_string(config.kMax));
  }
  const OutPaths paths{config.outDir};
  std::filesystem::create_directories(config.outDir);
  const FeatureTable features = read_features_csv(paths.features_csv());

  Matrix values = matrix_from_rows(features, features.complete_rows());
  if (config.standardize) {
    values = standardize(values).first;
  }
  KMeansOptions opts;
  opts.seed = config.seed;
  opts.restarts = config.restarts;
  opts.maxIter = config.maxIter;
  opts.tol = config.tol;
  const ElbowResult result = elbow_curve(values, config.kMin, config.kMax, opts);

  write_elbow_csv(paths.elbow_curve_csv(), result);

  ordered_json doc = document_base(config);
  ordered_json points = ordered_json::array();
  for (const ElbowPoint& p : result.points) {
    points.push_back({{"k", p.k}, {"wcss", p.wcss}});
  }
  doc["points"] = std::move(points);
  if (result.knee) {
    doc["knee"] = *result.knee;
  } else {
    doc["knee"] = nullptr;
  }
  write_json(paths.elbow_report(), doc);
  return result;
}

// --- report ------------------------------------------------------------------

ReportOutcome cmd_report(const PipelineConfig& config) {
  const OutPaths paths{config.outDir};
  std::filesystem::create_directories(config.outDir);
  const FeatureTable features = read_features_csv(paths.features_csv());

  const DescriptiveStatsTable statsTable = descriptive_stats(features);
  const CorrelationMatrix correlation = correlation_matrix(features);
  const StageCounts baseCounts = load_stage_counts(paths, features);

  // Models are optional: summaries cover whichever fitted groups exist.
  std::vector<GroupClustering> clusterings;
  if (config.groupByClass) {
    std::set<std::string> classes;
    for (const FeatureVector& fv : features.rows) {
      classes.insert(fv.className);
    }
    for (const std::string& name : classes) {
      if (std::filesystem::exists(paths.model_json(name))) {
        clusterings.push_back(load_model(paths.model_json(name), features));
      }
    }
  } else if (std::filesystem::exists(paths.model_json("all"))) {
    clusterings.push_back(load_model(paths.model_json("all"), features));
  }

  ClusterSummary summary;
  std::size_t clusteredTotal = 0;
  for (const GroupClustering& clustering : clusterings) {
    StageCounts counts = baseCounts;
    counts.clustered = clustering.usedRows.size();
    clusteredTotal += counts.clustered;
    summary.groups.push_back(cluster_summary(clustering, features, counts));
  }

  if (config.wants_format("json")) {
    ordered_json doc = document_base(config);
    doc["counts"] = {{"retainedTracks", baseCounts.retainedTracks},
                     {"featureRows", baseCounts.featureRows},
                     {"excludedShort", baseCounts.excludedShort},
                     {"incompleteRows", baseCounts.incompleteRows},
                     {"clustered", clusteredTotal}};
    ordered_json stats = ordered_json::array();
    for (const StatsRow& row : statsTable.rows) {
      stats.push_back({{"measure", row.measure},
                       {"count", row.count},
                       {"mean", row.mean},
                       {"std", row.std},
                       {"min", row.min},
                       {"p25", row.p25},
                       {"p50", row.p50},
                       {"p75", row.p75},
                       {"max", row.max}});
    }
    doc["stats"] = std::move(stats);

    ordered_json corrValues = ordered_json::array();
    const std::size_t d = correlation.measures.size();
    for (std::size_t i = 0; i < d; ++i) {
      ordered_json row = ordered_json::array();
      for (std::size_t j = 0; j < d; ++j) {
        const auto v = correlation.at(i, j);
        if (v) {
          row.push_back(*v);
        } else {
          row.push_back(nullptr);
        }
      }
      corrValues.push_back(std::move(row));
    }
    doc["correlation"] = {{"measures", correlation.measures},
                          {"values", std::move(corrValues)}};

    ordered_json groups = ordered_json::array();
    for (const ClusterGroupSummary& g : summary.groups) {
      groups.push_back(summary_group_json(g));
    }
    doc["clusters"] = {{"groups", std::move(groups)}};
    write_json(paths.report_json(), doc);
  }

  if (config.wants_format("csv")) {
    write_stats_csv(paths.stats_csv(), statsTable);
    write_correlation_csv(paths.correlation_csv(), correlation);
    if (!summary.groups.empty()) {
      write_behavior_counts_csv(paths.behavior_counts_csv(), summary);
      write_centroids_csv(paths.centroids_csv(), summary);
      write_cluster_means_csv(paths.cluster_means_csv(), summary);
    }
  }

  if (config.wants_format("plotdata")) {
    write_correlation_plotdata(paths.correlation_plotdata(), correlation);
    if (!clusterings.empty()) {
      write_scatter_plotdata(paths.scatter_plotdata(), features, clusterings);
    }
  }

  ReportOutcome outcome;
  outcome.clusterSummaryEmitted = !summary.groups.empty();
  return outcome;
}

// --- run-all ------------------------------------------------------------------

std::vector<StageTiming> cmd_run_all(const PipelineConfig& config) {
  std::vector<StageTiming> timings;
  const auto timed = [&timings](const char* stage, auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    timings.push_back({stage, elapsed.count()});
  };
  timed("ingest", [&] { cmd_ingest(config); });
  timed("features", [&] { cmd_features(config); });
  timed("cluster", [&] { cmd_cluster(config); });
  timed("report", [&] { cmd_report(config); });
  return timings;
}

}  // namespace drivol
