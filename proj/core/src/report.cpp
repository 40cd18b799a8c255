#include "drivol/report.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "drivol/csv.hpp"
#include "drivol/errors.hpp"
#include "drivol/stats.hpp"

namespace drivol {

DescriptiveStatsTable descriptive_stats(const FeatureTable& features) {
  DescriptiveStatsTable table;
  table.rows.reserve(kNumMeasures);
  for (std::size_t m = 0; m < kNumMeasures; ++m) {
    std::vector<double> values;
    values.reserve(features.rows.size());
    for (const FeatureVector& fv : features.rows) {
      if (fv.dv[m]) {
        values.push_back(*fv.dv[m]);
      }
    }
    if (values.size() < 2) {
      throw InsufficientDataError(measure_names()[m]);
    }
    std::sort(values.begin(), values.end());
    StatsRow row;
    row.measure = measure_names()[m];
    row.count = values.size();
    row.mean = stats::mean(values);
    row.std = stats::sample_std(values);
    row.min = values.front();
    row.p25 = stats::quantile_sorted(values, 0.25);
    row.p50 = stats::quantile_sorted(values, 0.50);
    row.p75 = stats::quantile_sorted(values, 0.75);
    row.max = values.back();
    table.rows.push_back(std::move(row));
  }
  return table;
}

CorrelationMatrix correlation_matrix(const FeatureTable& features) {
  CorrelationMatrix matrix;
  matrix.measures.assign(measure_names().begin(), measure_names().end());
  const std::size_t d = matrix.measures.size();
  matrix.values.assign(d * d, std::nullopt);

  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      std::vector<double> a;
      std::vector<double> b;
      for (const FeatureVector& fv : features.rows) {
        if (fv.dv[i] && fv.dv[j]) {
          a.push_back(*fv.dv[i]);
          b.push_back(*fv.dv[j]);
        }
      }
      const auto r = stats::pearson(a, b);
      matrix.values[i * d + j] = r;
      matrix.values[j * d + i] = r;
    }
  }
  return matrix;
}

ClusterGroupSummary cluster_summary(const GroupClustering& clustering,
                                    const FeatureTable& features,
                                    const StageCounts& counts) {
  const ClusterModel& model = clustering.model;
  ClusterGroupSummary summary;
  summary.group = clustering.group;
  summary.k = model.k;
  summary.labels = clustering.labeling.labels;
  summary.counts = counts;

  summary.clusterCounts.assign(model.k, 0);
  std::vector<std::array<double, kNumMeasures>> sums(
      model.k, std::array<double, kNumMeasures>{});
  std::vector<std::array<std::size_t, kNumMeasures>> sumCounts(
      model.k, std::array<std::size_t, kNumMeasures>{});

  for (std::size_t i = 0; i < clustering.usedRows.size(); ++i) {
    const std::size_t cluster = model.assignments[i];
    const FeatureVector& fv = features.rows[clustering.usedRows[i]];
    ++summary.clusterCounts[cluster];

    auto [it, inserted] =
        summary.perClassCounts.try_emplace(fv.className, model.k, 0);
    ++it->second[cluster];

    for (std::size_t m = 0; m < kNumMeasures; ++m) {
      if (fv.dv[m]) {
        sums[cluster][m] += *fv.dv[m];
        ++sumCounts[cluster][m];
      }
    }
  }

  summary.centroidsOriginal.reserve(model.k);
  summary.clusterDvMeans.resize(model.k);
  for (std::size_t c = 0; c < model.k; ++c) {
    summary.centroidsOriginal.push_back(model.centroid_original(c));
    for (std::size_t m = 0; m < kNumMeasures; ++m) {
      if (sumCounts[c][m] > 0) {
        summary.clusterDvMeans[c][m] =
            sums[c][m] / static_cast<double>(sumCounts[c][m]);
      }
    }
  }
  return summary;
}

// --- emission ---------------------------------------------------------------

void write_stats_csv(const std::filesystem::path& path,
                     const DescriptiveStatsTable& table) {
  std::string out = "measure,count,mean,std,min,p25,p50,p75,max\n";
  for (const StatsRow& row : table.rows) {
    out += row.measure;
    out += ',';
    csv::append_int(out, static_cast<std::int64_t>(row.count));
    for (double v : {row.mean, row.std, row.min, row.p25, row.p50, row.p75, row.max}) {
      out += ',';
      csv::append_double(out, v);
    }
    out += '\n';
  }
  csv::write_file(path, out);
}

DescriptiveStatsTable read_stats_csv(const std::filesystem::path& path) {
  csv::LineReader reader(path);
  const auto header = reader.next();
  if (!header.has_value() ||
      *header != "measure,count,mean,std,min,p25,p50,p75,max") {
    throw MalformedRowError(1, "unexpected stats header");
  }
  DescriptiveStatsTable table;
  std::vector<std::string_view> fields;
  while (auto line = reader.next()) {
    if (line->empty()) {
      continue;
    }
    csv::split_fields(*line, fields);
    if (fields.size() != 9) {
      throw MalformedRowError(reader.line_number(), "wrong field count");
    }
    StatsRow row;
    row.measure = std::string(fields[0]);
    const auto count = csv::parse_int(fields[1]);
    if (!count) {
      throw MalformedRowError(reader.line_number(), "bad count");
    }
    row.count = static_cast<std::size_t>(*count);
    double* slots[] = {&row.mean, &row.std, &row.min, &row.p25,
                       &row.p50,  &row.p75, &row.max};
    for (std::size_t i = 0; i < 7; ++i) {
      const auto v = csv::parse_double(fields[2 + i]);
      if (!v) {
        throw MalformedRowError(reader.line_number(), "bad numeric field");
      }
      *slots[i] = *v;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_correlation_csv(const std::filesystem::path& path,
                           const CorrelationMatrix& matrix) {
  const std::size_t d = matrix.measures.size();
  std::string out = "measure";
  for (const auto& name : matrix.measures) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t i = 0; i < d; ++i) {
    out += matrix.measures[i];
    for (std::size_t j = 0; j < d; ++j) {
      out += ',';
      const auto v = matrix.at(i, j);
      if (v) {
        csv::append_double(out, *v);
      } else {
        out += "NA";
      }
    }
    out += '\n';
  }
  csv::write_file(path, out);
}

void write_correlation_plotdata(const std::filesystem::path& path,
                                const CorrelationMatrix& matrix) {
  const std::size_t d = matrix.measures.size();
  std::string out = "row,col,value\n";
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto v = matrix.at(i, j);
      if (!v) {
        continue;
      }
      out += matrix.measures[i];
      out += ',';
      out += matrix.measures[j];
      out += ',';
      csv::append_double(out, *v);
      out += '\n';
    }
  }
  csv::write_file(path, out);
}

void write_behavior_counts_csv(const std::filesystem::path& path,
                               const ClusterSummary& summary) {
  std::string out = "group,class,behavior,count\n";
  for (const ClusterGroupSummary& g : summary.groups) {
    for (std::size_t c = 0; c < g.k; ++c) {
      out += g.group;
      out += ",all,";
      out += g.labels[c];
      out += ',';
      csv::append_int(out, static_cast<std::int64_t>(g.clusterCounts[c]));
      out += '\n';
    }
    for (const auto& [className, perCluster] : g.perClassCounts) {
      for (std::size_t c = 0; c < g.k; ++c) {
        out += g.group;
        out += ',';
        out += className;
        out += ',';
        out += g.labels[c];
        out += ',';
        csv::append_int(out, static_cast<std::int64_t>(perCluster[c]));
        out += '\n';
      }
    }
  }
  csv::write_file(path, out);
}

namespace {

void append_measure_header(std::string& out) {
  for (const auto& name : measure_names()) {
    out += ',';
    out += name;
  }
  out += '\n';
}

}  // namespace

void write_centroids_csv(const std::filesystem::path& path,
                         const ClusterSummary& summary) {
  std::string out = "group,cluster,behavior";
  append_measure_header(out);
  for (const ClusterGroupSummary& g : summary.groups) {
    for (std::size_t c = 0; c < g.k; ++c) {
      out += g.group;
      out += ',';
      csv::append_int(out, static_cast<std::int64_t>(c));
      out += ',';
      out += g.labels[c];
      for (double v : g.centroidsOriginal[c]) {
        out += ',';
        csv::append_double(out, v);
      }
      out += '\n';
    }
  }
  csv::write_file(path, out);
}

void write_cluster_means_csv(const std::filesystem::path& path,
                             const ClusterSummary& summary) {
  std::string out = "group,cluster,behavior,count";
  append_measure_header(out);
  for (const ClusterGroupSummary& g : summary.groups) {
    for (std::size_t c = 0; c < g.k; ++c) {
      out += g.group;
      out += ',';
      csv::append_int(out, static_cast<std::int64_t>(c));
      out += ',';
      out += g.labels[c];
      out += ',';
      csv::append_int(out, static_cast<std::int64_t>(g.clusterCounts[c]));
      for (const auto& v : g.clusterDvMeans[c]) {
        out += ',';
        if (v) {
          csv::append_double(out, *v);
        } else {
          out += "NA";
        }
      }
      out += '\n';
    }
  }
  csv::write_file(path, out);
}

void write_scatter_plotdata(const std::filesystem::path& path,
                            const FeatureTable& features,
                            std::span<const GroupClustering> groups) {
  std::string out = "group,recordingId,trackId,cluster,behavior,DV1,DV2\n";
  for (const GroupClustering& g : groups) {
    for (std::size_t i = 0; i < g.usedRows.size(); ++i) {
      const FeatureVector& fv = features.rows[g.usedRows[i]];
      const std::size_t cluster = g.model.assignments[i];
      out += g.group;
      out += ',';
      csv::append_int(out, fv.key.recordingId);
      out += ',';
      csv::append_int(out, fv.key.trackId);
      out += ',';
      csv::append_int(out, static_cast<std::int64_t>(cluster));
      out += ',';
      out += g.labeling.labels[cluster];
      out += ',';
      csv::append_double(out, fv.dv[0].value_or(0.0));
      out += ',';
      csv::append_double(out, fv.dv[1].value_or(0.0));
      out += '\n';
    }
  }
  csv::write_file(path, out);
}

void write_elbow_csv(const std::filesystem::path& path, const ElbowResult& elbow) {
  std::string out = "k,wcss\n";
  for (const ElbowPoint& p : elbow.points) {
    csv::append_int(out, static_cast<std::int64_t>(p.k));
    out += ',';
    csv::append_double(out, p.wcss);
    out += '\n';
  }
  csv::write_file(path, out);
}

}  // namespace drivol
