#include "drivol/volatility.hpp"

#include <string>
#include <utility>

#include "drivol/csv.hpp"
#include "drivol/errors.hpp"
#include "drivol/stats.hpp"

namespace drivol {

const std::array<std::string, kNumMeasures>& measure_names() {
  static const std::array<std::string, kNumMeasures> names = {
      "DV1", "DV2", "DV3", "DV4", "DV5", "DV6", "DV7", "DV8", "DV9", "DV10"};
  return names;
}

FeatureVector compute_volatility(const KinematicSeries& series,
                                 std::size_t minSamples) {
  if (series.speed.size() < minSamples) {
    throw SeriesTooShortError(series.speed.size(), minSamples);
  }
  FeatureVector fv;
  fv.key = series.key;

  const std::span<const double> speed{series.speed};
  const std::span<const double> lonAccel{series.lonAccel};
  const std::span<const double> accel{series.accel};
  const std::span<const double> decel{series.decel};

  fv.dv[0] = stats::pop_std(speed);
  fv.dv[1] = stats::pop_std(lonAccel);
  fv.dv[5] = stats::mean_abs_dev(speed);
  fv.dv[6] = stats::mean_abs_dev(lonAccel);

  // Zero mean speed (all samples exactly 0) voids the two ratio measures on
  // speed: CV divides by the mean, QCV by Q1 + Q3, and a nonnegative series
  // with zero mean is identically zero.
  try {
    fv.dv[2] = stats::coeff_var(speed);
  } catch (const ZeroMeanError&) {
    fv.set_flag(FeatureFlag::zeroMeanSpeed);
  }
  try {
    fv.dv[7] = stats::quantile_coeff_var(speed);
  } catch (const ZeroQuartileSumError&) {
    fv.set_flag(FeatureFlag::zeroMeanSpeed);
  }

  if (accel.empty()) {
    fv.set_flag(FeatureFlag::accelPartEmpty);
  } else {
    fv.dv[3] = stats::coeff_var(accel);
    fv.dv[8] = stats::quantile_coeff_var(accel);
  }

  if (decel.empty()) {
    fv.set_flag(FeatureFlag::decelPartEmpty);
  } else {
    // DV5 uses magnitudes; DV10 keeps the sign, so it is negative.
    std::vector<double> mag(decel.size());
    for (std::size_t i = 0; i < decel.size(); ++i) {
      mag[i] = -decel[i];
    }
    fv.dv[4] = stats::coeff_var(mag);
    fv.dv[9] = stats::quantile_coeff_var(decel);
  }

  return fv;
}

std::vector<std::size_t> FeatureTable::complete_rows() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].complete()) {
      idx.push_back(i);
    }
  }
  return idx;
}

void write_features_csv(const std::filesystem::path& path,
                        std::span<const FeatureVector> rows) {
  std::string out;
  out.reserve(rows.size() * 160 + 128);
  out += "recordingId,trackId,class";
  for (const auto& name : measure_names()) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (const FeatureVector& fv : rows) {
    csv::append_int(out, fv.key.recordingId);
    out += ',';
    csv::append_int(out, fv.key.trackId);
    out += ',';
    out += fv.className;
    for (const auto& v : fv.dv) {
      out += ',';
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

FeatureTable read_features_csv(const std::filesystem::path& path) {
  csv::LineReader reader(path);
  const auto header = reader.next();
  if (!header.has_value()) {
    throw MalformedRowError(1, "empty features file");
  }
  std::vector<std::string_view> cols;
  csv::split_fields(*header, cols);
  const std::size_t expected = 3 + kNumMeasures;
  if (cols.size() != expected || cols[0] != "recordingId" ||
      cols[1] != "trackId" || cols[2] != "class") {
    throw MalformedRowError(1, "unexpected features header");
  }
  for (std::size_t m = 0; m < kNumMeasures; ++m) {
    if (cols[3 + m] != measure_names()[m]) {
      throw MissingColumnError(measure_names()[m]);
    }
  }

  FeatureTable table;
  std::vector<std::string_view> fields;
  while (auto line = reader.next()) {
    if (line->empty()) {
      continue;
    }
    csv::split_fields(*line, fields);
    if (fields.size() != expected) {
      throw MalformedRowError(reader.line_number(), "wrong field count");
    }
    FeatureVector fv;
    const auto rid = csv::parse_int(fields[0]);
    const auto tid = csv::parse_int(fields[1]);
    if (!rid || !tid) {
      throw MalformedRowError(reader.line_number(), "bad track key");
    }
    fv.key.recordingId = static_cast<std::int32_t>(*rid);
    fv.key.trackId = static_cast<std::int32_t>(*tid);
    fv.className = std::string(fields[2]);
    fv.cls = vehicle_class_from_string(fv.className);
    for (std::size_t m = 0; m < kNumMeasures; ++m) {
      const std::string_view f = fields[3 + m];
      if (f == "NA") {
        continue;
      }
      const auto v = csv::parse_double(f);
      if (!v) {
        throw MalformedRowError(reader.line_number(),
                                "bad value in column " + measure_names()[m]);
      }
      fv.dv[m] = *v;
    }
    table.rows.push_back(std::move(fv));
  }
  return table;
}

}  // namespace drivol
