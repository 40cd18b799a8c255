#pragma once

// Parsing, validation and joining of rounD-style trajectory recordings:
// a tracks file (one row per road user per frame) and a tracksMeta file
// (one row per road user). Column binding is by header name, so files with
// reordered or additional columns parse unchanged.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drivol {

enum class ErrorPolicy {
  // Skip malformed rows, count them, surface counts in the ingestion report.
  lenient,
  // Any malformed row or join anomaly aborts parsing.
  strict,
};

enum class VehicleClass : std::uint8_t {
  pedestrian,
  bicycle,
  car,
  truck,
  bus,
  van,
  motorcycle,
  trailer,
  other,
};

// Case-insensitive; unrecognized names map to VehicleClass::other.
VehicleClass vehicle_class_from_string(std::string_view name);
std::string_view to_string(VehicleClass c);

struct TrackKey {
  std::int32_t recordingId = 0;
  std::int32_t trackId = 0;

  auto operator<=>(const TrackKey&) const = default;
};

// One per-frame kinematic sample of one road user.
struct TrackRecord {
  std::int32_t recordingId = 0;
  std::int32_t trackId = 0;
  std::int64_t frame = 0;
  std::int64_t trackLifetime = 0;
  double xCenter = 0;
  double yCenter = 0;
  double heading = 0;  // degrees
  double width = 0;
  double length = 0;
  double xVelocity = 0;
  double yVelocity = 0;
  double xAcceleration = 0;
  double yAcceleration = 0;
  double lonVelocity = 0;
  // Extended columns present in newer dataset versions.
  std::optional<double> latVelocity;
  std::optional<double> lonAcceleration;
  std::optional<double> latAcceleration;
  // Values of unknown extra columns, parallel to TracksParseResult::extraColumns.
  std::vector<std::string> extras;

  TrackKey key() const { return {recordingId, trackId}; }
};

// Per-track metadata row.
struct TrackMeta {
  std::int32_t recordingId = 0;
  std::int32_t trackId = 0;
  std::int64_t initialFrame = 0;
  std::int64_t finalFrame = 0;
  std::int64_t numFrames = 0;
  double width = 0;
  double length = 0;
  VehicleClass cls = VehicleClass::other;
  // Canonical class name; the verbatim input string for VehicleClass::other.
  std::string className;

  TrackKey key() const { return {recordingId, trackId}; }
};

struct TrackWarning {
  enum class Kind { frameGap, duplicateFrame, countMismatch };
  Kind kind;
  std::string detail;
};

std::string_view to_string(TrackWarning::Kind k);

struct Track {
  TrackMeta meta;
  std::vector<TrackRecord> records;  // sorted by frame
  std::vector<TrackWarning> warnings;

  TrackKey key() const { return meta.key(); }
};

struct TrackGroup {
  TrackKey key;
  std::vector<TrackRecord> records;  // sorted by frame
};

struct ParseStats {
  std::size_t rowsRead = 0;
  std::size_t rowsSkipped = 0;
  // First few skip diagnostics, for the report (capped).
  std::vector<std::string> skipSamples;
};

struct TracksParseResult {
  std::vector<TrackGroup> groups;  // sorted by key
  // Names of unknown columns, in file order; every record's `extras`
  // holds the raw text of these columns.
  std::vector<std::string> extraColumns;
  bool hasLatVelocity = false;
  bool hasLonAcceleration = false;
  bool hasLatAcceleration = false;
  ParseStats stats;
};

struct MetaParseResult {
  std::vector<TrackMeta> metas;  // file order
  ParseStats stats;
};

// Allowed-class filter. Matches canonical names case-insensitively and the
// verbatim string of `other` classes, so `--classes scooter` works.
class ClassSet {
 public:
  static ClassSet default_set();  // car, truck, bus
  static ClassSet all();
  static ClassSet none();
  // Comma-separated names; the single token "all" admits every class.
  static ClassSet parse(std::string_view list);

  bool contains(const TrackMeta& meta) const;
  bool contains(std::string_view className) const;
  bool matches_all() const noexcept { return all_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  bool all_ = false;
  std::vector<std::string> names_;  // lowercase
};

struct JoinResult {
  std::vector<Track> tracks;  // sorted by key
  std::size_t orphanRecordGroups = 0;  // record groups without a meta row
  std::size_t orphanMetas = 0;         // meta rows without records
  std::size_t duplicateMetas = 0;      // repeated (recordingId, trackId) in meta
  std::size_t frameGapWarnings = 0;
  std::size_t duplicateFrameWarnings = 0;
  std::size_t countMismatchWarnings = 0;

  std::size_t warning_total() const {
    return frameGapWarnings + duplicateFrameWarnings + countMismatchWarnings;
  }
};

// --- operations ------------------------------------------------------------

// Parses a tracks file. Requires the 14 canonical columns by name
// (order-insensitive); known extended columns become typed optionals and
// unknown columns are preserved verbatim. Throws MissingFileError /
// MissingColumnError always; MalformedRowError only under `strict`.
TracksParseResult parse_tracks(const std::filesystem::path& path,
                               ErrorPolicy policy = ErrorPolicy::lenient);

// Parses a tracksMeta file. A leading unnamed or "index" column is ignored.
MetaParseResult parse_track_meta(const std::filesystem::path& path,
                                 ErrorPolicy policy = ErrorPolicy::lenient);

// Keeps metas whose class is in `allowed`, preserving order.
std::vector<TrackMeta> filter_by_class(std::span<const TrackMeta> metas,
                                       const ClassSet& allowed);

// Inner join of record groups with metas on (recordingId, trackId).
// Orphans on either side are counted, not emitted. Frame gaps, duplicate
// frames and record/meta count mismatches become per-track warnings;
// `strict` promotes any anomaly to an Error.
JoinResult join_tracks(std::vector<TrackGroup> groups,
                       std::span<const TrackMeta> metas,
                       ErrorPolicy policy = ErrorPolicy::lenient);

// Writes groups back to CSV (canonical columns, then extended columns and
// extras when present). Numbers use shortest round-trip formatting, so
// parse -> write -> parse is value-exact.
void write_tracks_csv(const std::filesystem::path& path,
                      const TracksParseResult& parsed);

}  // namespace drivol
