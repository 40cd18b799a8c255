#pragma once

// Intermediate columnar store written by the ingest stage and consumed by
// the features stage. Binary, per-track column blocks, native-endian; an
// internal format, not an interchange one.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "drivol/trajectory_io.hpp"

namespace drivol {

struct StoredTrack {
  TrackKey key;
  VehicleClass cls = VehicleClass::other;
  std::string className;
  std::int64_t firstFrame = 0;
  std::vector<double> xVelocity;
  std::vector<double> yVelocity;
  std::vector<double> xAcceleration;
  std::vector<double> yAcceleration;
  std::vector<double> heading;
  std::optional<std::vector<double>> lonAcceleration;

  std::size_t size() const noexcept { return xVelocity.size(); }
};

class TrackStoreWriter {
 public:
  explicit TrackStoreWriter(const std::filesystem::path& path);
  ~TrackStoreWriter();
  TrackStoreWriter(const TrackStoreWriter&) = delete;
  TrackStoreWriter& operator=(const TrackStoreWriter&) = delete;

  void append(const StoredTrack& track);
  // Patches the header with the final track count. Must be called; the
  // destructor closes without finalizing.
  void finish();

  std::size_t tracks_written() const noexcept { return tracks_; }
  std::size_t rows_written() const noexcept { return rows_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t tracks_ = 0;
  std::size_t rows_ = 0;
};

class TrackStoreReader {
 public:
  explicit TrackStoreReader(const std::filesystem::path& path);
  ~TrackStoreReader();
  TrackStoreReader(const TrackStoreReader&) = delete;
  TrackStoreReader& operator=(const TrackStoreReader&) = delete;

  std::size_t track_count() const noexcept;
  // nullopt after the last track.
  std::optional<StoredTrack> next();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

StoredTrack stored_from_track(const Track& track, bool hasLonAcceleration);

}  // namespace drivol
