#pragma once

// The ten driving-volatility measures computed per track:
//   DV1  population std of speed
//   DV2  population std of signed longitudinal acceleration
//   DV3  coefficient of variation of speed
//   DV4  coefficient of variation of the positive acceleration partition
//   DV5  coefficient of variation of deceleration magnitudes
//   DV6  mean absolute deviation of speed
//   DV7  mean absolute deviation of signed longitudinal acceleration
//   DV8  quantile coefficient of variation of speed
//   DV9  quantile coefficient of variation of the acceleration partition
//   DV10 quantile coefficient of variation of the signed deceleration partition
// Undefined measures are absent, never zero-filled, and their cause is
// flagged.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drivol/kinematics.hpp"
#include "drivol/trajectory_io.hpp"

namespace drivol {

inline constexpr std::size_t kNumMeasures = 10;
inline constexpr std::size_t kDefaultMinSamples = 50;

// Measure names "DV1".."DV10" indexed 0..9.
const std::array<std::string, kNumMeasures>& measure_names();

enum class FeatureFlag : std::uint8_t {
  accelPartEmpty = 1 << 0,
  decelPartEmpty = 1 << 1,
  shortSeries = 1 << 2,
  zeroMeanSpeed = 1 << 3,
};

struct FeatureVector {
  TrackKey key;
  VehicleClass cls = VehicleClass::other;
  std::string className;
  std::array<std::optional<double>, kNumMeasures> dv;
  std::uint8_t flags = 0;

  bool has_flag(FeatureFlag f) const {
    return (flags & static_cast<std::uint8_t>(f)) != 0;
  }
  void set_flag(FeatureFlag f) { flags |= static_cast<std::uint8_t>(f); }
  bool complete() const {
    for (const auto& v : dv) {
      if (!v.has_value()) return false;
    }
    return true;
  }
};

// Computes DV1..DV10. Throws SeriesTooShortError when |speed| < minSamples;
// measures with degenerate inputs (empty partition, zero denominator) come
// back absent with the corresponding flag set.
FeatureVector compute_volatility(const KinematicSeries& series,
                                 std::size_t minSamples = kDefaultMinSamples);

struct FeatureTable {
  std::vector<FeatureVector> rows;

  // Row indices whose ten measures are all present.
  std::vector<std::size_t> complete_rows() const;
};

// Features file: header `recordingId,trackId,class,DV1,...,DV10`, `NA` for
// absent values.
void write_features_csv(const std::filesystem::path& path,
                        std::span<const FeatureVector> rows);
FeatureTable read_features_csv(const std::filesystem::path& path);

}  // namespace drivol
