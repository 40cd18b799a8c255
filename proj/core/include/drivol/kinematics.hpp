#pragma once

// Per-track scalar kinematics derived from raw records: speed, signed
// longitudinal acceleration with its acceleration/deceleration partition,
// and an optional jerk diagnostic.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "drivol/trajectory_io.hpp"

namespace drivol {

struct KinematicSeries {
  TrackKey key;
  std::vector<double> speed;     // sqrt(xVelocity^2 + yVelocity^2), >= 0
  std::vector<double> lonAccel;  // signed, same length as speed
  std::vector<double> accel;     // lonAccel values > 0, in order
  std::vector<double> decel;     // lonAccel values < 0, in order
  std::size_t zeroAccelCount = 0;
  std::optional<std::vector<double>> jerk;  // |lonAccel| - 1 entries when present
  double frameRate = 25.0;
};

// speed_i = ||(xVelocity_i, yVelocity_i)||.
std::vector<double> derive_speed(const Track& track);
std::vector<double> speed_from_velocity(std::span<const double> xVelocity,
                                        std::span<const double> yVelocity);

// Uses the lonAcceleration column verbatim when the file carried it;
// otherwise projects (xAcceleration, yAcceleration) onto the heading.
std::vector<double> derive_lon_accel(const Track& track);
std::vector<double> lon_accel_from_columns(
    std::span<const double> xAcceleration, std::span<const double> yAcceleration,
    std::span<const double> headingDegrees,
    const std::optional<std::vector<double>>& lonAccelerationColumn);

// Splits into (values > 0, values < 0); exact zeros belong to neither.
std::pair<std::vector<double>, std::vector<double>> partition_accel(
    std::span<const double> lonAccel);

// Forward difference scaled by the frame rate. Throws SeriesTooShortError
// when |lonAccel| < 2.
std::vector<double> derive_jerk(std::span<const double> lonAccel, double frameRate);

// Bundles the above for one track. Jerk is a diagnostic and is only
// computed on request.
KinematicSeries derive_kinematics(const Track& track, double frameRate,
                                  bool withJerk = false);

// Same derivation from raw columns (the intermediate store path).
KinematicSeries derive_kinematics_from_columns(
    TrackKey key, std::span<const double> xVelocity,
    std::span<const double> yVelocity, std::span<const double> xAcceleration,
    std::span<const double> yAcceleration, std::span<const double> headingDegrees,
    const std::optional<std::vector<double>>& lonAccelerationColumn,
    double frameRate, bool withJerk = false);

}  // namespace drivol
