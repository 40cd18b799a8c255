#include "drivol/kinematics.hpp"

#include <cmath>
#include <numbers>

#include "drivol/errors.hpp"

namespace drivol {

std::vector<double> speed_from_velocity(std::span<const double> xVelocity,
                                        std::span<const double> yVelocity) {
  std::vector<double> speed(xVelocity.size());
  for (std::size_t i = 0; i < xVelocity.size(); ++i) {
    speed[i] = std::hypot(xVelocity[i], yVelocity[i]);
  }
  return speed;
}

std::vector<double> derive_speed(const Track& track) {
  std::vector<double> speed(track.records.size());
  for (std::size_t i = 0; i < track.records.size(); ++i) {
    speed[i] = std::hypot(track.records[i].xVelocity, track.records[i].yVelocity);
  }
  return speed;
}

std::vector<double> lon_accel_from_columns(
    std::span<const double> xAcceleration, std::span<const double> yAcceleration,
    std::span<const double> headingDegrees,
    const std::optional<std::vector<double>>& lonAccelerationColumn) {
  if (lonAccelerationColumn) {
    return *lonAccelerationColumn;
  }
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  std::vector<double> lon(xAcceleration.size());
  for (std::size_t i = 0; i < xAcceleration.size(); ++i) {
    const double rad = headingDegrees[i] * kDegToRad;
    lon[i] = xAcceleration[i] * std::cos(rad) + yAcceleration[i] * std::sin(rad);
  }
  return lon;
}

std::vector<double> derive_lon_accel(const Track& track) {
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  std::vector<double> lon(track.records.size());
  for (std::size_t i = 0; i < track.records.size(); ++i) {
    const TrackRecord& r = track.records[i];
    if (r.lonAcceleration) {
      lon[i] = *r.lonAcceleration;
    } else {
      const double rad = r.heading * kDegToRad;
      lon[i] = r.xAcceleration * std::cos(rad) + r.yAcceleration * std::sin(rad);
    }
  }
  return lon;
}

std::pair<std::vector<double>, std::vector<double>> partition_accel(
    std::span<const double> lonAccel) {
  std::vector<double> accel;
  std::vector<double> decel;
  for (double a : lonAccel) {
    if (a > 0.0) {
      accel.push_back(a);
    } else if (a < 0.0) {
      decel.push_back(a);
    }
  }
  return {std::move(accel), std::move(decel)};
}

std::vector<double> derive_jerk(std::span<const double> lonAccel, double frameRate) {
  if (lonAccel.size() < 2) {
    throw SeriesTooShortError(lonAccel.size(), 2);
  }
  std::vector<double> jerk(lonAccel.size() - 1);
  for (std::size_t i = 0; i + 1 < lonAccel.size(); ++i) {
    jerk[i] = (lonAccel[i + 1] - lonAccel[i]) * frameRate;
  }
  return jerk;
}

namespace {

KinematicSeries assemble(TrackKey key, std::vector<double> speed,
                         std::vector<double> lonAccel, double frameRate,
                         bool withJerk) {
  KinematicSeries series;
  series.key = key;
  series.frameRate = frameRate;
  series.speed = std::move(speed);
  series.lonAccel = std::move(lonAccel);
  auto [accel, decel] = partition_accel(series.lonAccel);
  series.accel = std::move(accel);
  series.decel = std::move(decel);
  series.zeroAccelCount =
      series.lonAccel.size() - series.accel.size() - series.decel.size();
  if (withJerk) {
    series.jerk = derive_jerk(series.lonAccel, frameRate);
  }
  return series;
}

}  // namespace

KinematicSeries derive_kinematics(const Track& track, double frameRate,
                                  bool withJerk) {
  return assemble(track.key(), derive_speed(track), derive_lon_accel(track),
                  frameRate, withJerk);
}

KinematicSeries derive_kinematics_from_columns(
    TrackKey key, std::span<const double> xVelocity,
    std::span<const double> yVelocity, std::span<const double> xAcceleration,
    std::span<const double> yAcceleration, std::span<const double> headingDegrees,
    const std::optional<std::vector<double>>& lonAccelerationColumn,
    double frameRate, bool withJerk) {
  return assemble(key, speed_from_velocity(xVelocity, yVelocity),
                  lon_accel_from_columns(xAcceleration, yAcceleration,
                                         headingDegrees, lonAccelerationColumn),
                  frameRate, withJerk);
}

}  // namespace drivol
