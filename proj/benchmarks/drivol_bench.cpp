#include <benchmark/benchmark.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "drivol/clustering.hpp"
#include "drivol/csv.hpp"
#include "drivol/kinematics.hpp"
#include "drivol/stats.hpp"
#include "drivol/trajectory_io.hpp"
#include "drivol/volatility.hpp"

namespace {

// A tracks CSV with `tracks` tracks of `frames` rows each, rounD column set.
std::filesystem::path synthetic_tracks_csv(std::size_t tracks, std::size_t frames) {
  static std::filesystem::path cached;
  static std::size_t cachedRows = 0;
  if (!cached.empty() && cachedRows == tracks * frames) {
    return cached;
  }
  const auto path = std::filesystem::temp_directory_path() /
                    ("drivol_bench_" + std::to_string(tracks * frames) + ".csv");
  drivol::SplitMix64 rng(7);
  std::string buf;
  buf.reserve(tracks * frames * 96);
  buf += "recordingId,trackId,frame,trackLifetime,xCenter,yCenter,heading,width,"
         "length,xVelocity,yVelocity,xAcceleration,yAcceleration,lonVelocity\n";
  for (std::size_t t = 0; t < tracks; ++t) {
    for (std::size_t f = 0; f < frames; ++f) {
      drivol::csv::append_int(buf, 0);
      buf += ',';
      drivol::csv::append_int(buf, static_cast<std::int64_t>(t));
      buf += ',';
      drivol::csv::append_int(buf, static_cast<std::int64_t>(f));
      buf += ',';
      drivol::csv::append_int(buf, static_cast<std::int64_t>(f));
      for (int i = 0; i < 10; ++i) {
        buf += ',';
        drivol::csv::append_double(buf, rng.next_double() * 10.0 + 0.5);
      }
      buf += '\n';
    }
  }
  drivol::csv::write_file(path, buf);
  cached = path;
  cachedRows = tracks * frames;
  return cached;
}

void BM_ParseTracks(benchmark::State& state) {
  const std::size_t tracks = static_cast<std::size_t>(state.range(0));
  const std::size_t frames = 500;
  const auto path = synthetic_tracks_csv(tracks, frames);
  for (auto _ : state) {
    auto parsed = drivol::parse_tracks(path);
    benchmark::DoNotOptimize(parsed.groups.size());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * tracks * frames));
}
BENCHMARK(BM_ParseTracks)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Volatility(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  drivol::SplitMix64 rng(11);
  drivol::KinematicSeries series;
  series.speed.resize(n);
  series.lonAccel.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    series.speed[i] = rng.next_double() * 12.0 + 1.0;
    series.lonAccel[i] = rng.next_double() * 4.0 - 2.0;
  }
  auto [accel, decel] = drivol::partition_accel(series.lonAccel);
  series.accel = std::move(accel);
  series.decel = std::move(decel);
  for (auto _ : state) {
    auto fv = drivol::compute_volatility(series);
    benchmark::DoNotOptimize(fv.dv[0]);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_Volatility)->Arg(500)->Arg(5000);

void BM_KMeans(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  drivol::SplitMix64 rng(13);
  drivol::Matrix points(n, drivol::kNumMeasures);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < drivol::kNumMeasures; ++j) {
      points(i, j) = rng.next_double() * 6.0;
    }
  }
  drivol::KMeansOptions opts;
  opts.restarts = 5;
  for (auto _ : state) {
    auto model = drivol::kmeans(points, opts);
    benchmark::DoNotOptimize(model.wcss);
  }
}
BENCHMARK(BM_KMeans)->Arg(500)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_QuantileCoeffVar(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  drivol::SplitMix64 rng(17);
  std::vector<double> x(n);
  for (auto& v : x) {
    v = rng.next_double() * 9.0 + 1.0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(drivol::stats::quantile_coeff_var(x));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_QuantileCoeffVar)->Arg(500)->Arg(50000);

}  // namespace

BENCHMARK_MAIN();
