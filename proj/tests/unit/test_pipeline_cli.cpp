// End-to-end checks of the installed command-line surface: every case shells
// out to the real binary (path injected by the build) and inspects exit
// codes, streams and the files left behind.

#include <sys/wait.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "drivol/volatility.hpp"
#include "random_gen.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

namespace {

namespace fs = std::filesystem;

struct ToolRun {
  int exitCode = -1;
  std::string out;
  std::string err;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Runs the pipeline binary through the shell, capturing both streams.
ToolRun run_tool(const fs::path& scratch, const std::string& args,
                 const std::string& envPrefix = "") {
  static std::atomic<int> counter{0};
  const int id = counter.fetch_add(1);
  const fs::path outPath = scratch / ("stdout-" + std::to_string(id) + ".txt");
  const fs::path errPath = scratch / ("stderr-" + std::to_string(id) + ".txt");
  const std::string cmd = envPrefix + "\"" DRIVOL_TOOL_PATH "\" " + args +
                          " > \"" + outPath.string() + "\" 2> \"" +
                          errPath.string() + "\"";
  const int status = std::system(cmd.c_str());
  ToolRun result;
  if (WIFEXITED(status)) {
    result.exitCode = WEXITSTATUS(status);
  }
  result.out = read_text(outPath);
  result.err = read_text(errPath);
  return result;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

// Writes a tracks/meta pair of well-behaved random tracks.
struct Inputs {
  fs::path tracks;
  fs::path meta;
};

Inputs write_inputs(const testgen::TempDir& dir, std::size_t nCars,
                    std::size_t nTrucks, std::size_t frames,
                    std::uint64_t seed = 11) {
  testgen::Rng rng(seed);
  std::vector<synth::SeriesTrack> tracks;
  for (std::size_t i = 0; i < nCars; ++i) {
    tracks.push_back(
        synth::random_track(static_cast<std::int32_t>(i), frames, rng, "car"));
  }
  for (std::size_t i = 0; i < nTrucks; ++i) {
    tracks.push_back(synth::random_track(static_cast<std::int32_t>(nCars + i),
                                         frames, rng, "truck"));
  }
  Inputs in;
  in.tracks = dir.file("tracks.csv");
  in.meta = dir.file("tracksMeta.csv");
  synth::write_tracks_csv(in.tracks, tracks);
  synth::write_meta_csv(in.meta, tracks);
  return in;
}

std::string io_args(const Inputs& in, const fs::path& out) {
  return "--tracks " + quoted(in.tracks) + " --meta " + quoted(in.meta) +
         " --out " + quoted(out);
}

}  // namespace

TEST_CASE("run-all leaves the complete artifact set behind") {
  testgen::TempDir dir("cli-run-all");
  const auto in = write_inputs(dir, 6, 0, 120);
  const fs::path out = dir.path() / "out";

  const auto run = run_tool(dir.path(), "run-all " + io_args(in, out) +
                                            " --format json,csv,plotdata");
  CAPTURE(run.err);
  REQUIRE(run.exitCode == 0);
  for (const char* stage : {"ingest ", "features ", "cluster ", "report "}) {
    CHECK(contains(run.out, stage));
  }

  for (const char* name :
       {"ingest_report.json", "tracks.store", "features.csv",
        "features_report.json", "model.json", "report.json", "stats.csv",
        "correlation.csv", "behavior_counts.csv", "centroids.csv",
        "cluster_dv_means.csv", "correlation_heatmap.csv",
        "cluster_scatter.csv"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }

  const auto report = nlohmann::json::parse(read_text(out / "report.json"));
  CHECK(report.at("schemaVersion").is_number());
  CHECK(report.at("config").at("k") == 3);
  CHECK(report.at("config").at("standardize") == true);
  const auto& counts = report.at("counts");
  CHECK(counts.at("retainedTracks") == 6);
  CHECK(counts.at("clustered").get<std::size_t>() +
            counts.at("excludedShort").get<std::size_t>() +
            counts.at("incompleteRows").get<std::size_t>() ==
        counts.at("retainedTracks").get<std::size_t>());
  const auto& groups = report.at("clusters").at("groups");
  REQUIRE(groups.size() == 1);
  CHECK(groups.at(0).at("group") == "all");
  const auto labels = groups.at(0).at("labels").get<std::vector<std::string>>();
  REQUIRE(labels.size() == 3);
  for (const char* want : {"conservative", "normal", "aggressive"}) {
    CHECK(std::find(labels.begin(), labels.end(), want) != labels.end());
  }
}

TEST_CASE("a missing input file fails cleanly") {
  testgen::TempDir dir("cli-missing");
  const auto run = run_tool(
      dir.path(), "ingest --tracks /nonexistent/tracks.csv --meta /nonexistent/meta.csv --out " +
                      quoted(dir.path() / "out"));
  CHECK(run.exitCode == 2);
  CHECK(contains(run.err, "error:"));
}

TEST_CASE("bad invocations are usage errors, not runtime failures") {
  testgen::TempDir dir("cli-usage");
  SUBCASE("unknown flag") {
    const auto run = run_tool(dir.path(), "ingest --bogus 1");
    CHECK(run.exitCode == 1);
    CHECK(contains(run.err, "usage error:"));
  }
  SUBCASE("missing subcommand") {
    const auto run = run_tool(dir.path(), "--seed 1");
    CHECK(run.exitCode == 1);
  }
  SUBCASE("version flag") {
    const auto run = run_tool(dir.path(), "--version");
    CHECK(run.exitCode == 0);
    CHECK(!run.out.empty());
  }
}

TEST_CASE("lenient ingest counts malformed rows, strict refuses them") {
  testgen::TempDir dir("cli-malformed");
  const auto in = write_inputs(dir, 3, 0, 60);
  {
    std::ofstream append(in.tracks, std::ios::app);
    append << "not,a,row\n";
    append << "0,99,0,0,0,0,abc,1.8,4.5,1,0,0,0,1\n";
    append << "0,98,0,0,0,0,0,1.8,4.5,notnum,0,0,0,1\n";
  }

  const fs::path lenientOut = dir.path() / "lenient";
  const auto lenient = run_tool(dir.path(), "ingest " + io_args(in, lenientOut));
  CAPTURE(lenient.err);
  REQUIRE(lenient.exitCode == 0);
  CHECK(contains(lenient.out, "skipped 3 malformed rows"));
  const auto report =
      nlohmann::json::parse(read_text(lenientOut / "ingest_report.json"));
  CHECK(report.at("tracksFile").at("rowsSkipped") == 3);
  CHECK(report.at("store").at("tracks") == 3);

  const auto strict = run_tool(
      dir.path(), "ingest " + io_args(in, dir.path() / "strict") + " --strict");
  CHECK(strict.exitCode == 2);
  CHECK(contains(strict.err, "error:"));
}

TEST_CASE("tracks below the frame floor leave an empty features file") {
  testgen::TempDir dir("cli-short");
  const auto in = write_inputs(dir, 4, 0, 10);
  const fs::path out = dir.path() / "out";

  REQUIRE(run_tool(dir.path(), "ingest " + io_args(in, out)).exitCode == 0);
  const auto run = run_tool(dir.path(), "features " + io_args(in, out));
  CHECK(run.exitCode == 0);
  CHECK(contains(run.out, "wrote 0 feature rows"));
  CHECK(contains(run.err, "no track met the minimum sample count"));

  CHECK(read_text(out / "features.csv") ==
        "recordingId,trackId,class,DV1,DV2,DV3,DV4,DV5,DV6,DV7,DV8,DV9,DV10\n");
  const auto report =
      nlohmann::json::parse(read_text(out / "features_report.json"));
  CHECK(report.at("counts").at("featureRows") == 0);
  CHECK(report.at("counts").at("excludedShort") == 4);
  CHECK(report.at("counts").at("retainedTracks") == 4);
}

TEST_CASE("report stands alone when no model was fitted") {
  testgen::TempDir dir("cli-report-alone");
  const auto in = write_inputs(dir, 5, 0, 100);
  const fs::path out = dir.path() / "out";

  REQUIRE(run_tool(dir.path(), "ingest " + io_args(in, out)).exitCode == 0);
  REQUIRE(run_tool(dir.path(), "features " + io_args(in, out)).exitCode == 0);
  const auto run = run_tool(
      dir.path(), "report " + io_args(in, out) + " --format json,csv");
  CHECK(run.exitCode == 0);
  CHECK(contains(run.out, "cluster summary skipped"));
  CHECK(fs::exists(out / "stats.csv"));
  CHECK(fs::exists(out / "correlation.csv"));
  CHECK_FALSE(fs::exists(out / "behavior_counts.csv"));
  const auto report = nlohmann::json::parse(read_text(out / "report.json"));
  CHECK(report.at("clusters").at("groups").empty());
}

TEST_CASE("repeated cluster runs rewrite byte-identical models") {
  testgen::TempDir dir("cli-determinism");
  const auto in = write_inputs(dir, 8, 0, 100);
  const fs::path out = dir.path() / "out";

  REQUIRE(run_tool(dir.path(), "ingest " + io_args(in, out)).exitCode == 0);
  REQUIRE(run_tool(dir.path(), "features " + io_args(in, out)).exitCode == 0);
  REQUIRE(run_tool(dir.path(), "cluster " + io_args(in, out)).exitCode == 0);
  const std::string first = read_text(out / "model.json");
  REQUIRE(run_tool(dir.path(), "cluster " + io_args(in, out)).exitCode == 0);
  CHECK(read_text(out / "model.json") == first);
  CHECK(!first.empty());
}

TEST_CASE("cluster counts other than three use index labels") {
  testgen::TempDir dir("cli-k5");
  const auto in = write_inputs(dir, 8, 0, 100);
  const fs::path out = dir.path() / "out";

  REQUIRE(run_tool(dir.path(), "ingest " + io_args(in, out)).exitCode == 0);
  REQUIRE(run_tool(dir.path(), "features " + io_args(in, out)).exitCode == 0);
  const auto run =
      run_tool(dir.path(), "cluster " + io_args(in, out) + " --k 5");
  CAPTURE(run.err);
  REQUIRE(run.exitCode == 0);

  const auto model = nlohmann::json::parse(read_text(out / "model.json"));
  CHECK(model.at("k") == 5);
  CHECK(model.at("labels").get<std::vector<std::string>>() ==
        std::vector<std::string>{"cluster-0", "cluster-1", "cluster-2",
                                 "cluster-3", "cluster-4"});
  std::size_t members = 0;
  for (const auto& size : model.at("clusterSizes")) {
    members += size.get<std::size_t>();
  }
  CHECK(members == 8);
}

TEST_CASE("the elbow subcommand reproduces the worked curve") {
  using drivol::FeatureVector;
  testgen::TempDir dir("cli-elbow");
  const fs::path out = dir.path() / "out";
  fs::create_directories(out);

  // Feature rows planted directly: the first measure carries {0,1,10,11},
  // everything else is constant, and standardization is off.
  std::vector<FeatureVector> rows(4);
  const double dv1[4] = {0.0, 1.0, 10.0, 11.0};
  for (int i = 0; i < 4; ++i) {
    rows[i].key = {0, i};
    rows[i].className = "car";
    rows[i].cls = drivol::VehicleClass::car;
    rows[i].dv[0] = dv1[i];
    for (std::size_t m = 1; m < drivol::kNumMeasures; ++m) {
      rows[i].dv[m] = 1.0;
    }
  }
  drivol::write_features_csv(out / "features.csv", rows);

  const auto run = run_tool(
      dir.path(),
      "elbow --out " + quoted(out) + " --k-min 1 --k-max 2 --no-standardize");
  CAPTURE(run.err);
  REQUIRE(run.exitCode == 0);
  CHECK(contains(run.out, "k=1 wcss=101.000000"));
  CHECK(contains(run.out, "k=2 wcss=1.000000"));
  CHECK(read_text(out / "elbow_curve.csv") == "k,wcss\n1,101\n2,1\n");

  const auto report =
      nlohmann::json::parse(read_text(out / "elbow_report.json"));
  CHECK(report.at("knee").is_null());
  CHECK(report.at("points").size() == 2);

  SUBCASE("an inverted range is refused") {
    const auto bad = run_tool(
        dir.path(), "elbow --out " + quoted(out) + " --k-min 3 --k-max 2");
    CHECK(bad.exitCode == 2);
    CHECK(contains(bad.err, "error:"));
  }

  SUBCASE("a range beyond the row count is refused") {
    const auto bad = run_tool(
        dir.path(),
        "elbow --out " + quoted(out) + " --k-max 40 --no-standardize");
    CHECK(bad.exitCode == 2);
  }
}

TEST_CASE("config files fill in defaults but flags win") {
  testgen::TempDir dir("cli-config");
  const auto in = write_inputs(dir, 8, 0, 100);
  const fs::path out = dir.path() / "out";
  const fs::path cfg = dir.file("pipeline.cfg");
  std::ofstream(cfg) << "k=4\nseed=7\n";

  REQUIRE(run_tool(dir.path(), "ingest " + io_args(in, out)).exitCode == 0);
  REQUIRE(run_tool(dir.path(), "features " + io_args(in, out)).exitCode == 0);

  const auto fromFile =
      run_tool(dir.path(), "cluster " + io_args(in, out) + " --config " + quoted(cfg));
  CAPTURE(fromFile.err);
  REQUIRE(fromFile.exitCode == 0);
  auto model = nlohmann::json::parse(read_text(out / "model.json"));
  CHECK(model.at("k") == 4);
  CHECK(model.at("seed") == 7);
  CHECK(model.at("config").at("k") == 4);

  const auto overridden = run_tool(
      dir.path(),
      "cluster " + io_args(in, out) + " --config " + quoted(cfg) + " --k 2");
  REQUIRE(overridden.exitCode == 0);
  model = nlohmann::json::parse(read_text(out / "model.json"));
  CHECK(model.at("k") == 2);
  CHECK(model.at("seed") == 7);  // untouched by the flag
}

TEST_CASE("the environment variable supplies the output directory") {
  testgen::TempDir dir("cli-envout");
  const auto in = write_inputs(dir, 3, 0, 60);
  const fs::path out = dir.path() / "env-out";

  const auto run = run_tool(
      dir.path(),
      "ingest --tracks " + quoted(in.tracks) + " --meta " + quoted(in.meta),
      "DRIVOL_OUT=" + quoted(out) + " ");
  CAPTURE(run.err);
  REQUIRE(run.exitCode == 0);
  CHECK(fs::exists(out / "ingest_report.json"));
  const auto report =
      nlohmann::json::parse(read_text(out / "ingest_report.json"));
  CHECK(report.at("config").at("out") == out.string());
}

TEST_CASE("per-class grouping fits separate models") {
  testgen::TempDir dir("cli-groups");
  const auto in = write_inputs(dir, 5, 4, 100);
  const fs::path out = dir.path() / "out";

  const auto run = run_tool(dir.path(), "run-all " + io_args(in, out) +
                                            " --group-by-class --k 2");
  CAPTURE(run.err);
  REQUIRE(run.exitCode == 0);
  CHECK(fs::exists(out / "model_car.json"));
  CHECK(fs::exists(out / "model_truck.json"));
  CHECK_FALSE(fs::exists(out / "model.json"));

  const auto report = nlohmann::json::parse(read_text(out / "report.json"));
  const auto& groups = report.at("clusters").at("groups");
  REQUIRE(groups.size() == 2);
  CHECK(groups.at(0).at("group") == "car");
  CHECK(groups.at(1).at("group") == "truck");
  CHECK(groups.at(0).at("counts").at("clustered") == 5);
  CHECK(groups.at(1).at("counts").at("clustered") == 4);

  const auto counts = read_text(out / "behavior_counts.csv");
  CHECK(contains(counts, "car,all,cluster-0,"));
  CHECK(contains(counts, "truck,all,cluster-1,"));
}
