// drivol: staged driving-volatility pipeline over rounD-style trajectory
// recordings. ingest -> features -> cluster -> report, plus an elbow scan
// and a single-shot run-all.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "drivol/errors.hpp"
#include "drivol/pipeline.hpp"
#include "drivol/version.hpp"

namespace {

void print_ingest(const drivol::IngestOutcome& outcome) {
  std::printf("stored %zu tracks (%zu rows), skipped %zu malformed rows\n",
              outcome.tracksStored, outcome.rowsStored, outcome.rowsSkipped);
}

void print_features(const drivol::FeaturesOutcome& outcome) {
  std::printf("wrote %zu feature rows (excluded %zu short tracks, %zu incomplete)\n",
              outcome.featureRows, outcome.excludedShort, outcome.incompleteRows);
  if (outcome.featureRows == 0) {
    std::fprintf(stderr, "warning: no track met the minimum sample count\n");
  }
}

void print_cluster(const drivol::ClusterOutcome& outcome) {
  for (std::size_t i = 0; i < outcome.groups.size(); ++i) {
    std::printf("group %s: wcss %.6f\n", outcome.groups[i].c_str(), outcome.wcss[i]);
  }
  for (const std::string& name : outcome.skippedGroups) {
    std::fprintf(stderr, "warning: group %s has fewer rows than k; skipped\n",
                 name.c_str());
  }
}

void print_elbow(const drivol::ElbowResult& result) {
  for (const drivol::ElbowPoint& p : result.points) {
    std::printf("k=%zu wcss=%.6f\n", p.k, p.wcss);
  }
  if (result.knee) {
    std::printf("knee estimate: k=%zu\n", *result.knee);
  }
}

void print_report(const drivol::ReportOutcome& outcome) {
  if (!outcome.clusterSummaryEmitted) {
    std::printf("cluster summary skipped: no fitted model in the output directory\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driving-volatility pipeline for rounD-style trajectory data"};
  app.set_version_flag("--version", std::string(drivol::kToolVersion));
  app.set_config("--config", "", "key=value config file; flags take precedence");
  app.require_subcommand(1);

  drivol::PipelineConfig config;
  std::string tracks;
  std::string meta;
  std::string out = "out";
  bool noStandardize = false;
  bool strict = false;

  app.add_option("--tracks", tracks, "tracks CSV (one row per road user per frame)");
  app.add_option("--meta", meta, "tracksMeta CSV (one row per road user)");
  app.add_option("--classes", config.classes,
                 "comma-separated vehicle classes to keep, or 'all'")
      ->capture_default_str();
  app.add_option("--min-frames", config.minSamples,
                 "minimum frames per track for feature extraction")
      ->capture_default_str();
  app.add_option("--frame-rate", config.frameRate, "recording frame rate in Hz")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--k", config.k, "number of clusters")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", config.seed, "random seed")->capture_default_str();
  app.add_option("--restarts", config.restarts, "independent k-means restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-iter", config.maxIter, "iteration cap per restart")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tol", config.tol, "stop when the wcss improvement drops below this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--no-standardize", noStandardize,
               "cluster raw feature values instead of z-scores");
  app.add_flag("--group-by-class", config.groupByClass,
               "fit one model per vehicle class");
  app.add_flag("--strict", strict, "abort on any malformed row or join anomaly");
  app.add_option("--out", out, "output directory")
      ->envname("DRIVOL_OUT")
      ->capture_default_str();
  app.add_option("--format", config.formats,
                 "output formats: json, csv, plotdata (repeat or comma-separate)")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "csv", "plotdata"}))
      ->capture_default_str();
  app.add_option("--k-min", config.kMin, "smallest k for the elbow scan")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--k-max", config.kMax, "largest k for the elbow scan")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* ingest = app.add_subcommand("ingest", "parse, validate, join and store tracks");
  CLI::App* features = app.add_subcommand("features", "compute DV1-DV10 per track");
  CLI::App* cluster = app.add_subcommand("cluster", "fit k-means and label behaviors");
  CLI::App* elbow = app.add_subcommand("elbow", "scan k and emit the wcss curve");
  CLI::App* report = app.add_subcommand("report", "descriptive stats, correlations, summaries");
  CLI::App* runAll = app.add_subcommand("run-all", "ingest, features, cluster, report in one go");
  for (CLI::App* sub : {ingest, features, cluster, elbow, report, runAll}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  config.tracksPath = tracks;
  config.metaPath = meta;
  config.outDir = out;
  config.standardize = !noStandardize;
  config.errorPolicy = strict ? drivol::ErrorPolicy::strict : drivol::ErrorPolicy::lenient;

  try {
    if (ingest->parsed()) {
      print_ingest(drivol::cmd_ingest(config));
    } else if (features->parsed()) {
      print_features(drivol::cmd_features(config));
    } else if (cluster->parsed()) {
      print_cluster(drivol::cmd_cluster(config));
    } else if (elbow->parsed()) {
      print_elbow(drivol::cmd_elbow(config));
    } else if (report->parsed()) {
      print_report(drivol::cmd_report(config));
    } else if (runAll->parsed()) {
      for (const drivol::StageTiming& t : drivol::cmd_run_all(config)) {
        std::printf("%s %.3f s\n", t.stage.c_str(), t.seconds);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
