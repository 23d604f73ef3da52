// Batch verifier: reads a JSON run configuration, runs the selected suites and
// writes a JSON report. Exit status 0 on pass, 1 on fail, 2 on a bad config.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "causal/error.hpp"
#include "causal/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Verify gauge-field pullbacks and super-extensions", "causal_verify"};
  std::string config_path, out_path;
  std::optional<std::string> suite;
  std::optional<std::int64_t> seed;
  std::optional<int> samples, threads;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--suite", suite, "asdym | pullback | contact | super | reduction | all");
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--out", out_path, "report path (default: standard output)");
  app.add_option("--samples", samples, "override region sample count");
  app.add_option("--threads", threads, "worker threads (default: CAUSAL_THREADS or 1)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  causal::Report report;
  try {
    causal::Json cfg = causal::Json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw causal::Error(causal::ErrorKind::ConfigError, "cannot read " + config_path);
      cfg = causal::Json::parse(in);
    }
    if (suite) cfg["suite"] = *suite;
    if (seed) cfg["seed"] = *seed;
    if (samples) cfg["region"]["samples"] = *samples;
    if (threads) cfg["threads"] = *threads;
    report = causal::run(causal::parse_config(cfg));
  } catch (const causal::Json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const causal::Error& e) {
    if (e.kind() != causal::ErrorKind::ConfigError) throw;
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  const std::string text = causal::report_to_json(report).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    out << text;
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
  }
  for (const auto& r : report.records)
    if (!r.pass) std::cerr << "FAIL " << r.name << " max=" << r.max_residual << "\n";
  return report.pass ? 0 : 1;
}
