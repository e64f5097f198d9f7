// Command-line front end: counting statistics of heat exchange for a
// dephasing two-level system strongly coupled to a bosonic environment,
// computed with a reaction-coordinate master equation and checked against
// the closed-form pure-dephasing solution where one exists.

#include <cstdio>
#include <exception>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatcount/runner.hpp"

namespace {

heatcount::RunConfig load_config(const std::string& path, heatcount::Experiment experiment) {
  if (path.empty()) return heatcount::default_config(experiment);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  nlohmann::json j = nlohmann::json::parse(in);  // throws with byte-offset diagnostics
  return heatcount::parse_config(j, experiment);
}

void apply_overrides(heatcount::RunConfig* cfg, const std::string& out_dir, int threads,
                     bool serial, bool svg) {
  if (!out_dir.empty()) cfg->output_dir = out_dir;
  if (threads > 0) cfg->threads = threads;
  if (serial) cfg->threads = 1;
  if (svg) cfg->svg = true;
}

int run_experiment(heatcount::Experiment experiment, const std::string& config_path,
                   const std::string& out_dir, int threads, bool serial, bool svg) {
  heatcount::RunConfig cfg = load_config(config_path, experiment);
  apply_overrides(&cfg, out_dir, threads, serial, svg);
  for (const auto& d : heatcount::validate_config(cfg))
    std::fprintf(stderr, "[%s] %s: %s\n", d.severity.c_str(), d.check.c_str(),
                 d.message.c_str());
  heatcount::RunManifest manifest = heatcount::run(cfg);
  std::printf("wrote %s\n", (manifest.directory / "manifest.json").string().c_str());
  if (manifest.partial) {
    std::fprintf(stderr, "some points failed; outputs are partial (see manifest)\n");
    return 3;
  }
  return 0;
}

int validate_only(const std::string& config_path, const std::string& experiment_name) {
  heatcount::Experiment experiment = heatcount::experiment_from_name(experiment_name);
  heatcount::RunConfig cfg = load_config(config_path, experiment);
  auto diags = heatcount::validate_config(cfg);
  for (const auto& d : diags)
    std::printf("[%s] %s: %s\n", d.severity.c_str(), d.check.c_str(), d.message.c_str());
  return heatcount::has_errors(diags) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heatcount: heat-exchange counting statistics at strong coupling"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  bool serial = false;
  bool svg = false;
  std::string validate_experiment = "benchmark-dynamics";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (defaults used when omitted)");
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--threads", threads, "worker threads (0 = HEATCOUNT_THREADS or hardware)");
    sub->add_flag("--serial", serial, "force single-threaded execution");
    sub->add_flag("--svg", svg, "also write a quick-look SVG plot");
  };

  for (heatcount::Experiment e :
       {heatcount::Experiment::benchmark_dynamics, heatcount::Experiment::cf_scan,
        heatcount::Experiment::moments, heatcount::Experiment::ergotropy_scan,
        heatcount::Experiment::distribution})
    add_common(app.add_subcommand(heatcount::experiment_name(e)));

  CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("--config", config_path, "JSON config file");
  validate->add_option("--experiment", validate_experiment, "experiment the config is for");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub->get_name() == "validate")
      return validate_only(config_path, validate_experiment);
    return run_experiment(heatcount::experiment_from_name(sub->get_name()), config_path,
                          out_dir, threads, serial, svg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
