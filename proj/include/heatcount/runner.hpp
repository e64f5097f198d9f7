#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatcount/ergotropy.hpp"
#include "heatcount/io.hpp"
#include "heatcount/series.hpp"
#include "heatcount/statistics.hpp"
#include "heatcount/svg.hpp"

// Experiment orchestration behind the CLI: JSON config in, fixed-schema CSV
// plus a hashed manifest out. Core numerics stay in the headers above; this
// layer only wires grids, files and diagnostics together.

namespace heatcount {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kManifestSchemaVersion = 1;

enum class Experiment {
  benchmark_dynamics,
  cf_scan,
  moments,
  ergotropy_scan,
  distribution,
};

inline const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::benchmark_dynamics: return "benchmark-dynamics";
    case Experiment::cf_scan: return "cf-scan";
    case Experiment::moments: return "moments";
    case Experiment::ergotropy_scan: return "ergotropy";
    case Experiment::distribution: return "distribution";
  }
  throw std::logic_error("experiment_name: unreachable");
}

inline Experiment experiment_from_name(const std::string& name) {
  for (Experiment e : {Experiment::benchmark_dynamics, Experiment::cf_scan,
                       Experiment::moments, Experiment::ergotropy_scan,
                       Experiment::distribution})
    if (name == experiment_name(e)) return e;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

struct RunConfig {
  Experiment experiment = Experiment::benchmark_dynamics;
  ModelParams model;
  std::vector<double> t_grid;
  std::vector<double> chi_grid;
  std::vector<double> q_grid;
  double cf_time = 1000.0;  // ps, observation time for cf-scan / distribution
  double chi_eps = 0.005;   // 1/eV, moment finite-difference step
  int threads = 0;          // 0 = auto
  bool svg = false;
  std::string output_dir = "heatcount-out";
};

inline RunConfig default_config(Experiment e) {
  RunConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::benchmark_dynamics:
      cfg.t_grid = grid_step(0.0, 300.0, 0.1);
      break;
    case Experiment::cf_scan:
      cfg.chi_grid = linspace(-3.0, 3.0, 241);
      break;
    case Experiment::moments:
      cfg.t_grid = grid_step(0.0, 500.0, 0.5);
      break;
    case Experiment::ergotropy_scan:
      cfg.t_grid = grid_step(0.0, 300.0, 0.05);
      break;
    case Experiment::distribution:
      cfg.chi_grid = linspace(-3.0, 3.0, 241);
      cfg.q_grid = grid_step(-0.75, 1.75, 0.005);
      break;
  }
  return cfg;
}

namespace detail {

inline std::vector<double> parse_grid(const nlohmann::json& j, const std::string& field) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw std::invalid_argument("config." + field + ": non-numeric entry");
      out.push_back(v.get<double>());
    }
    return out;
  }
  if (j.is_object()) {
    for (const auto& [key, _] : j.items())
      if (key != "start" && key != "stop" && key != "step" && key != "num")
        throw std::invalid_argument("config." + field + ": unknown key '" + key + "'");
    if (!j.contains("start") || !j.contains("stop"))
      throw std::invalid_argument("config." + field + ": need start and stop");
    double a = j.at("start").get<double>();
    double b = j.at("stop").get<double>();
    if (j.contains("step")) return grid_step(a, b, j.at("step").get<double>());
    if (j.contains("num")) return linspace(a, b, j.at("num").get<int>());
    throw std::invalid_argument("config." + field + ": need step or num");
  }
  throw std::invalid_argument("config." + field + ": expected array or {start,stop,step|num}");
}

inline void parse_model(const nlohmann::json& j, ModelParams* model) {
  bool cut_given = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "epsilon") model->epsilon = value.get<double>();
    else if (key == "delta") model->delta = value.get<double>();
    else if (key == "alpha") model->alpha = value.get<double>();
    else if (key == "gamma") model->gamma_width = value.get<double>();
    else if (key == "omega0") model->omega0 = value.get<double>();
    else if (key == "temperature") model->temperature = value.get<double>();
    else if (key == "m_rc") model->m_rc = value.get<int>();
    else if (key == "omega_cut") { model->omega_cut = value.get<double>(); cut_given = true; }
    else throw std::invalid_argument("config.model: unknown key '" + key + "'");
  }
  if (!cut_given) model->omega_cut = 10.0 * model->omega0;
}

}  // namespace detail

// Parse a config file; `experiment` comes from the CLI subcommand and must
// match the config's own "experiment" key when that is present.
inline RunConfig parse_config(const nlohmann::json& j, Experiment experiment) {
  RunConfig cfg = default_config(experiment);
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      if (experiment_from_name(value.get<std::string>()) != experiment)
        throw std::invalid_argument("config.experiment '" + value.get<std::string>() +
                                    "' does not match the requested subcommand");
    } else if (key == "model") {
      detail::parse_model(value, &cfg.model);
    } else if (key == "t_grid") {
      cfg.t_grid = detail::parse_grid(value, "t_grid");
    } else if (key == "chi_grid") {
      cfg.chi_grid = detail::parse_grid(value, "chi_grid");
    } else if (key == "q_grid") {
      cfg.q_grid = detail::parse_grid(value, "q_grid");
    } else if (key == "cf_time") {
      cfg.cf_time = value.get<double>();
    } else if (key == "chi_eps") {
      cfg.chi_eps = value.get<double>();
    } else if (key == "threads") {
      cfg.threads = value.get<int>();
    } else if (key == "svg") {
      cfg.svg = value.get<bool>();
    } else if (key == "output_dir") {
      cfg.output_dir = value.get<std::string>();
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

struct Diagnostic {
  std::string severity;  // "error" | "warning" | "info"
  std::string check;
  std::string message;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == "error") return true;
  return false;
}

inline std::vector<Diagnostic> validate_config(const RunConfig& cfg) {
  std::vector<Diagnostic> out;
  auto push = [&](const char* sev, const char* check, std::string msg) {
    out.push_back({sev, check, std::move(msg)});
  };

  try {
    cfg.model.validate();
  } catch (const std::exception& e) {
    push("error", "model-params", e.what());
    return out;  // everything below needs a sane model
  }

  try {
    RCParams rc = map_to_rc(cfg.model);
    const double target = rc.lambda_rc * rc.lambda_rc / rc.omega_rc;
    const double integral = reorganization_energy(cfg.model, 200.0 * cfg.model.omega0);
    push("info", "rc-mapping",
         "Omega = " + format_g17(rc.omega_rc) + " eV, lambda = " + format_g17(rc.lambda_rc) +
             " eV, gamma = " + format_g17(rc.gamma_rc) + "; reorganization residual = " +
             format_g17(std::abs(integral - target) / target));
    const double beta = beta_from_temperature(cfg.model.temperature);
    double z = 0.0;
    for (int n = 0; n < cfg.model.m_rc; ++n) z += std::exp(-beta * rc.omega_rc * n);
    const double top = std::exp(-beta * rc.omega_rc * (cfg.model.m_rc - 1)) / z;
    if (top >= 1e-6)
      push("warning", "rc-truncation",
           "thermal occupation of the top kept level is " + format_g17(top) +
               "; increase m_rc");
    else
      push("info", "rc-truncation", "top-level thermal occupation " + format_g17(top));
  } catch (const std::exception& e) {
    push("error", "rc-mapping", e.what());
  }

  auto check_grid = [&](const std::vector<double>& g, const char* name, bool required) {
    if (g.empty()) {
      if (required) push("error", "grids", std::string(name) + " is empty");
      return;
    }
    for (size_t i = 1; i < g.size(); ++i)
      if (!(g[i] >= g[i - 1])) {
        push("error", "grids", std::string(name) + " is not ascending");
        return;
      }
  };
  const bool wants_t = cfg.experiment == Experiment::benchmark_dynamics ||
                       cfg.experiment == Experiment::moments ||
                       cfg.experiment == Experiment::ergotropy_scan;
  const bool wants_chi = cfg.experiment == Experiment::cf_scan ||
                         cfg.experiment == Experiment::distribution;
  check_grid(cfg.t_grid, "t_grid", wants_t);
  check_grid(cfg.chi_grid, "chi_grid", wants_chi);
  check_grid(cfg.q_grid, "q_grid", cfg.experiment == Experiment::distribution);
  if (wants_t && !cfg.t_grid.empty() && cfg.t_grid.front() < 0.0)
    push("error", "grids", "t_grid contains negative times");
  if (!(cfg.cf_time >= 0.0)) push("error", "grids", "cf_time must be non-negative");

  if (cfg.experiment == Experiment::distribution && cfg.chi_grid.size() >= 3) {
    const double dchi = cfg.chi_grid[1] - cfg.chi_grid[0];
    bool uniform = dchi > 0.0;
    for (size_t i = 0; i + 1 < cfg.chi_grid.size() && uniform; ++i)
      if (std::abs(cfg.chi_grid[i + 1] - cfg.chi_grid[i] - dchi) > 1e-9 * dchi) uniform = false;
    if (!uniform || std::abs(cfg.chi_grid.front() + cfg.chi_grid.back()) >
                        1e-9 * std::abs(cfg.chi_grid.back()))
      push("error", "grids", "distribution requires a uniform chi grid symmetric about 0");
  }

  if (cfg.experiment == Experiment::moments) {
    if (!(cfg.chi_eps > 0.0))
      push("error", "chi-eps", "chi_eps must be positive");
    else if (cfg.chi_eps > 0.02)
      push("warning", "chi-eps", "chi_eps above 0.02/eV inflates finite-difference bias");
    else if (cfg.chi_eps < 1e-4)
      push("warning", "chi-eps", "chi_eps below 1e-4/eV amplifies round-off in the variance");
  }

  if (cfg.model.delta != 0.0 && cfg.experiment != Experiment::ergotropy_scan)
    push("warning", "exact-reference",
         "delta != 0 has no closed-form reference; exact columns will be NaN");

  try {
    std::filesystem::create_directories(cfg.output_dir);
    auto probe = std::filesystem::path(cfg.output_dir) / ".write-probe";
    write_text_atomic(probe, "ok");
    std::filesystem::remove(probe);
  } catch (const std::exception& e) {
    push("error", "output-dir", e.what());
  }

  const int dim = 2 * cfg.model.m_rc;
  push("info", "scale",
       "extended-system dimension " + std::to_string(dim) + ", superoperator " +
           std::to_string(dim * dim) + "x" + std::to_string(dim * dim) + ", threads " +
           std::to_string(resolve_threads(cfg.threads)));
  return out;
}

struct RunManifest {
  nlohmann::json document;
  bool partial = false;
  std::filesystem::path directory;
};

namespace detail {

inline nlohmann::json config_echo(const RunConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = experiment_name(cfg.experiment);
  j["model"] = {{"epsilon", cfg.model.epsilon},
                {"delta", cfg.model.delta},
                {"alpha", cfg.model.alpha},
                {"gamma", cfg.model.gamma_width},
                {"omega0", cfg.model.omega0},
                {"temperature", cfg.model.temperature},
                {"m_rc", cfg.model.m_rc},
                {"omega_cut", cfg.model.omega_cut}};
  j["t_grid"] = cfg.t_grid;
  j["chi_grid"] = cfg.chi_grid;
  j["q_grid"] = cfg.q_grid;
  j["cf_time"] = cfg.cf_time;
  j["chi_eps"] = cfg.chi_eps;
  j["threads"] = cfg.threads;
  j["svg"] = cfg.svg;
  j["output_dir"] = cfg.output_dir;
  return j;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace detail

inline RunManifest run(const RunConfig& cfg) {
  auto diags = validate_config(cfg);
  if (has_errors(diags)) {
    std::string msg = "invalid config:";
    for (const auto& d : diags)
      if (d.severity == "error") msg += " [" + d.check + "] " + d.message + ";";
    throw std::invalid_argument(msg);
  }

  const auto t_start = std::chrono::steady_clock::now();
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);

  EngineContext ctx = make_context(cfg.model);
  const bool exact_ok = cfg.model.delta == 0.0;
  const int threads = resolve_threads(cfg.threads);

  CsvTable table;
  std::vector<PlotSeries> plots;
  std::string x_label;
  bool partial = false;
  std::vector<std::string> warnings;
  nlohmann::json point_errors = nlohmann::json::array();
  nlohmann::json derived;

  switch (cfg.experiment) {
    case Experiment::benchmark_dynamics: {
      Chi0Dynamics dyn = dynamics_chi0(ctx, cfg.t_grid);
      if (dyn.warning) warnings.push_back(dyn.note);
      std::vector<double> exact(cfg.t_grid.size(), detail::kNan);
      if (exact_ok)
        parallel_for(int(cfg.t_grid.size()), threads,
                     [&](int i) { exact[i] = exact_coherence(cfg.t_grid[i], cfg.model); });
      table.header = {"t_ps", "sx_rcme", "sx_exact", "abs_err"};
      for (size_t i = 0; i < cfg.t_grid.size(); ++i)
        table.rows.push_back({cfg.t_grid[i], dyn.sx[i], exact[i],
                              std::abs(dyn.sx[i] - exact[i])});
      plots = {{"sx rcme", cfg.t_grid, dyn.sx}, {"sx exact", cfg.t_grid, exact}};
      x_label = "t (ps)";
      break;
    }
    case Experiment::cf_scan: {
      CFScanPair rc = cf_scan_both(ctx, cfg.chi_grid, cfg.cf_time, threads);
      CFSeries ex;
      if (exact_ok) ex = exact_cf_series(cfg.model, cfg.chi_grid, cfg.cf_time, {}, threads);
      if (rc.full.warning) warnings.push_back("propagation warning in cf scan");
      table.header = {"chi", "re_F_rc", "im_F_rc", "re_F_ex", "im_F_ex", "re_R_rc", "im_R_rc"};
      std::vector<double> re_f(cfg.chi_grid.size()), im_f(cfg.chi_grid.size());
      for (size_t i = 0; i < cfg.chi_grid.size(); ++i) {
        const Complex f = rc.full.values[i];
        const Complex r = rc.residual.values[i];
        const Complex e = exact_ok ? ex.values[i] : Complex(detail::kNan, detail::kNan);
        table.rows.push_back({cfg.chi_grid[i], f.real(), f.imag(), e.real(), e.imag(),
                              r.real(), r.imag()});
        re_f[i] = f.real();
        im_f[i] = f.imag();
        if (!rc.full.point_errors[i].empty()) {
          partial = true;
          point_errors.push_back({{"chi", cfg.chi_grid[i]}, {"error", rc.full.point_errors[i]}});
        }
        if (exact_ok && !ex.point_errors[i].empty()) {
          partial = true;
          point_errors.push_back({{"chi", cfg.chi_grid[i]}, {"error", ex.point_errors[i]}});
        }
      }
      plots = {{"Re phi_F rc", cfg.chi_grid, re_f}, {"Im phi_F rc", cfg.chi_grid, im_f}};
      x_label = "chi (1/eV)";
      break;
    }
    case Experiment::moments: {
      MomentScanPair rc = moment_series_both(ctx, cfg.t_grid, cfg.chi_eps);
      if (rc.full.warning) warnings.push_back(rc.full.note);
      MomentSeries ex;
      if (exact_ok) ex = exact_moment_series(cfg.model, cfg.t_grid, {}, threads);
      table.header = {"t_ps", "mean_F_rc", "mean_F_ex", "mean_R_rc",
                      "var_F_rc", "var_F_ex", "var_R_rc"};
      for (size_t i = 0; i < cfg.t_grid.size(); ++i)
        table.rows.push_back({cfg.t_grid[i], rc.full.mean[i],
                              exact_ok ? ex.mean[i] : detail::kNan, rc.residual.mean[i],
                              rc.full.variance[i], exact_ok ? ex.variance[i] : detail::kNan,
                              rc.residual.variance[i]});
      plots = {{"mean full", cfg.t_grid, rc.full.mean},
               {"mean residual", cfg.t_grid, rc.residual.mean}};
      x_label = "t (ps)";
      break;
    }
    case Experiment::ergotropy_scan: {
      ErgotropySeries series = ergotropy_series(ctx, cfg.t_grid);
      if (series.warning) warnings.push_back(series.note);
      table.header = {"t_ps", "tls_ergotropy_ev", "es_ergotropy_ev"};
      for (size_t i = 0; i < cfg.t_grid.size(); ++i)
        table.rows.push_back({cfg.t_grid[i], series.tls[i], series.es[i]});
      plots = {{"TLS", cfg.t_grid, series.tls}, {"extended system", cfg.t_grid, series.es}};
      x_label = "t (ps)";
      break;
    }
    case Experiment::distribution: {
      CFScanPair rc = cf_scan_both(ctx, cfg.chi_grid, cfg.cf_time, threads);
      CFSeries ex;
      if (exact_ok) ex = exact_cf_series(cfg.model, cfg.chi_grid, cfg.cf_time, {}, threads);
      const bool rc_ok = rc.full.ok() && rc.residual.ok();
      const bool ex_ok = exact_ok && ex.ok();
      for (size_t i = 0; i < cfg.chi_grid.size(); ++i) {
        if (!rc.full.point_errors[i].empty()) {
          partial = true;
          point_errors.push_back({{"chi", cfg.chi_grid[i]}, {"error", rc.full.point_errors[i]}});
        }
        if (exact_ok && !ex.point_errors[i].empty()) {
          partial = true;
          point_errors.push_back({{"chi", cfg.chi_grid[i]}, {"error", ex.point_errors[i]}});
        }
      }
      std::vector<double> p_full(cfg.q_grid.size(), detail::kNan);
      std::vector<double> p_res(cfg.q_grid.size(), detail::kNan);
      std::vector<double> p_ex(cfg.q_grid.size(), detail::kNan);
      if (rc_ok) {
        HeatDistribution hf = distribution_from_cf(rc.full, cfg.q_grid);
        HeatDistribution hr = distribution_from_cf(rc.residual, cfg.q_grid);
        p_full = hf.p;
        p_res = hr.p;
        derived["window_sigma"] = hf.window_sigma;
        derived["norm_F_rc"] = hf.norm;
        derived["norm_R_rc"] = hr.norm;
      }
      if (ex_ok) {
        HeatDistribution he = distribution_from_cf(ex, cfg.q_grid);
        p_ex = he.p;
        derived["norm_F_ex"] = he.norm;
      }
      table.header = {"q_ev", "p_F_rc", "p_F_ex", "p_R_rc"};
      for (size_t i = 0; i < cfg.q_grid.size(); ++i)
        table.rows.push_back({cfg.q_grid[i], p_full[i], p_ex[i], p_res[i]});
      plots = {{"P full rc", cfg.q_grid, p_full}, {"P residual rc", cfg.q_grid, p_res}};
      x_label = "q (eV)";
      break;
    }
  }

  const std::string csv_name = std::string(experiment_name(cfg.experiment)) + ".csv";
  const std::string csv = render_csv(table);
  write_text_atomic(dir / csv_name, csv);

  nlohmann::json outputs = nlohmann::json::array();
  outputs.push_back({{"file", csv_name}, {"bytes", csv.size()}, {"fnv1a64", fnv1a64_hex(csv)}});

  if (cfg.svg) {
    const std::string svg_name = std::string(experiment_name(cfg.experiment)) + ".svg";
    const std::string svg = render_svg_plot(experiment_name(cfg.experiment), x_label, plots);
    write_text_atomic(dir / svg_name, svg);
    outputs.push_back({{"file", svg_name}, {"bytes", svg.size()}, {"fnv1a64", fnv1a64_hex(svg)}});
  }

  derived["rc"] = {{"omega_rc", ctx.rc.omega_rc},
                   {"lambda_rc", ctx.rc.lambda_rc},
                   {"gamma_rc", ctx.rc.gamma_rc}};
  derived["beta"] = beta_from_temperature(cfg.model.temperature);

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  RunManifest manifest;
  manifest.partial = partial;
  manifest.directory = dir;
  manifest.document = {{"schema_version", kManifestSchemaVersion},
                       {"tool_version", kToolVersion},
                       {"experiment", experiment_name(cfg.experiment)},
                       {"config", detail::config_echo(cfg)},
                       {"derived", derived},
                       {"outputs", outputs},
                       {"partial", partial},
                       {"point_errors", point_errors},
                       {"warnings", warnings},
                       {"wall_seconds", wall}};
  write_text_atomic(dir / "manifest.json", manifest.document.dump(2) + "\n");
  return manifest;
}

}  // namespace heatcount
