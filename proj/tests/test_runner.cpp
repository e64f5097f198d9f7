#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "heatcount/runner.hpp"

using namespace heatcount;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("heatcount-test-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

nlohmann::json tiny_model_json() {
  return {{"m_rc", 6}};
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("Default configurations", "[runner]") {
  RunConfig cf = default_config(Experiment::cf_scan);
  REQUIRE(cf.chi_grid.size() == 241);
  CHECK(cf.chi_grid.front() == -3.0);
  CHECK(cf.chi_grid.back() == 3.0);
  CHECK(cf.cf_time == 1000.0);

  RunConfig mo = default_config(Experiment::moments);
  REQUIRE(mo.t_grid.size() == 1001);
  CHECK(mo.t_grid.back() == 500.0);
  CHECK(mo.chi_eps == 0.005);

  CHECK(default_config(Experiment::benchmark_dynamics).t_grid.size() == 3001);
  CHECK(default_config(Experiment::ergotropy_scan).t_grid.size() == 6001);
  CHECK(default_config(Experiment::distribution).q_grid.size() == 501);
}

TEST_CASE("Config parsing", "[runner]") {
  nlohmann::json j = {{"experiment", "moments"},
                      {"model", {{"epsilon", 1.5}, {"gamma", 2e-3}, {"m_rc", 10}}},
                      {"t_grid", {{"start", 0.0}, {"stop", 1.0}, {"step", 0.5}}},
                      {"chi_eps", 0.01},
                      {"threads", 2}};
  RunConfig cfg = parse_config(j, Experiment::moments);
  CHECK(cfg.model.epsilon == 1.5);
  CHECK(cfg.model.gamma_width == 2e-3);
  CHECK(cfg.model.m_rc == 10);
  // omega_cut follows omega0 unless set explicitly
  CHECK(cfg.model.omega_cut == 10.0 * cfg.model.omega0);
  REQUIRE(cfg.t_grid.size() == 3);
  CHECK(cfg.chi_eps == 0.01);
  CHECK(cfg.threads == 2);

  // grid forms: explicit array and {start, stop, num}
  RunConfig arr = parse_config({{"t_grid", {0.0, 0.25, 1.0}}}, Experiment::moments);
  CHECK(arr.t_grid == std::vector<double>{0.0, 0.25, 1.0});
  RunConfig num = parse_config({{"chi_grid", {{"start", -1.0}, {"stop", 1.0}, {"num", 5}}}},
                               Experiment::cf_scan);
  REQUIRE(num.chi_grid.size() == 5);
  CHECK(num.chi_grid[2] == 0.0);

  CHECK_THROWS_AS(parse_config({{"experiment", "cf-scan"}}, Experiment::moments),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config({{"bogus", 1}}, Experiment::moments), std::invalid_argument);
  CHECK_THROWS_AS(parse_config({{"model", {{"bogus", 1}}}}, Experiment::moments),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config({{"t_grid", {{"start", 0.0}}}}, Experiment::moments),
                  std::invalid_argument);
}

TEST_CASE("Config validation diagnostics", "[runner]") {
  RunConfig good = default_config(Experiment::benchmark_dynamics);
  good.t_grid = {0.0, 1.0};
  good.output_dir = fresh_dir("validate").string();
  CHECK_FALSE(has_errors(validate_config(good)));

  RunConfig shallow = good;
  shallow.model.m_rc = 2;
  auto diags = validate_config(shallow);
  CHECK_FALSE(has_errors(diags));
  bool warned = false;
  for (const auto& d : diags)
    if (d.severity == "warning" && d.check == "rc-truncation") warned = true;
  CHECK(warned);

  RunConfig bad_cut = good;
  bad_cut.model.omega_cut = 0.01;  // below the resonance frequency
  CHECK(has_errors(validate_config(bad_cut)));

  RunConfig skew = default_config(Experiment::distribution);
  skew.output_dir = good.output_dir;
  skew.chi_grid = {-1.0, 0.0, 2.0};
  CHECK(has_errors(validate_config(skew)));

  RunConfig bad_eps = default_config(Experiment::moments);
  bad_eps.output_dir = good.output_dir;
  bad_eps.chi_eps = -1.0;
  CHECK(has_errors(validate_config(bad_eps)));
}

TEST_CASE("Benchmark run emits CSV and a verifiable manifest", "[runner]") {
  RunConfig cfg = parse_config({{"model", tiny_model_json()},
                                {"t_grid", {{"start", 0.0}, {"stop", 2.0}, {"step", 1.0}}}},
                               Experiment::benchmark_dynamics);
  fs::path dir = fresh_dir("benchmark");
  cfg.output_dir = dir.string();
  cfg.threads = 1;

  RunManifest manifest = run(cfg);
  CHECK_FALSE(manifest.partial);
  REQUIRE(fs::exists(dir / "benchmark-dynamics.csv"));
  REQUIRE(fs::exists(dir / "manifest.json"));

  std::string csv = read_text(dir / "benchmark-dynamics.csv");
  CHECK(first_line(csv) == "t_ps,sx_rcme,sx_exact,abs_err");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows

  auto parsed = nlohmann::json::parse(read_text(dir / "manifest.json"));
  CHECK(parsed.at("schema_version") == kManifestSchemaVersion);
  CHECK(parsed.at("experiment") == "benchmark-dynamics");
  CHECK(parsed.at("partial") == false);
  const auto& out0 = parsed.at("outputs").at(0);
  CHECK(out0.at("file") == "benchmark-dynamics.csv");
  CHECK(out0.at("bytes") == csv.size());
  CHECK(out0.at("fnv1a64") == fnv1a64_hex(csv));

  // re-running the identical config reproduces the bytes exactly
  run(cfg);
  CHECK(read_text(dir / "benchmark-dynamics.csv") == csv);
}

TEST_CASE("Every experiment runs end to end on a small grid", "[runner]") {
  auto small = [&](Experiment e, nlohmann::json patch) {
    nlohmann::json j = {{"model", tiny_model_json()}};
    for (auto& [k, v] : patch.items()) j[k] = v;
    RunConfig cfg = parse_config(j, e);
    fs::path dir = fresh_dir(experiment_name(e));
    cfg.output_dir = dir.string();
    cfg.threads = 1;
    RunManifest m = run(cfg);
    CHECK_FALSE(m.partial);
    CHECK(fs::exists(dir / (std::string(experiment_name(e)) + ".csv")));
    return dir;
  };

  fs::path cf = small(Experiment::cf_scan,
                      {{"chi_grid", {{"start", -0.4}, {"stop", 0.4}, {"num", 5}}},
                       {"cf_time", 5.0}});
  std::string header = first_line(read_text(cf / "cf-scan.csv"));
  CHECK(header == "chi,re_F_rc,im_F_rc,re_F_ex,im_F_ex,re_R_rc,im_R_rc");

  fs::path mo = small(Experiment::moments,
                      {{"t_grid", {{"start", 0.0}, {"stop", 1.0}, {"step", 0.5}}}});
  CHECK(first_line(read_text(mo / "moments.csv")) ==
        "t_ps,mean_F_rc,mean_F_ex,mean_R_rc,var_F_rc,var_F_ex,var_R_rc");

  fs::path er = small(Experiment::ergotropy_scan,
                      {{"t_grid", {{"start", 0.0}, {"stop", 1.0}, {"step", 0.5}}}});
  CHECK(first_line(read_text(er / "ergotropy.csv")) == "t_ps,tls_ergotropy_ev,es_ergotropy_ev");

  fs::path di = small(Experiment::distribution,
                      {{"chi_grid", {{"start", -2.0}, {"stop", 2.0}, {"num", 41}}},
                       {"q_grid", {{"start", -0.2}, {"stop", 0.2}, {"step", 0.1}}},
                       {"cf_time", 5.0}});
  CHECK(first_line(read_text(di / "distribution.csv")) == "q_ev,p_F_rc,p_F_ex,p_R_rc");
}

TEST_CASE("SVG quick-look output", "[runner]") {
  RunConfig cfg = parse_config({{"model", tiny_model_json()},
                                {"t_grid", {{"start", 0.0}, {"stop", 1.0}, {"step", 0.5}}}},
                               Experiment::benchmark_dynamics);
  fs::path dir = fresh_dir("svg");
  cfg.output_dir = dir.string();
  cfg.threads = 1;
  cfg.svg = true;
  RunManifest m = run(cfg);
  REQUIRE(m.document.at("outputs").size() == 2);
  std::string svg = read_text(dir / "benchmark-dynamics.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
}

TEST_CASE("Invalid configs are rejected before any work", "[runner]") {
  RunConfig cfg = default_config(Experiment::benchmark_dynamics);
  cfg.model.alpha = -1.0;
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
}
