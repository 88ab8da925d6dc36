// Command-line front end: time-series evolution, lambda sweeps, inflection
// extraction, scaling fits, and self-validation, with CSV/JSON/SVG output.
// Talks to the library exclusively through the C API.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rabi_limit/c_api.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

struct CliError {
  int code;
  std::string message;
};

// shortest round-trip decimal representation
std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

const std::map<std::string, rabi_metric_id> kMetricNames = {
    {"spin_td_numeric", RABI_METRIC_SPIN_TD_NUMERIC},
    {"spin_td_analytic", RABI_METRIC_SPIN_TD_ANALYTIC},
    {"field_td_numeric", RABI_METRIC_FIELD_TD_NUMERIC},
    {"field_td_fbrwa", RABI_METRIC_FIELD_TD_FBRWA},
    {"correlation_numeric", RABI_METRIC_CORRELATION_NUMERIC},
    {"correlation_analytic", RABI_METRIC_CORRELATION_ANALYTIC},
    {"entropy_numeric", RABI_METRIC_ENTROPY_NUMERIC},
    {"entropy_analytic", RABI_METRIC_ENTROPY_ANALYTIC},
};

rabi_metric_id metric_from_name(const std::string& name) {
  auto it = kMetricNames.find(name);
  if (it == kMetricNames.end())
    throw CliError{kExitUsage, "unknown metric name: " + name};
  return it->second;
}

rabi_engine_route route_from_name(const std::string& name) {
  if (name == "auto") return RABI_ROUTE_AUTO;
  if (name == "lab") return RABI_ROUTE_LAB;
  if (name == "displaced") return RABI_ROUTE_DISPLACED;
  throw CliError{kExitUsage, "unknown engine route: " + name};
}

void check(rabi_status st, const std::string& where) {
  if (st == RABI_OK) return;
  const int code = st == RABI_ERR_INVALID_ARGUMENT ? kExitUsage : kExitNumeric;
  throw CliError{code, where + ": " + rabi_last_error()};
}

struct Config {
  double A = 0.2;
  std::vector<int> n_list = {0};
  double lambda = 0.02;  // evolve
  double lambda_min = 1e-3;
  double lambda_max = 0.3;
  int lambda_points = 61;
  int N = 10;  // semiclassical Rabi periods in the window
  double Delta = 0.0;
  std::string route = "auto";
  int samples = 2048;
  double entropy_tol = 1e-8;
  std::vector<std::string> metrics = {"spin_td_analytic"};
  int workers = 0;
  int window = 7;            // inflection fit window
  int time_samples = 2000;   // evolve rows
  int n_min = 4, n_max = 16; // scaling fit range

  json echo() const {
    return json{{"A", A},
                {"n", n_list},
                {"lambda", lambda},
                {"lambda_min", lambda_min},
                {"lambda_max", lambda_max},
                {"lambda_points", lambda_points},
                {"N", N},
                {"Delta", Delta},
                {"route", route},
                {"samples", samples},
                {"entropy_tol", entropy_tol},
                {"metrics", metrics},
                {"workers", workers},
                {"window", window},
                {"time_samples", time_samples},
                {"n_min", n_min},
                {"n_max", n_max}};
  }

  double t1() const { return N * kPi / A; }

  void validate() const {
    if (!(A > 0.0)) throw CliError{kExitUsage, "config: A must be > 0"};
    if (!(lambda_min > 0.0) || !(lambda_max > lambda_min))
      throw CliError{kExitUsage, "config: need 0 < lambda_min < lambda_max"};
    if (N < 1) throw CliError{kExitUsage, "config: N must be >= 1"};
    if (workers < 0) throw CliError{kExitUsage, "config: workers must be >= 0"};
    for (int n : n_list)
      if (n < 0) throw CliError{kExitUsage, "config: n must be >= 0"};
  }
};

void apply_json(Config& cfg, const json& j) {
  try {
    if (j.contains("A")) cfg.A = j["A"].get<double>();
    if (j.contains("n")) {
      if (j["n"].is_array())
        cfg.n_list = j["n"].get<std::vector<int>>();
      else
        cfg.n_list = {j["n"].get<int>()};
    }
    if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
    if (j.contains("lambda_min")) cfg.lambda_min = j["lambda_min"].get<double>();
    if (j.contains("lambda_max")) cfg.lambda_max = j["lambda_max"].get<double>();
    if (j.contains("lambda_points"))
      cfg.lambda_points = j["lambda_points"].get<int>();
    if (j.contains("N")) cfg.N = j["N"].get<int>();
    if (j.contains("Delta")) cfg.Delta = j["Delta"].get<double>();
    if (j.contains("route")) cfg.route = j["route"].get<std::string>();
    if (j.contains("samples")) cfg.samples = j["samples"].get<int>();
    if (j.contains("entropy_tol"))
      cfg.entropy_tol = j["entropy_tol"].get<double>();
    if (j.contains("metrics"))
      cfg.metrics = j["metrics"].get<std::vector<std::string>>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (j.contains("window")) cfg.window = j["window"].get<int>();
    if (j.contains("time_samples"))
      cfg.time_samples = j["time_samples"].get<int>();
    if (j.contains("n_min")) cfg.n_min = j["n_min"].get<int>();
    if (j.contains("n_max")) cfg.n_max = j["n_max"].get<int>();
  } catch (const json::exception& e) {
    throw CliError{kExitUsage, std::string("config: ") + e.what()};
  }
}

Config load_config(const std::string& path) {
  Config cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw CliError{kExitUsage, "cannot open config file: " + path};
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CliError{kExitUsage, std::string("config parse error: ") + e.what()};
  }
  apply_json(cfg, j);
  return cfg;
}

int resolve_workers(int flag_value, const Config& cfg) {
  if (flag_value > 0) return flag_value;
  if (cfg.workers > 0) return cfg.workers;
  if (const char* env = std::getenv("RABI_LIMIT_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // library default: hardware concurrency
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);  // LF endings on all platforms
  if (!out) throw CliError{kExitNumeric, "cannot write " + path.string()};
  return out;
}

void write_manifest(const fs::path& path, const std::string& command,
                    const Config& cfg, const std::vector<std::string>& files,
                    const json& extra = json::object()) {
  json m{{"command", command}, {"config", cfg.echo()}, {"outputs", files}};
  for (auto& [k, v] : extra.items()) m[k] = v;
  auto out = open_out(path);
  out << m.dump(2) << "\n";
}

// ---- SVG chart (static, log-x line chart with optional vertical markers) ----

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> xy;  // x > 0
};

struct Marker {
  std::string label;
  double x;
};

void write_svg(const fs::path& path, const std::string& title,
               const std::vector<Series>& series,
               const std::vector<Marker>& markers) {
  const int W = 840, H = 520;
  const double L = 70, R = 820, T = 50, B = 470;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
  for (const Series& s : series)
    for (auto [x, y] : s.xy) {
      if (!(x > 0.0)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmax > xmin)) {
    xmin = 1e-3;
    xmax = 1.0;
  }
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  auto px = [&](double x) {
    return L + (R - L) * (std::log10(x) - lx0) / (lx1 - lx0);
  };
  auto py = [&](double y) { return B - (B - T) * (y - ymin) / (ymax - ymin); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (L + R) / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  // axes
  svg << "<line x1=\"" << L << "\" y1=\"" << B << "\" x2=\"" << R
      << "\" y2=\"" << B << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L
      << "\" y2=\"" << B << "\" stroke=\"black\"/>\n";
  // decade ticks
  for (int d = static_cast<int>(std::ceil(lx0));
       d <= static_cast<int>(std::floor(lx1)); ++d) {
    const double x = px(std::pow(10.0, d));
    svg << "<line x1=\"" << x << "\" y1=\"" << B << "\" x2=\"" << x
        << "\" y2=\"" << B + 6 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << B + 22
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">1e"
        << d << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = ymin + (ymax - ymin) * i / 4;
    svg << "<line x1=\"" << L - 6 << "\" y1=\"" << py(y) << "\" x2=\"" << L
        << "\" y2=\"" << py(y) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << L - 10 << "\" y=\"" << py(y) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << fmt(y) << "</text>\n";
  }
  // series
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % 8];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[i].xy)
      if (x > 0.0) svg << px(x) << "," << py(y) << " ";
    svg << "\"/>\n";
    svg << "<text x=\"" << R - 160 << "\" y=\"" << T + 18 + 16 * i
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
        << "\">" << series[i].label << "</text>\n";
  }
  // inflection markers
  for (const Marker& m : markers) {
    if (!(m.x > 0.0)) continue;
    const double x = px(m.x);
    svg << "<line x1=\"" << x << "\" y1=\"" << T << "\" x2=\"" << x
        << "\" y2=\"" << B
        << "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";
    svg << "<text x=\"" << x + 3 << "\" y=\"" << T + 12
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\">"
        << m.label << "</text>\n";
  }
  svg << "</svg>\n";
  auto out = open_out(path);
  out << svg.str();
}

// ---- curve helpers ----

struct CurvePoint {
  double lambda, value;
  bool valid;
};

std::vector<CurvePoint> sweep_curve(const Config& cfg, rabi_metric_id metric,
                                    int n, int workers, rabi_curve** handle_out) {
  std::vector<double> grid(cfg.lambda_points);
  check(rabi_log_grid(cfg.lambda_min, cfg.lambda_max, cfg.lambda_points,
                      grid.data()),
        "log_grid");
  rabi_sweep_params params{};
  params.metric = metric;
  params.A = cfg.A;
  params.n = n;
  params.t1 = cfg.t1();
  params.Delta = cfg.Delta;
  params.route = route_from_name(cfg.route);
  params.samples = cfg.samples;
  params.entropy_tol = cfg.entropy_tol;
  params.workers = workers;
  rabi_curve* curve = nullptr;
  check(rabi_run_sweep(&params, grid.data(), grid.size(), &curve), "run_sweep");
  std::vector<CurvePoint> points(rabi_curve_size(curve));
  for (std::size_t i = 0; i < points.size(); ++i) {
    int valid = 0;
    check(rabi_curve_point(curve, i, &points[i].lambda, &points[i].value, &valid),
          "curve_point");
    points[i].valid = valid != 0;
  }
  if (handle_out)
    *handle_out = curve;
  else
    rabi_curve_destroy(curve);
  return points;
}

void write_curve_csv(const fs::path& path, const std::vector<CurvePoint>& pts) {
  auto out = open_out(path);
  out << "lambda,value,valid\n";
  for (const CurvePoint& p : pts)
    out << fmt(p.lambda) << "," << (p.valid ? fmt(p.value) : "") << ","
        << (p.valid ? 1 : 0) << "\n";
}

// ---- subcommands ----

int cmd_evolve(const Config& cfg, const fs::path& out_dir, bool svg) {
  const double lambda = cfg.lambda;
  const double t_max = cfg.A > 0.0 && lambda > 0.0
                           ? cfg.t1()
                           : (lambda > 0.0 ? 20.0 * kPi / lambda : 10.0);
  rabi_evolution* ev = nullptr;
  check(rabi_evolution_create(cfg.A, cfg.n_list.front(), lambda, cfg.Delta,
                              t_max, route_from_name(cfg.route), &ev),
        "evolution_create");
  std::vector<std::array<double, 7>> rows(cfg.time_samples);
  rabi_status st = RABI_OK;
  for (int i = 0; i < cfg.time_samples && st == RABI_OK; ++i) {
    const double t = t_max * i / (cfg.time_samples - 1);
    auto& r = rows[i];
    r[0] = t;
    st = rabi_evolution_sample(ev, t, &r[1], &r[2], &r[3], &r[4], &r[5], &r[6]);
  }
  rabi_evolution_destroy(ev);
  check(st, "evolution_sample");

  const fs::path csv = out_dir / "evolve.csv";
  auto out = open_out(csv);
  out << "t,W_q,W_sc,W_fbrwa,S,q,p\n";
  for (const auto& r : rows) {
    out << fmt(r[0]);
    for (int c = 1; c < 7; ++c) out << "," << fmt(r[c]);
    out << "\n";
  }
  out.close();
  std::vector<std::string> files{csv.filename().string()};
  write_manifest(out_dir / "evolve_manifest.json", "evolve", cfg, files);
  if (svg) {
    // time series are linear in t; reuse the chart with a shifted axis is not
    // meaningful here, so SVG output is limited to sweep/inflection charts
    std::cerr << "note: --svg applies to sweep and inflection commands\n";
  }
  std::cout << "wrote " << csv.string() << "\n";
  return 0;
}

int cmd_sweep(const Config& cfg, const fs::path& out_dir, bool svg,
              int workers) {
  std::vector<std::string> files;
  // curves grouped per metric for charting / pairing
  std::map<std::string, std::map<int, std::vector<CurvePoint>>> all;
  for (const std::string& name : cfg.metrics) {
    const rabi_metric_id metric = metric_from_name(name);
    for (int n : cfg.n_list) {
      auto pts = sweep_curve(cfg, metric, n, workers, nullptr);
      const fs::path csv =
          out_dir / ("sweep_" + name + "_n" + std::to_string(n) + ".csv");
      write_curve_csv(csv, pts);
      files.push_back(csv.filename().string());
      all[name][n] = std::move(pts);
    }
  }

  // paired |numeric - analytic| columns when both variants were requested
  static const std::pair<const char*, const char*> kPairs[] = {
      {"spin_td_numeric", "spin_td_analytic"},
      {"field_td_numeric", "field_td_fbrwa"},
      {"correlation_numeric", "correlation_analytic"},
      {"entropy_numeric", "entropy_analytic"},
  };
  for (auto [num_name, ana_name] : kPairs) {
    if (!all.count(num_name) || !all.count(ana_name)) continue;
    for (int n : cfg.n_list) {
      const auto& a = all[num_name][n];
      const auto& b = all[ana_name][n];
      const fs::path csv = out_dir / (std::string("sweep_") + num_name +
                                      "_vs_" + ana_name + "_n" +
                                      std::to_string(n) + ".csv");
      auto out = open_out(csv);
      out << "lambda,numeric,analytic,abs_difference,valid\n";
      for (std::size_t i = 0; i < a.size(); ++i) {
        const bool ok = a[i].valid && b[i].valid;
        out << fmt(a[i].lambda) << "," << (a[i].valid ? fmt(a[i].value) : "")
            << "," << (b[i].valid ? fmt(b[i].value) : "") << ","
            << (ok ? fmt(std::abs(a[i].value - b[i].value)) : "") << ","
            << (ok ? 1 : 0) << "\n";
      }
      files.push_back(csv.filename().string());
    }
  }

  if (svg) {
    for (auto& [name, by_n] : all) {
      std::vector<Series> series;
      std::vector<Marker> markers;
      for (auto& [n, pts] : by_n) {
        Series s;
        s.label = name + " n=" + std::to_string(n);
        for (const CurvePoint& p : pts)
          if (p.valid) s.xy.push_back({p.lambda, p.value});
        series.push_back(std::move(s));
        double star = 0.0;
        int found = 0;
        if (rabi_inflection_taylor(n, cfg.t1(), &star, &found) == RABI_OK &&
            found)
          markers.push_back({"n=" + std::to_string(n), star});
      }
      const fs::path path = out_dir / ("sweep_" + name + ".svg");
      write_svg(path, name, series, markers);
      files.push_back(path.filename().string());
    }
  }
  write_manifest(out_dir / "sweep_manifest.json", "sweep", cfg, files);
  std::cout << "wrote " << files.size() << " files to " << out_dir.string()
            << "\n";
  return 0;
}

int cmd_inflection(const Config& cfg, const fs::path& out_dir, bool svg,
                   int workers) {
  const std::string metric_name = cfg.metrics.front();
  const rabi_metric_id metric = metric_from_name(metric_name);
  const fs::path csv = out_dir / "inflection.csv";
  auto out = open_out(csv);
  out << "n,lambda_star_numeric,lambda_star_taylor,lambda_star_large_n\n";
  std::vector<Series> series;
  std::vector<Marker> markers;
  for (int n : cfg.n_list) {
    rabi_curve* handle = nullptr;
    auto pts = sweep_curve(cfg, metric, n, workers, &handle);
    double star_num = 0.0, residual = 0.0;
    int found_num = 0;
    check(rabi_inflection_numeric(handle, cfg.window, &star_num, &found_num,
                                  &residual),
          "inflection_numeric");
    rabi_curve_destroy(handle);
    double star_taylor = 0.0;
    int found_taylor = 0;
    check(rabi_inflection_taylor(n, cfg.t1(), &star_taylor, &found_taylor),
          "inflection_taylor");
    double star_large = 0.0;
    const bool has_large =
        n >= 1 &&
        rabi_inflection_large_n(n, cfg.t1(), &star_large) == RABI_OK;

    out << n << "," << (found_num ? fmt(star_num) : "") << ","
        << (found_taylor ? fmt(star_taylor) : "") << ","
        << (has_large ? fmt(star_large) : "") << "\n";

    Series s;
    s.label = metric_name + " n=" + std::to_string(n);
    for (const CurvePoint& p : pts)
      if (p.valid) s.xy.push_back({p.lambda, p.value});
    series.push_back(std::move(s));
    if (found_num) markers.push_back({"n=" + std::to_string(n), star_num});
  }
  out.close();
  std::vector<std::string> files{csv.filename().string()};
  if (svg) {
    const fs::path path = out_dir / "inflection.svg";
    write_svg(path, metric_name + " with inflection points", series, markers);
    files.push_back(path.filename().string());
  }
  write_manifest(out_dir / "inflection_manifest.json", "inflection", cfg,
                 files);
  std::cout << "wrote " << csv.string() << "\n";
  return 0;
}

int cmd_scaling(const Config& cfg, const fs::path& out_dir, int workers) {
  const rabi_metric_id metric = metric_from_name(cfg.metrics.front());
  std::vector<double> ns, stars;
  json points = json::array();
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    rabi_curve* handle = nullptr;
    sweep_curve(cfg, metric, n, workers, &handle);
    double star = 0.0, residual = 0.0;
    int found = 0;
    check(rabi_inflection_numeric(handle, cfg.window, &star, &found, &residual),
          "inflection_numeric");
    rabi_curve_destroy(handle);
    if (!found) continue;
    ns.push_back(n);
    stars.push_back(star);
    points.push_back({{"n", n}, {"lambda_star", star}});
  }
  if (ns.size() < 4)
    throw CliError{kExitNumeric,
                   "scaling: fewer than 4 inflection points located"};
  double exponent = 0.0, prefactor = 0.0, residual = 0.0;
  check(rabi_fit_power_law(ns.data(), stars.data(), ns.size(), &exponent,
                           &prefactor, &residual),
        "fit_power_law");
  json report{{"metric", cfg.metrics.front()},
              {"exponent", exponent},
              {"prefactor", prefactor},
              {"residual", residual},
              {"points", points}};
  const fs::path path = out_dir / "scaling.json";
  auto out = open_out(path);
  out << report.dump(2) << "\n";
  out.close();
  write_manifest(out_dir / "scaling_manifest.json", "scaling", cfg,
                 {path.filename().string()});
  std::cout << "exponent " << fmt(exponent) << ", prefactor " << fmt(prefactor)
            << ", residual " << fmt(residual) << "\n";
  return 0;
}

int cmd_validate(const Config& cfg, const fs::path& out_dir) {
  json checks = json::array();
  bool all_pass = true;
  for (std::size_t i = 0; i < rabi_validate_count(); ++i) {
    char name[128];
    double measure = 0.0, threshold = 0.0;
    int pass = 0;
    check(rabi_validate_run(i, name, sizeof(name), &measure, &threshold, &pass),
          "validate_run");
    all_pass = all_pass && pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  (measure "
              << fmt(measure) << ", threshold " << fmt(threshold) << ")\n";
    checks.push_back({{"name", name},
                      {"measure", measure},
                      {"threshold", threshold},
                      {"pass", pass != 0}});
  }
  json report{{"checks", checks}, {"all_pass", all_pass}};
  auto out = open_out(out_dir / "validate.json");
  out << report.dump(2) << "\n";
  out.close();
  write_manifest(out_dir / "validate_manifest.json", "validate", cfg,
                 {"validate.json"});
  return all_pass ? 0 : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jaynes-Cummings semiclassical-limit toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path = ".";
  int workers_flag = 0;
  bool svg = false;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_path, "output directory");
  app.add_option("--workers", workers_flag, "worker thread count");
  app.add_flag("--svg", svg, "also render SVG charts");

  auto* sub_evolve = app.add_subcommand("evolve", "time-series evolution");
  auto* sub_sweep = app.add_subcommand("sweep", "metric curves over lambda");
  auto* sub_inflection =
      app.add_subcommand("inflection", "inflection-point table");
  auto* sub_scaling = app.add_subcommand("scaling", "power-law scaling fit");
  auto* sub_validate =
      app.add_subcommand("validate", "cross-method consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    Config cfg = load_config(config_path);
    cfg.validate();
    const int workers = resolve_workers(workers_flag, cfg);
    fs::path out_dir(out_path);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
      throw CliError{kExitUsage, "cannot create output directory: " + out_path};

    if (sub_evolve->parsed()) return cmd_evolve(cfg, out_dir, svg);
    if (sub_sweep->parsed()) return cmd_sweep(cfg, out_dir, svg, workers);
    if (sub_inflection->parsed())
      return cmd_inflection(cfg, out_dir, svg, workers);
    if (sub_scaling->parsed()) return cmd_scaling(cfg, out_dir, workers);
    if (sub_validate->parsed()) return cmd_validate(cfg, out_dir);
    return kExitUsage;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
