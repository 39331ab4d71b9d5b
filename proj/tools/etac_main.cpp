// etac: run and analyze event-triggered average-consensus scenarios.
//
// Subcommands:
//   run       simulate one scenario, write trace + metrics
//   sweep     grid over sigma and/or h, one trace+metrics per point
//   validate  load a scenario and report the checks
//   spectral  print lambda2 / lambdaN / A / guaranteed rate for a graph

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "etac/analysis.hpp"
#include "etac/errors.hpp"
#include "etac/format.hpp"
#include "etac/periodic.hpp"
#include "etac/scenario_io.hpp"
#include "etac/trace.hpp"

namespace fs = std::filesystem;
using namespace etac;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
  std::string scenario_path;
  std::string out_dir = ".";
  std::optional<std::string> mode;
  std::optional<double> h;
  std::optional<double> horizon;
  std::optional<double> sigma;
  bool no_cooldown = false;
  bool allow_unbalanced = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_out, bool grid_owns_sigma_h = false) {
  cmd->set_help_flag("--help", "print help");  // frees -h for the sampling period
  cmd->add_option("scenario", flags.scenario_path, "scenario file")->required();
  cmd->add_option("--mode", flags.mode, "event | periodic-event | periodic-laplacian");
  if (!grid_owns_sigma_h) {
    cmd->add_option("--h", flags.h, "sampling period for the periodic modes");
    cmd->add_option("--sigma", flags.sigma, "override sigma for every agent");
  }
  cmd->add_option("--horizon", flags.horizon, "simulation horizon");
  cmd->add_flag("--no-cooldown", flags.no_cooldown,
                "disable the forced-rebroadcast trigger (zeno guard stays armed)");
  cmd->add_flag("--allow-unbalanced", flags.allow_unbalanced,
                "demote the weight-balance error to a warning");
  if (with_out) cmd->add_option("--out", flags.out_dir, "output directory (default .)");
}

LoadOptions to_load_options(const CommonFlags& flags) {
  LoadOptions opts;
  opts.allow_unbalanced = flags.allow_unbalanced;
  if (flags.mode) {
    const auto mode = parse_run_mode(*flags.mode);
    if (!mode) throw ValidationError("unknown mode '" + *flags.mode + "'");
    opts.mode = *mode;
  }
  opts.h = flags.h;
  opts.horizon = flags.horizon;
  opts.sigma = flags.sigma;
  if (flags.no_cooldown) opts.cooldown = false;
  return opts;
}

std::optional<RateCertificate> try_certificate(const ScenarioConfig& cfg) {
  if (cfg.graphs.size() != 1) return std::nullopt;  // no rate claim for switching runs
  try {
    const TriggerParams params = make_trigger_params(cfg.graphs, cfg.sigma, cfg.epsilon);
    return rate_certificate(cfg.graphs.front(), params);
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct RunArtifacts {
  RunMetrics metrics;
  std::string trace;
  std::string metrics_doc;
  double empirical = 0.0;
};

RunArtifacts execute(const ScenarioConfig& cfg) {
  const Trajectory traj = run_scenario(cfg);
  RunArtifacts art;
  art.metrics = compute_metrics(traj, cfg.n);
  art.empirical = empirical_rate(traj);
  art.trace = trace_csv(traj, cfg.n);
  art.metrics_doc = metrics_json(cfg, art.metrics, try_certificate(cfg), art.empirical);
  return art;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

int cmd_run(const CommonFlags& flags) {
  const ScenarioConfig cfg = load_scenario(flags.scenario_path, to_load_options(flags));
  const RunArtifacts art = execute(cfg);

  fs::create_directories(flags.out_dir);
  const fs::path trace_path = fs::path(flags.out_dir) / (cfg.name + ".trace.csv");
  const fs::path metrics_path = fs::path(flags.out_dir) / (cfg.name + ".metrics.json");
  write_file(trace_path, art.trace);
  write_file(metrics_path, art.metrics_doc);

  std::cout << "scenario            " << cfg.name << " (" << to_string(cfg.mode) << ", horizon "
            << format_double(cfg.horizon) << ")\n"
            << "events              " << art.metrics.event_count_total << "\n"
            << "final disagreement  " << format_double(art.metrics.final_disagreement) << "\n";
  if (std::isfinite(art.empirical))
    std::cout << "empirical rate      " << format_double(art.empirical) << "\n";
  if (const auto cert = try_certificate(cfg))
    std::cout << "certificate rate    " << format_double(cert->rate) << "\n";
  std::cout << "trace               " << trace_path.string() << "\n"
            << "metrics             " << metrics_path.string() << "\n";
  return kExitOk;
}

std::string grid_label(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

int cmd_sweep(const CommonFlags& flags, const std::vector<double>& sigmas,
              const std::vector<double>& hs) {
  if (sigmas.empty() && hs.empty())
    throw ValidationError("sweep needs a --sigma and/or --h grid");

  struct Point {
    std::optional<double> sigma;
    std::optional<double> h;
    std::string label;
  };
  std::vector<Point> points;
  const std::vector<std::optional<double>> sigma_axis =
      sigmas.empty() ? std::vector<std::optional<double>>{std::nullopt}
                     : [&] {
                         std::vector<std::optional<double>> v;
                         for (double s : sigmas) v.emplace_back(s);
                         return v;
                       }();
  const std::vector<std::optional<double>> h_axis =
      hs.empty() ? std::vector<std::optional<double>>{std::nullopt}
                 : [&] {
                     std::vector<std::optional<double>> v;
                     for (double h : hs) v.emplace_back(h);
                     return v;
                   }();
  for (const auto& s : sigma_axis)
    for (const auto& h : h_axis) {
      Point p{s, h, {}};
      std::ostringstream label;
      if (s) label << "s" << grid_label(*s);
      if (s && h) label << "_";
      if (h) label << "h" << grid_label(*h);
      p.label = label.str();
      points.push_back(p);
    }

  struct Outcome {
    bool ok = false;
    std::string error;
    RunArtifacts art;
    ScenarioConfig cfg;
  };
  // Independent runs: each point loads its own config and shares no
  // mutable state, so they can execute concurrently.
  std::vector<std::future<Outcome>> futures;
  for (const Point& p : points) {
    futures.push_back(std::async(std::launch::async, [p, &flags]() {
      Outcome out;
      try {
        LoadOptions opts = to_load_options(flags);
        if (p.sigma) opts.sigma = *p.sigma;
        if (p.h) opts.h = *p.h;
        out.cfg = load_scenario(flags.scenario_path, opts);
        out.art = execute(out.cfg);
        out.ok = true;
      } catch (const std::exception& err) {
        out.error = err.what();
      }
      return out;
    }));
  }

  fs::create_directories(flags.out_dir);
  std::ostringstream summary;
  summary << "label,sigma,h,status,events,final_disagreement,empirical_rate\n";
  std::size_t failures = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Point& p = points[k];
    Outcome out = futures[k].get();
    summary << p.label << "," << (p.sigma ? format_double(*p.sigma) : "") << ","
            << (p.h ? format_double(*p.h) : "") << ",";
    if (out.ok) {
      const std::string stem = out.cfg.name + "." + p.label;
      write_file(fs::path(flags.out_dir) / (stem + ".trace.csv"), out.art.trace);
      write_file(fs::path(flags.out_dir) / (stem + ".metrics.json"), out.art.metrics_doc);
      summary << "ok," << out.art.metrics.event_count_total << ","
              << format_double(out.art.metrics.final_disagreement) << ","
              << (std::isfinite(out.art.empirical) ? format_double(out.art.empirical) : "");
      std::cout << p.label << ": events " << out.art.metrics.event_count_total
                << ", final disagreement "
                << format_double(out.art.metrics.final_disagreement) << "\n";
    } else {
      ++failures;
      std::string flat = out.error;
      for (char& c : flat)
        if (c == ',' || c == '\n') c = ';';
      summary << "error: " << flat << ",,,";
      std::cout << p.label << ": FAILED (" << out.error << ")\n";
    }
    summary << "\n";
  }
  const fs::path summary_path = fs::path(flags.out_dir) / "sweep_summary.csv";
  write_file(summary_path, summary.str());
  std::cout << "summary             " << summary_path.string() << "\n";
  if (failures == points.size()) throw Error("every sweep point failed");
  return kExitOk;
}

int cmd_validate(const CommonFlags& flags) {
  const ScenarioConfig cfg = load_scenario(flags.scenario_path, to_load_options(flags));
  std::cout << "ok: " << cfg.name << "\n"
            << "  agents   " << cfg.n << "\n"
            << "  mode     " << to_string(cfg.mode) << "\n"
            << "  graphs   " << cfg.graphs.size() << "\n"
            << "  horizon  " << format_double(cfg.horizon) << "\n";
  for (std::size_t k = 0; k < cfg.graphs.size(); ++k)
    std::cout << "  graph " << k + 1 << ": " << cfg.graphs[k].edges().size() << " edges, "
              << (is_weight_balanced(cfg.graphs[k]) ? "weight-balanced" : "NOT balanced") << ", "
              << (is_strongly_connected(cfg.graphs[k]) ? "strongly connected"
                                                       : "not strongly connected on its own")
              << "\n";
  return kExitOk;
}

int cmd_spectral(const CommonFlags& flags) {
  const ScenarioConfig cfg = load_scenario(flags.scenario_path, to_load_options(flags));
  for (std::size_t k = 0; k < cfg.graphs.size(); ++k) {
    const WeightedDigraph& g = cfg.graphs[k];
    std::cout << "graph " << k + 1 << "\n";
    if (!is_strongly_connected(g)) {
      std::cout << "  not strongly connected; spectral gap is zero\n";
      continue;
    }
    const SpectralData spec = spectral(g);
    std::cout << "  lambda2  " << format_double(spec.lambda2) << "\n"
              << "  lambdaN  " << format_double(spec.lambdaN) << "\n";
    try {
      const TriggerParams params = make_trigger_params({g}, cfg.sigma, cfg.epsilon);
      const RateCertificate cert = rate_certificate(g, params);
      std::cout << "  A        " << format_double(cert.A) << "\n"
                << "  rate     " << format_double(cert.rate) << " (sigma_max "
                << format_double(cert.sigma_max) << ")\n";
    } catch (const Error& err) {
      std::cout << "  certificate unavailable: " << err.what() << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-triggered average consensus simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, validate_flags, spectral_flags;
  std::vector<double> sweep_sigmas, sweep_hs;

  CLI::App* run = app.add_subcommand("run", "simulate a scenario");
  add_common(run, run_flags, true);
  CLI::App* sweep = app.add_subcommand("sweep", "run a sigma/h parameter grid");
  add_common(sweep, sweep_flags, true, /*grid_owns_sigma_h=*/true);
  sweep->add_option("--sigma", sweep_sigmas, "sigma grid values")
      ->delimiter(',')
      ->allow_extra_args(false);
  sweep->add_option("--h", sweep_hs, "h grid values")->delimiter(',')->allow_extra_args(false);
  CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
  add_common(validate, validate_flags, false);
  CLI::App* spectral_cmd = app.add_subcommand("spectral", "print spectral data and certificate");
  add_common(spectral_cmd, spectral_flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_sigmas, sweep_hs);
    if (validate->parsed()) return cmd_validate(validate_flags);
    if (spectral_cmd->parsed()) return cmd_spectral(spectral_flags);
  } catch (const ValidationError& err) {
    std::cerr << "validation error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
