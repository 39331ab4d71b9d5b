#include "etac/periodic.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "etac/analysis.hpp"
#include "etac/errors.hpp"
#include "etac/triggers.hpp"

namespace etac {

namespace {

const WeightedDigraph& static_graph(const ScenarioConfig& cfg) {
  if (cfg.graphs.size() != 1)
    throw ValidationError("periodic modes require a static (non-switching) graph");
  return cfg.graphs.front();
}

void require_valid_period(const PeriodicConfig& pc) {
  if (!(pc.h > 0.0)) throw ValidationError("sampling period h must be positive");
}

struct PeriodicRunner {
  const WeightedDigraph& g;
  double horizon;
  double sample_dt;
  Vector x;
  Vector xhat;
  Trajectory traj;
  long grid_k = 1;
  Vector u;

  PeriodicRunner(const WeightedDigraph& graph, Vector x0, double horizon_, double sample_dt_)
      : g(graph), horizon(horizon_), sample_dt(sample_dt_), x(x0), xhat(std::move(x0)) {
    u.assign(x.size(), 0.0);
    refresh_controls();
  }

  void refresh_controls() {
    for (int i = 0; i < g.size(); ++i) u[i] = zhat(i, xhat, g);
  }

  void sample(double t, const Vector& state) {
    if (!traj.samples.empty() && traj.samples.back().t == t) return;
    traj.samples.push_back({t, state, xhat, lyapunov(state)});
  }

  // Advances one period, logging grid points as pure evaluations of the
  // linear segment so the dynamics do not depend on the logging grid.
  void advance(double t_from, double t_to) {
    while (sample_dt > 0.0 && static_cast<double>(grid_k) * sample_dt <= t_from) ++grid_k;
    while (sample_dt > 0.0 && static_cast<double>(grid_k) * sample_dt < t_to) {
      const double tg = static_cast<double>(grid_k) * sample_dt;
      Vector xg(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) xg[i] = x[i] + (tg - t_from) * u[i];
      sample(tg, xg);
      ++grid_k;
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += (t_to - t_from) * u[i];
  }
};

}  // namespace

double periodic_event_h_bound(const WeightedDigraph& g, double sigma_max) {
  const DegreeData d = degree_data(g);
  return (1.0 - sigma_max) / (4.0 * d.w_max * d.n_out_max);
}

Trajectory run_periodic_event(const ScenarioConfig& cfg, const PeriodicConfig& pc) {
  const WeightedDigraph& g = static_graph(cfg);
  require_valid_period(pc);
  const TriggerParams params = make_trigger_params(cfg.graphs, cfg.sigma, cfg.epsilon);

  const DegreeData deg = degree_data(g);
  const double margin = params.sigma_max() + 4.0 * pc.h * deg.w_max * deg.n_out_max;
  if (margin >= 1.0) {
    std::ostringstream msg;
    msg << "sampling period check: sigma_max + 4 h w_max |N_max^out| = " << margin
        << " >= 1; convergence is not guaranteed (h below "
        << periodic_event_h_bound(g, params.sigma_max()) << " would satisfy it)";
    if (pc.sufficiency_check) throw ValidationError(msg.str());
    std::cerr << "warning: " << msg.str() << "\n";
  }

  PeriodicRunner run(g, cfg.x0, cfg.horizon, cfg.sample_dt);
  run.sample(0.0, run.x);
  for (long ell = 0;; ++ell) {
    const double t = static_cast<double>(ell) * pc.h;
    if (t >= cfg.horizon) break;
    // Evaluate every trigger against the pre-instant broadcast states,
    // then apply all broadcasts at once, then update all controls.
    std::vector<int> firing;
    for (int i = 0; i < g.size(); ++i) {
      const double e_i = run.xhat[i] - run.x[i];
      const double phi_i = phi(i, run.xhat, g);
      const double threshold_i = trigger_threshold(i, run.xhat, g, params.sigma[i]);
      if (should_broadcast(e_i, phi_i, threshold_i)) {
        firing.push_back(i);
        SimEvent ev;
        ev.t = t;
        ev.kind = EventKind::TriggerBroadcast;
        ev.agent = i;
        ev.trigger_slack = e_i * e_i - threshold_i;
        run.traj.events.push_back(ev);
      }
    }
    for (int i : firing) run.xhat[i] = run.x[i];
    run.refresh_controls();
    run.sample(t, run.x);
    // Target the next instant's exact timestamp; accumulating t + h
    // drifts off the l*h grid in the last bit.
    run.advance(t, std::min(static_cast<double>(ell + 1) * pc.h, cfg.horizon));
  }
  run.sample(cfg.horizon, run.x);
  return run.traj;
}

Trajectory run_periodic_laplacian(const ScenarioConfig& cfg, const PeriodicConfig& pc) {
  const WeightedDigraph& g = static_graph(cfg);
  require_valid_period(pc);
  const DegreeData deg = degree_data(g);
  if (!(pc.h < 1.0 / deg.d_max_out)) {
    std::ostringstream msg;
    msg << "periodic Laplacian consensus requires h < 1/d^max = " << 1.0 / deg.d_max_out
        << ", got h = " << pc.h;
    throw ValidationError(msg.str());
  }

  PeriodicRunner run(g, cfg.x0, cfg.horizon, cfg.sample_dt);
  run.sample(0.0, run.x);
  for (long ell = 0;; ++ell) {
    const double t = static_cast<double>(ell) * pc.h;
    if (t >= cfg.horizon) break;
    for (int i = 0; i < g.size(); ++i) {
      run.xhat[i] = run.x[i];
      SimEvent ev;
      ev.t = t;
      ev.kind = EventKind::PeriodicSample;
      ev.agent = i;
      run.traj.events.push_back(ev);
    }
    run.refresh_controls();  // u = -L x
    run.sample(t, run.x);
    run.advance(t, std::min(static_cast<double>(ell + 1) * pc.h, cfg.horizon));
  }
  run.sample(cfg.horizon, run.x);
  return run.traj;
}

Trajectory run_scenario(const ScenarioConfig& cfg) {
  switch (cfg.mode) {
    case RunMode::EventDriven:
      return run_event_driven(cfg);
    case RunMode::PeriodicEvent: {
      if (!cfg.h) throw ValidationError("periodic-event mode requires a sampling period h");
      PeriodicConfig pc{*cfg.h, PeriodicMode::PeriodicEventTriggered, cfg.sufficiency_check};
      return run_periodic_event(cfg, pc);
    }
    case RunMode::PeriodicLaplacian: {
      if (!cfg.h) throw ValidationError("periodic-laplacian mode requires a sampling period h");
      PeriodicConfig pc{*cfg.h, PeriodicMode::PeriodicLaplacian, cfg.sufficiency_check};
      return run_periodic_laplacian(cfg, pc);
    }
  }
  throw ValidationError("unknown run mode");
}

}  // namespace etac
