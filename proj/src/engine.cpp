#include "etac/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "etac/analysis.hpp"
#include "etac/errors.hpp"

namespace etac {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::TriggerBroadcast: return "trigger";
    case EventKind::CascadeBroadcast: return "cascade";
    case EventKind::TopologySwitch: return "switch";
    case EventKind::PeriodicSample: return "periodic";
  }
  return "trigger";
}

bool is_broadcast(EventKind kind) { return kind != EventKind::TopologySwitch; }

Simulator::Simulator(std::vector<WeightedDigraph> graphs,
                     std::vector<std::pair<double, int>> schedule, Vector x0,
                     TriggerParams params, EngineOptions opts)
    : g_(graphs.at(schedule.at(0).second)),
      graphs_(std::move(graphs)),
      schedule_(std::move(schedule)),
      next_switch_(1),
      params_(std::move(params)),
      opts_(opts),
      x_(x0),
      xhat_(std::move(x0)) {
  const int n = static_cast<int>(x_.size());
  if (g_.size() != n) throw ValidationError("initial condition length does not match graph size");
  if (schedule_.front().first != 0.0)
    throw ValidationError("switching schedule must start at time 0");
  for (std::size_t k = 1; k < schedule_.size(); ++k)
    if (!(schedule_[k].first > schedule_[k - 1].first))
      throw ValidationError("switching schedule times must be strictly increasing");
  // All agents start as if they had broadcast their initial state at t = 0.
  t_last_.assign(n, 0.0);
  gen_.assign(n, 0);
  fired_this_instant_.assign(n, 0);
  snap_ = make_snapshot(xhat_, g_, params_);
}

Simulator::Simulator(const WeightedDigraph& g, Vector x0, TriggerParams params,
                     EngineOptions opts)
    : Simulator({g}, {{0.0, 0}}, std::move(x0), std::move(params), opts) {}

AgentState Simulator::agent(int i) const {
  return AgentState{x_[i], xhat_[i], xhat_[i] - x_[i], snap_.zhat[i], t_last_[i]};
}

void Simulator::set_agent_state(int i, double x, double xhat) {
  x_[i] = x;
  xhat_[i] = xhat;
  for (int k = 0; k < agent_count(); ++k) refresh_agent(k);
}

void Simulator::refresh_agent(int i) {
  snap_.phi[i] = phi(i, xhat_, g_);
  snap_.threshold[i] = trigger_threshold(i, xhat_, g_, params_.sigma[i]);
  snap_.zhat[i] = zhat(i, xhat_, g_);
}

void Simulator::schedule_crossing(int i) {
  ++gen_[i];
  const double delta = next_crossing(error(i), snap_.zhat[i], snap_.threshold[i]);
  if (std::isfinite(delta)) queue_.push({t_now_ + delta, i, gen_[i]});
}

double Simulator::next_queue_time() {
  while (!queue_.empty() && queue_.top().gen != gen_[queue_.top().agent]) queue_.pop();
  return queue_.empty() ? kInf : queue_.top().t;
}

Simulator::QueueEntry Simulator::pop_queue() {
  next_queue_time();
  const QueueEntry top = queue_.top();
  queue_.pop();
  return top;
}

void Simulator::begin_instant(double t) {
  if (t != instant_t_) {
    instant_t_ = t;
    std::fill(fired_this_instant_.begin(), fired_this_instant_.end(), 0);
  }
}

void Simulator::note_broadcast(double t) {
  recent_broadcasts_.push_back(t);
  while (!recent_broadcasts_.empty() && recent_broadcasts_.front() <= t - 1.0)
    recent_broadcasts_.pop_front();
  if (static_cast<double>(recent_broadcasts_.size()) > opts_.zeno_ceiling) {
    std::ostringstream msg;
    msg << "zeno guard: more than " << opts_.zeno_ceiling
        << " broadcasts within one time unit at t = " << t;
    throw ZenoGuardError(msg.str());
  }
}

void Simulator::step_to(double t_target) {
  if (t_target < t_now_) throw PreconditionError("step_to cannot move backwards in time");
  const double t_event = next_queue_time();
  if (t_event > t_now_ && t_event < t_target) {
    std::ostringstream msg;
    msg << "step_to(" << t_target << ") skips a crossing scheduled at t = " << t_event;
    throw PreconditionError(msg.str());
  }
  const double delta = t_target - t_now_;
  if (delta > 0.0)
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] += delta * snap_.zhat[i];
  t_now_ = t_target;
}

std::vector<int> Simulator::process_broadcast(int initiator, double t, bool forced) {
  if (t != t_now_) throw PreconditionError("process_broadcast requires t == current time");
  begin_instant(t);
  if (fired_this_instant_[initiator]) {
    if (forced) return {};
    std::ostringstream msg;
    msg << "agent " << initiator + 1 << " would broadcast twice at t = " << t;
    throw CascadeOverflowError(msg.str());
  }

  std::set<int> pending{initiator};
  std::map<int, int> cause;
  std::set<int> affected;
  std::vector<int> result;

  while (!pending.empty()) {
    const int b = *pending.begin();
    pending.erase(pending.begin());

    const double slack = error(b) * error(b) - snap_.threshold[b];
    xhat_[b] = x_[b];
    t_last_[b] = t;
    fired_this_instant_[b] = 1;
    result.push_back(b);
    note_broadcast(t);

    SimEvent ev;
    ev.t = t;
    ev.agent = b;
    ev.trigger_slack = slack;
    if (b == initiator) {
      ev.kind = EventKind::TriggerBroadcast;
      ev.forced = forced;
    } else {
      ev.kind = EventKind::CascadeBroadcast;
      ev.cause = cause.at(b);
    }
    log_.push_back(ev);

    affected.insert(b);
    // The broadcast is delivered to in-neighbors; the forced-rebroadcast
    // window is checked against their pre-update last-broadcast times.
    for (const auto& [r, w] : g_.in_edges(b)) {
      affected.insert(r);
      if (opts_.cooldown && cooldown_rebroadcast(t, t_last_[r], params_.epsilon[r])) {
        if (fired_this_instant_[r]) {
          std::ostringstream msg;
          msg << "agent " << r + 1 << " re-entered the rebroadcast window at t = " << t;
          throw CascadeOverflowError(msg.str());
        }
        if (pending.insert(r).second) cause.emplace(r, b);
      }
    }
    // The updated xhat_b shifts phi/threshold for b and its receivers; a
    // receiver whose trigger jumps past its boundary fires at this same
    // instant.
    refresh_agent(b);
    for (const auto& [r, w] : g_.in_edges(b)) refresh_agent(r);
    for (const auto& [r, w] : g_.in_edges(b)) {
      if (fired_this_instant_[r] || pending.count(r)) continue;
      if (should_broadcast(error(r), snap_.phi[r], snap_.threshold[r])) {
        if (pending.insert(r).second) cause.emplace(r, b);
      }
    }
  }

  for (int i : affected) schedule_crossing(i);
  return result;
}

void Simulator::apply_topology_switch(double t, const WeightedDigraph& g_new) {
  if (t != t_now_) throw PreconditionError("apply_topology_switch requires t == current time");
  if (g_new.size() != agent_count())
    throw ValidationError("topology switch must preserve the vertex set");
  if (!is_weight_balanced(g_new))
    throw ValidationError("topology switch rejected: new graph is not weight-balanced");

  std::vector<int> forced;
  for (int i = 0; i < agent_count(); ++i)
    if (g_.out_neighbors(i) != g_new.out_neighbors(i) ||
        g_.in_neighbors(i) != g_new.in_neighbors(i))
      forced.push_back(i);

  g_ = g_new;
  for (int i = 0; i < agent_count(); ++i) refresh_agent(i);

  SimEvent ev;
  ev.t = t;
  ev.kind = EventKind::TopologySwitch;
  log_.push_back(ev);

  begin_instant(t);
  for (int i : forced) process_broadcast(i, t, /*forced=*/true);
  // Weight-only changes can shrink thresholds without touching neighbor
  // sets; anyone pushed past the boundary fires now, prescribed by the
  // switch rather than by an analytic crossing.
  for (int i = 0; i < agent_count(); ++i)
    if (!fired_this_instant_[i] &&
        should_broadcast(error(i), snap_.phi[i], snap_.threshold[i]))
      process_broadcast(i, t, /*forced=*/true);
  for (int i = 0; i < agent_count(); ++i) schedule_crossing(i);
}

void Simulator::sample_into(Trajectory& traj, double t) {
  if (!traj.samples.empty() && traj.samples.back().t == t) return;
  traj.samples.push_back({t, x_, xhat_, lyapunov(x_)});
}

Trajectory Simulator::run(double horizon) {
  if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
  Trajectory traj;
  for (int i = 0; i < agent_count(); ++i) schedule_crossing(i);
  sample_into(traj, 0.0);

  long grid_k = 1;
  const double dt = opts_.sample_dt;
  while (true) {
    const double t_event = next_queue_time();
    const double t_switch =
        next_switch_ < schedule_.size() ? schedule_[next_switch_].first : kInf;
    const double t_next = std::min({t_event, t_switch, horizon});

    while (dt > 0.0 && static_cast<double>(grid_k) * dt < t_next) {
      const double tg = static_cast<double>(grid_k) * dt;
      step_to(tg);
      sample_into(traj, tg);
      ++grid_k;
    }
    step_to(t_next);

    if (t_event == t_next && t_event <= t_switch) {
      const QueueEntry entry = pop_queue();
      process_broadcast(entry.agent, t_next);
    } else if (t_switch == t_next && std::isfinite(t_switch)) {
      const int idx = schedule_[next_switch_].second;
      ++next_switch_;
      apply_topology_switch(t_switch, graphs_.at(idx));
    } else {
      sample_into(traj, horizon);
      break;
    }
    // One sample per instant, once everything scheduled for it has run.
    if (next_queue_time() > t_now_ &&
        (next_switch_ >= schedule_.size() || schedule_[next_switch_].first > t_now_))
      sample_into(traj, t_now_);
  }

  traj.events = log_;
  return traj;
}

Trajectory run_event_driven(const ScenarioConfig& cfg) {
  const TriggerParams params = make_trigger_params(cfg.graphs, cfg.sigma, cfg.epsilon);
  EngineOptions opts;
  opts.cooldown = cfg.cooldown;
  opts.sample_dt = cfg.sample_dt;
  opts.zeno_ceiling = cfg.zeno_ceiling;
  Simulator sim(cfg.graphs, cfg.schedule, cfg.x0, params, opts);
  return sim.run(cfg.horizon);
}

}  // namespace etac
