#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <vector>

#include "etac/scenario.hpp"
#include "etac/triggers.hpp"

namespace etac {

enum class EventKind { TriggerBroadcast, CascadeBroadcast, TopologySwitch, PeriodicSample };

std::string to_string(EventKind kind);

/// True for the kinds that represent an actual broadcast by an agent
/// (everything except TopologySwitch).
bool is_broadcast(EventKind kind);

struct SimEvent {
  double t = 0.0;
  EventKind kind = EventKind::TriggerBroadcast;
  int agent = -1;                // -1 for TopologySwitch
  std::optional<int> cause;      // broadcaster that induced a cascade
  bool forced = false;           // prescribed by a topology change, not a trigger crossing
  double trigger_slack = 0.0;    // e^2 - threshold at fire time (diagnostic)

  bool operator==(const SimEvent&) const = default;
};

using EventLog = std::vector<SimEvent>;

struct TrajectorySample {
  double t = 0.0;
  Vector x;
  Vector xhat;
  double V = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // t = 0, the logging grid, and every event instant
  EventLog events;
};

/// Live view of one agent. The error is derived, so e = xhat - x holds
/// identically, and u equals zhat after every event-processing step.
struct AgentState {
  double x = 0.0;
  double xhat = 0.0;
  double e = 0.0;
  double u = 0.0;
  double t_last = 0.0;
};

struct EngineOptions {
  bool cooldown = true;        // forced-rebroadcast trigger of the broadcast law
  double sample_dt = 0.01;     // trajectory logging grid
  double zeno_ceiling = 1e5;   // max broadcasts inside any sliding unit-time window
};

/// Exact event-driven execution of the closed loop: states are piecewise
/// linear between broadcasts, so the engine advances analytically from
/// event to event, with crossing times solved in closed form.
///
/// Within one time instant, independent crossings are processed in
/// ascending agent id and each broadcast runs the reception cascade to
/// its fixed point before the next is popped. A single run is strictly
/// single-threaded; distinct Simulator instances share nothing.
class Simulator {
 public:
  Simulator(std::vector<WeightedDigraph> graphs, std::vector<std::pair<double, int>> schedule,
            Vector x0, TriggerParams params, EngineOptions opts = {});
  Simulator(const WeightedDigraph& g, Vector x0, TriggerParams params, EngineOptions opts = {});

  /// Advances every agent linearly: x_i += (t_target - t_now) u_i.
  /// Throws PreconditionError if a scheduled crossing lies strictly
  /// inside (t_now, t_target).
  void step_to(double t_target);

  /// Fires agent `initiator` at time t (== current time), delivers the
  /// broadcast to its in-neighbors, and iterates the reception cascade
  /// (forced-rebroadcast window plus trigger discontinuities) to a fixed
  /// point. Returns every agent that broadcast at this instant because
  /// of this call, in processing order. `forced` marks a broadcast
  /// prescribed by a topology change; a forced initiator that already
  /// broadcast at this instant is skipped, anything else broadcasting
  /// twice in one instant raises CascadeOverflowError.
  std::vector<int> process_broadcast(int initiator, double t, bool forced = false);

  /// Switches the active graph at time t (== current time). Every agent
  /// whose in- or out-neighbor set changed broadcasts, entering the
  /// normal cascade closure; all controls and crossings are recomputed
  /// against the new graph. Rejects non-weight-balanced graphs.
  void apply_topology_switch(double t, const WeightedDigraph& g_new);

  /// Runs the full event-driven simulation over [0, horizon]. Single
  /// shot: call on a freshly constructed Simulator.
  Trajectory run(double horizon);

  double time() const { return t_now_; }
  int agent_count() const { return static_cast<int>(x_.size()); }
  AgentState agent(int i) const;
  const WeightedDigraph& graph() const { return g_; }
  const TriggerParams& params() const { return params_; }
  const EventLog& log() const { return log_; }

  /// Test instrumentation: overrides an agent's last-broadcast time.
  void set_last_broadcast(int i, double t) { t_last_[i] = t; }
  /// Test instrumentation: places an agent at an arbitrary state/broadcast
  /// pair and refreshes every cached trigger quantity.
  void set_agent_state(int i, double x, double xhat);

 private:
  struct QueueEntry {
    double t;
    int agent;
    std::uint64_t gen;
    bool operator>(const QueueEntry& o) const {
      if (t != o.t) return t > o.t;
      return agent > o.agent;
    }
  };

  double error(int i) const { return xhat_[i] - x_[i]; }
  void refresh_agent(int i);
  void schedule_crossing(int i);
  double next_queue_time();
  QueueEntry pop_queue();
  void begin_instant(double t);
  void note_broadcast(double t);
  void sample_into(Trajectory& traj, double t);

  WeightedDigraph g_;
  std::vector<WeightedDigraph> graphs_;
  std::vector<std::pair<double, int>> schedule_;
  std::size_t next_switch_ = 0;
  TriggerParams params_;
  EngineOptions opts_;

  double t_now_ = 0.0;
  Vector x_;
  Vector xhat_;
  Vector t_last_;
  TriggerSnapshot snap_;  // phi/threshold/zhat, kept consistent with xhat_ and g_

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> queue_;
  std::vector<std::uint64_t> gen_;

  double instant_t_ = -1.0;
  std::vector<char> fired_this_instant_;

  std::deque<double> recent_broadcasts_;
  EventLog log_;
};

/// Builds trigger parameters for the scenario (defaulting epsilon when
/// unset), runs the event-driven mode, and returns the trajectory.
Trajectory run_event_driven(const ScenarioConfig& cfg);

}  // namespace etac
