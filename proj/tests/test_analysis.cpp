#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "etac/analysis.hpp"
#include "etac/engine.hpp"
#include "etac/errors.hpp"
#include "etac/scenario_io.hpp"
#include "test_support.hpp"

using namespace etac;
using namespace etac::test;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("lyapunov disagreement") {
  CHECK(lyapunov(Vector(7, 3.25)) == 0.0);
  CHECK(lyapunov(fig_x0()) == doctest::Approx(3.4).epsilon(1e-15));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = random_vector(rng, 6);
    Vector doubled(x);
    for (double& v : doubled) v *= 2.0;
    CHECK(lyapunov(doubled) == doctest::Approx(4.0 * lyapunov(x)).epsilon(1e-14));
  }
}

TEST_CASE("rate certificate") {
  const WeightedDigraph pair(2, {{0, 1, 1.0}, {1, 0, 1.0}});
  const TriggerParams params = make_trigger_params({pair}, Vector(2, 0.5));
  const RateCertificate cert = rate_certificate(pair, params);
  CHECK(cert.lambda2 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cert.lambdaN == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cert.d_min_out == 1.0);
  CHECK(cert.sigma_max == 0.5);
  // A = (1/4)(1 + sqrt(1/2))^2 and rate = -1/(4A).
  CHECK(std::abs(cert.A - 0.72855339059327373) < 1e-12);
  CHECK(std::abs(cert.rate - -0.34314575050761981) < 1e-12);

  // The guaranteed rate vanishes as sigma_max approaches one.
  const TriggerParams nearly_one = make_trigger_params({pair}, Vector(2, 1.0 - 1e-9));
  CHECK(std::abs(rate_certificate(pair, nearly_one).rate) < 1e-8);

  const WeightedDigraph g2 = fig2_graph();
  const RateCertificate f2 = rate_certificate(g2, make_trigger_params({g2}, Vector(5, 0.999)));
  CHECK(f2.rate < 0.0);
  CHECK(f2.A > 0.0);

  // Weight-balanced but disconnected: two separate 2-cycles.
  const WeightedDigraph split(4, {{0, 1, 1.0}, {1, 0, 1.0}, {2, 3, 1.0}, {3, 2, 1.0}});
  CHECK_THROWS_AS(rate_certificate(split, make_trigger_params({split}, Vector(4, 0.5))),
                  ValidationError);
}

TEST_CASE("certificate is invariant under vertex relabeling") {
  std::mt19937_64 rng(5);
  const WeightedDigraph g = fig2_graph();
  const TriggerParams params = make_trigger_params({g}, Vector(5, 0.7));
  const RateCertificate base = rate_certificate(g, params);
  std::vector<int> perm{0, 1, 2, 3, 4};
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) edges.push_back({perm[e.tail], perm[e.head], e.weight});
    const WeightedDigraph relabeled(5, edges);
    const RateCertificate cert =
        rate_certificate(relabeled, make_trigger_params({relabeled}, Vector(5, 0.7)));
    CHECK(cert.A == doctest::Approx(base.A).epsilon(1e-9));
    CHECK(cert.rate == doctest::Approx(base.rate).epsilon(1e-9));
  }
}

TEST_CASE("exponential bound verification") {
  SUBCASE("an agreement trajectory holds trivially") {
    Trajectory traj;
    for (int k = 0; k <= 10; ++k) traj.samples.push_back({0.1 * k, Vector(3, 1.0), {}, 0.0});
    RateCertificate cert;
    cert.rate = -0.5;
    const BoundReport report = verify_exponential_bound(traj, cert);
    CHECK(report.holds);
    CHECK(report.samples_checked == 11);
  }

  SUBCASE("the bundled fig2 run stays under its certificate") {
    const ScenarioConfig cfg = load_scenario(scenario_path("fig2.scenario"));
    const Trajectory traj = run_event_driven(cfg);
    const RateCertificate cert = rate_certificate(
        cfg.graphs.front(), make_trigger_params(cfg.graphs, cfg.sigma, cfg.epsilon));
    const BoundReport report = verify_exponential_bound(traj, cert);
    CHECK(report.holds);
    CHECK(report.max_ratio <= 1.0 + 1e-8);
  }

  SUBCASE("a growing disagreement is reported with its first timestamp") {
    Trajectory traj;
    traj.samples.push_back({0.0, {}, {}, 1.0});
    traj.samples.push_back({1.0, {}, {}, 1.5});
    traj.samples.push_back({2.0, {}, {}, 3.0});
    RateCertificate cert;
    cert.rate = -0.1;
    const BoundReport report = verify_exponential_bound(traj, cert);
    CHECK_FALSE(report.holds);
    CHECK(report.first_violation_t == 1.0);
    CHECK(report.max_ratio > 1.0);
  }

  SUBCASE("a broken trigger violates the certified rate") {
    // sigma = 4 lets the error reach the full disagreement before each
    // broadcast, so a 2-agent network oscillates without contracting;
    // the certificate for any valid design is then violated.
    const WeightedDigraph pair(2, {{0, 1, 1.0}, {1, 0, 1.0}});
    TriggerParams broken;
    broken.sigma = {4.0, 4.0};
    broken.epsilon = {0.1, 0.1};
    Simulator sim(pair, {1.0, 0.0}, broken);
    const Trajectory traj = sim.run(5.0);
    const RateCertificate cert =
        rate_certificate(pair, make_trigger_params({pair}, Vector(2, 0.5)));
    const BoundReport report = verify_exponential_bound(traj, cert);
    CHECK_FALSE(report.holds);
    CHECK(report.first_violation_t > 0.0);
  }
}

TEST_CASE("event statistics") {
  SUBCASE("empty log") {
    const RunMetrics m = event_stats({}, 3);
    CHECK(m.event_count_total == 0);
    CHECK(m.per_agent == std::vector<long>{0, 0, 0});
    for (double g : m.min_interevent) CHECK(g == kInf);
  }

  SUBCASE("a same-instant pair counts twice but only gaps between instants") {
    EventLog log;
    log.push_back({1.0, EventKind::TriggerBroadcast, 0, {}, false, 0.0});
    log.push_back({1.0, EventKind::CascadeBroadcast, 0, 0, false, 0.0});
    log.push_back({2.0, EventKind::TriggerBroadcast, 0, {}, false, 0.0});
    log.push_back({1.5, EventKind::TopologySwitch, -1, {}, false, 0.0});
    const RunMetrics m = event_stats(log, 2);
    CHECK(m.event_count_total == 3);  // the switch is not a broadcast
    CHECK(m.per_agent == std::vector<long>{3, 0});
    CHECK(m.min_interevent[0] == 1.0);
    CHECK(m.min_interevent[1] == kInf);
  }
}

TEST_CASE("metrics derived from a trajectory") {
  const ScenarioConfig cfg = load_scenario(scenario_path("fig2.scenario"));
  const Trajectory traj = run_event_driven(cfg);
  const RunMetrics m = compute_metrics(traj, cfg.n);
  CHECK(m.event_count_total == static_cast<long>([&] {
          long count = 0;
          for (const SimEvent& ev : traj.events)
            if (is_broadcast(ev.kind)) ++count;
          return count;
        }()));
  CHECK(m.final_disagreement < 1e-3);
  CHECK(m.v_trace.size() == traj.samples.size());
  for (int i = 0; i < cfg.n; ++i) {
    CHECK(m.per_agent[i] > 0);
    CHECK(m.min_interevent[i] > 0.0);
  }
}

TEST_CASE("empirical decay rate recovers a synthetic exponential") {
  Trajectory traj;
  for (int k = 0; k <= 1000; ++k) {
    const double t = 0.01 * k;
    traj.samples.push_back({t, {}, {}, 2.5 * std::exp(-2.0 * t)});
  }
  CHECK(empirical_rate(traj) == doctest::Approx(-2.0).epsilon(1e-9));

  Trajectory flat;
  flat.samples.push_back({0.0, {}, {}, 0.0});
  CHECK(std::isnan(empirical_rate(flat)));
}

TEST_CASE("theorem-step inequalities hold on random vectors") {
  std::mt19937_64 rng(29);
  for (const WeightedDigraph& g : {fig1_graph(), fig2_graph()}) {
    const SpectralData spec = spectral(g);
    const Matrix l = laplacian(g);
    const Matrix s = symmetric_part(l);
    const int n = g.size();
    for (int trial = 0; trial < 1000; ++trial) {
      const Vector x = random_vector(rng, n);
      // V(x) <= x^T L x / (2 lambda2)
      CHECK(lyapunov(x) <= quad_form(l, x) / (2.0 * spec.lambda2) + 1e-9);

      const Vector e = random_vector(rng, n);
      // e^T L e <= lambdaN ||e||^2
      CHECK(quad_form(l, e) <= spec.lambdaN * dot(e, e) + 1e-9);
      // |x^T Sym(L) e| <= ||Sym(L) x|| ||e||
      const Vector sx = matvec(s, x);
      CHECK(std::abs(dot(sx, e)) <= norm(sx) * norm(e) + 1e-9);
    }
  }
}
