#include "etac/scenario_io.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "etac/errors.hpp"
#include "etac/format.hpp"
#include "etac/graph.hpp"
#include "etac/triggers.hpp"

namespace etac {

namespace {

struct Token {
  std::string text;
  int line;
};

double parse_double(const Token& tok) {
  const char* begin = tok.text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + tok.text.size())
    throw SchemaError(tok.line, "expected a number, got '" + tok.text + "'");
  return v;
}

long parse_long(const Token& tok) {
  const char* begin = tok.text.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end != begin + tok.text.size())
    throw SchemaError(tok.line, "expected an integer, got '" + tok.text + "'");
  return v;
}

bool parse_bool(const Token& tok) {
  if (tok.text == "on" || tok.text == "true") return true;
  if (tok.text == "off" || tok.text == "false") return false;
  throw SchemaError(tok.line, "expected on/off, got '" + tok.text + "'");
}

// Raw file content before expansion and validation.
struct RawScenario {
  std::map<std::string, std::vector<Token>> scalars;  // single-valued keys
  std::vector<Token> x0, sigma, epsilon, schedule;
  std::vector<std::vector<Edge>> graph_blocks;
  std::vector<int> graph_lines;  // first line of each block, for messages
};

void expand_per_agent(const std::vector<Token>& toks, int n, const char* what, Vector& out) {
  if (static_cast<int>(toks.size()) == 1) {
    out.assign(n, parse_double(toks.front()));
    return;
  }
  if (static_cast<int>(toks.size()) != n) {
    std::ostringstream msg;
    msg << what << " needs 1 or " << n << " values, got " << toks.size();
    throw SchemaError(toks.front().line, msg.str());
  }
  out.clear();
  for (const Token& t : toks) out.push_back(parse_double(t));
}

bool union_strongly_connected(const std::vector<WeightedDigraph>& graphs, int n) {
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const WeightedDigraph& g : graphs)
    for (const Edge& e : g.edges()) adj[e.tail][e.head] = 1;
  auto reaches_all = [&](bool reverse) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u = 0; u < n; ++u) {
        const bool edge = reverse ? adj[u][v] : adj[v][u];
        if (edge && !seen[u]) {
          seen[u] = 1;
          ++count;
          stack.push_back(u);
        }
      }
    }
    return count == n;
  };
  return reaches_all(false) && reaches_all(true);
}

}  // namespace

ScenarioConfig parse_scenario(std::istream& in, const std::string& display_name,
                              const LoadOptions& opts) {
  RawScenario raw;
  std::string line;
  int lineno = 0;
  bool in_graph_block = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<Token> toks;
    for (std::string word; ls >> word;) toks.push_back({word, lineno});
    if (toks.empty()) continue;

    const std::string& key = toks.front().text;
    const std::vector<Token> args(toks.begin() + 1, toks.end());
    auto require_args = [&](std::size_t count) {
      if (args.size() != count) {
        std::ostringstream msg;
        msg << "'" << key << "' takes " << count << " value(s), got " << args.size();
        throw SchemaError(lineno, msg.str());
      }
    };
    auto set_scalar = [&](std::size_t count) {
      require_args(count);
      if (!raw.scalars.emplace(key, args).second)
        throw SchemaError(lineno, "duplicate key '" + key + "'");
    };

    if (key == "name" || key == "agents" || key == "mode" || key == "horizon" || key == "h" ||
        key == "sample_dt" || key == "cooldown" || key == "zeno_ceiling" ||
        key == "sufficiency_check" || key == "cycle_dwell") {
      set_scalar(1);
    } else if (key == "x0" || key == "sigma" || key == "epsilon" || key == "schedule") {
      auto& slot = key == "x0"      ? raw.x0
                   : key == "sigma" ? raw.sigma
                   : key == "epsilon" ? raw.epsilon
                                      : raw.schedule;
      if (!slot.empty()) throw SchemaError(lineno, "duplicate key '" + key + "'");
      if (args.empty()) throw SchemaError(lineno, "'" + key + "' needs at least one value");
      slot = args;
    } else if (key == "graph") {
      require_args(0);
      raw.graph_blocks.emplace_back();
      raw.graph_lines.push_back(lineno);
      in_graph_block = true;
    } else if (key == "edge") {
      require_args(3);
      if (!in_graph_block) {
        raw.graph_blocks.emplace_back();
        raw.graph_lines.push_back(lineno);
        in_graph_block = true;
      }
      Edge e;
      e.tail = static_cast<int>(parse_long(args[0])) - 1;
      e.head = static_cast<int>(parse_long(args[1])) - 1;
      e.weight = parse_double(args[2]);
      raw.graph_blocks.back().push_back(e);
    } else {
      throw SchemaError(lineno, "unknown key '" + key + "'");
    }
  }

  ScenarioConfig cfg;
  auto scalar = [&](const char* key) -> const Token* {
    const auto it = raw.scalars.find(key);
    return it == raw.scalars.end() ? nullptr : &it->second.front();
  };

  cfg.name = scalar("name") ? scalar("name")->text : display_name;
  const Token* agents = scalar("agents");
  if (!agents) throw ValidationError("scenario is missing 'agents'");
  cfg.n = static_cast<int>(parse_long(*agents));
  if (cfg.n <= 0) throw SchemaError(agents->line, "'agents' must be positive");

  if (const Token* m = scalar("mode")) {
    const auto mode = parse_run_mode(m->text);
    if (!mode) throw SchemaError(m->line, "unknown mode '" + m->text + "'");
    cfg.mode = *mode;
  }
  if (const Token* t = scalar("horizon")) cfg.horizon = parse_double(*t);
  if (const Token* t = scalar("h")) cfg.h = parse_double(*t);
  if (const Token* t = scalar("sample_dt")) cfg.sample_dt = parse_double(*t);
  if (const Token* t = scalar("cooldown")) cfg.cooldown = parse_bool(*t);
  if (const Token* t = scalar("zeno_ceiling")) cfg.zeno_ceiling = parse_double(*t);
  if (const Token* t = scalar("sufficiency_check")) cfg.sufficiency_check = parse_bool(*t);

  // CLI-style overrides come before validation so the effective
  // configuration is the one checked.
  if (opts.mode) {
    cfg.mode = *opts.mode;
    if (cfg.mode == RunMode::EventDriven) cfg.h.reset();
  }
  if (opts.h) cfg.h = *opts.h;
  if (opts.horizon) cfg.horizon = *opts.horizon;
  if (opts.cooldown) cfg.cooldown = *opts.cooldown;

  if (raw.x0.empty()) throw ValidationError("scenario is missing 'x0'");
  if (static_cast<int>(raw.x0.size()) != cfg.n) {
    std::ostringstream msg;
    msg << "x0 needs " << cfg.n << " values, got " << raw.x0.size();
    throw SchemaError(raw.x0.front().line, msg.str());
  }
  cfg.x0.clear();
  for (const Token& t : raw.x0) {
    cfg.x0.push_back(parse_double(t));
    if (!std::isfinite(cfg.x0.back())) throw SchemaError(t.line, "x0 must be finite");
  }

  if (opts.sigma) {
    cfg.sigma.assign(cfg.n, *opts.sigma);
  } else if (!raw.sigma.empty()) {
    expand_per_agent(raw.sigma, cfg.n, "sigma", cfg.sigma);
  } else if (cfg.mode == RunMode::PeriodicLaplacian) {
    cfg.sigma.assign(cfg.n, 0.5);  // unused by the baseline law
  } else {
    throw ValidationError("scenario is missing 'sigma'");
  }
  if (!raw.epsilon.empty()) {
    Vector eps;
    expand_per_agent(raw.epsilon, cfg.n, "epsilon", eps);
    cfg.epsilon = eps;
  }

  if (raw.graph_blocks.empty()) throw ValidationError("scenario has no graph");
  for (std::size_t k = 0; k < raw.graph_blocks.size(); ++k) {
    try {
      cfg.graphs.emplace_back(cfg.n, raw.graph_blocks[k]);
    } catch (const ValidationError& err) {
      std::ostringstream msg;
      msg << "graph " << k + 1 << " (line " << raw.graph_lines[k] << "): " << err.what();
      throw ValidationError(msg.str());
    }
  }

  // Switching schedule: explicit `schedule t:g ...` pairs, or the
  // `cycle_dwell d` shorthand cycling through the graph blocks.
  const Token* dwell = scalar("cycle_dwell");
  if (!raw.schedule.empty() && dwell)
    throw SchemaError(dwell->line, "'cycle_dwell' and 'schedule' are mutually exclusive");
  if (!raw.schedule.empty()) {
    for (const Token& tok : raw.schedule) {
      const auto colon = tok.text.find(':');
      if (colon == std::string::npos)
        throw SchemaError(tok.line, "schedule entries look like time:graph, got '" + tok.text + "'");
      const Token time_tok{tok.text.substr(0, colon), tok.line};
      const Token idx_tok{tok.text.substr(colon + 1), tok.line};
      const double time = parse_double(time_tok);
      const long idx = parse_long(idx_tok);
      if (idx < 1 || idx > static_cast<long>(cfg.graphs.size()))
        throw SchemaError(tok.line, "schedule references graph " + std::to_string(idx) +
                                        " but only " + std::to_string(cfg.graphs.size()) +
                                        " are defined");
      cfg.schedule.emplace_back(time, static_cast<int>(idx) - 1);
    }
  } else if (dwell) {
    const double d = parse_double(*dwell);
    if (!(d > 0.0)) throw SchemaError(dwell->line, "'cycle_dwell' must be positive");
    if (cfg.graphs.size() < 2)
      throw SchemaError(dwell->line, "'cycle_dwell' needs at least two graph blocks");
    for (long m = 0;; ++m) {
      const double t = static_cast<double>(m) * d;
      if (t >= cfg.horizon) break;
      cfg.schedule.emplace_back(t, static_cast<int>(m % cfg.graphs.size()));
    }
  } else {
    if (cfg.graphs.size() > 1)
      throw ValidationError("multiple graphs need a 'schedule' or 'cycle_dwell'");
    cfg.schedule.emplace_back(0.0, 0);
  }
  if (cfg.schedule.empty() || cfg.schedule.front().first != 0.0)
    throw ValidationError("switching schedule must start at time 0");
  for (std::size_t k = 1; k < cfg.schedule.size(); ++k)
    if (!(cfg.schedule[k].first > cfg.schedule[k - 1].first))
      throw ValidationError("switching schedule times must be strictly increasing");

  if (!(cfg.horizon > 0.0)) throw ValidationError("scenario needs a positive 'horizon'");
  if (cfg.sample_dt < 0.0) throw ValidationError("'sample_dt' cannot be negative");
  if (!(cfg.zeno_ceiling > 0.0)) throw ValidationError("'zeno_ceiling' must be positive");

  const bool periodic =
      cfg.mode == RunMode::PeriodicEvent || cfg.mode == RunMode::PeriodicLaplacian;
  if (periodic && !cfg.h)
    throw ValidationError("mode '" + to_string(cfg.mode) + "' requires a sampling period 'h'");
  if (periodic && !(*cfg.h > 0.0)) throw ValidationError("'h' must be positive");
  if (!periodic && cfg.h)
    throw ValidationError("'h' is only used by the periodic modes; remove it or change 'mode'");
  if (periodic && cfg.graphs.size() > 1)
    throw ValidationError("periodic modes do not support switching topologies");

  // Graph-level checks: weight balance per graph (demotable to a
  // warning), strong connectivity of the active graph or of the union
  // of the scheduled graphs.
  for (std::size_t k = 0; k < cfg.graphs.size(); ++k) {
    const DegreeData deg = degree_data(cfg.graphs[k]);
    double worst = 0.0;
    int worst_vertex = 0;
    for (int i = 0; i < cfg.n; ++i) {
      const double gap = std::abs(deg.d_out[i] - deg.d_in[i]);
      if (gap > worst) {
        worst = gap;
        worst_vertex = i;
      }
    }
    if (worst > 1e-9) {
      std::ostringstream msg;
      msg << "graph " << k + 1 << " is not weight-balanced: vertex " << worst_vertex + 1
          << " has out-degree " << deg.d_out[worst_vertex] << " but in-degree "
          << deg.d_in[worst_vertex];
      if (!opts.allow_unbalanced) throw ValidationError(msg.str());
      std::cerr << "warning: " << msg.str() << "; no convergence guarantees apply\n";
    }
  }
  if (cfg.graphs.size() == 1) {
    if (!is_strongly_connected(cfg.graphs.front()))
      throw ValidationError("graph is not strongly connected");
  } else if (!union_strongly_connected(cfg.graphs, cfg.n)) {
    throw ValidationError("the union of the scheduled graphs is not strongly connected");
  }

  // Trigger parameters are checked eagerly so a bad sigma/epsilon fails
  // at load with the bound spelled out.
  if (cfg.mode != RunMode::PeriodicLaplacian)
    make_trigger_params(cfg.graphs, cfg.sigma, cfg.epsilon);

  return cfg;
}

ScenarioConfig load_scenario(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  return parse_scenario(in, std::filesystem::path(path).stem().string(), opts);
}

void save_scenario(const ScenarioConfig& cfg, std::ostream& out) {
  out << "name " << cfg.name << "\n";
  out << "agents " << cfg.n << "\n";
  out << "mode " << to_string(cfg.mode) << "\n";
  out << "horizon " << format_double(cfg.horizon) << "\n";
  if (cfg.h) out << "h " << format_double(*cfg.h) << "\n";
  out << "sample_dt " << format_double(cfg.sample_dt) << "\n";
  out << "cooldown " << (cfg.cooldown ? "on" : "off") << "\n";
  out << "zeno_ceiling " << format_double(cfg.zeno_ceiling) << "\n";
  out << "sufficiency_check " << (cfg.sufficiency_check ? "on" : "off") << "\n";
  out << "sigma";
  for (double s : cfg.sigma) out << " " << format_double(s);
  out << "\n";
  if (cfg.epsilon) {
    out << "epsilon";
    for (double e : *cfg.epsilon) out << " " << format_double(e);
    out << "\n";
  }
  out << "x0";
  for (double v : cfg.x0) out << " " << format_double(v);
  out << "\n";
  for (const WeightedDigraph& g : cfg.graphs) {
    out << "graph\n";
    for (const Edge& e : g.edges())
      out << "edge " << e.tail + 1 << " " << e.head + 1 << " " << format_double(e.weight)
          << "\n";
  }
  if (cfg.schedule.size() > 1) {
    out << "schedule";
    for (const auto& [t, idx] : cfg.schedule) out << " " << format_double(t) << ":" << idx + 1;
    out << "\n";
  }
}

std::string scenario_text(const ScenarioConfig& cfg) {
  std::ostringstream out;
  save_scenario(cfg, out);
  return out.str();
}

}  // namespace etac
