#include "nesh/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nesh/log.hpp"

namespace nesh {

namespace {

using Json = nlohmann::ordered_json;

void reject_unknown(const Json& j, const char* section, const std::set<std::string>& known) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (known.find(key) == known.end())
      throw std::invalid_argument(std::string("unknown config key ") + section + "." + key);
  }
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

}  // namespace

// Defaults are sized so the reference duty levels 0.5/0.9/0.98 all finish a
// 150000-step run without saturation: gamma1_margin = 0.5 keeps theta above
// the double-precision noise floor at duty 0.5 while duty 0.9 still reaches
// ~1e-4 of the equilibrium.
RunConfig default_config() {
  RunConfig cfg;
  cfg.game.rho = {0.98, 1.0, 1.02, 1.04, 1.06};
  cfg.game.x_desired = {5.0, 10.0, 15.0, 20.0, 25.0};
  cfg.game.p0 = 0.02;
  cfg.game.q0 = 1.0;
  cfg.game.x0 = {1.0, 2.0, 1.0, 2.0, 1.0};
  cfg.topology.preset = "cycle";
  cfg.topology.n = 5;
  cfg.topology.weight = 1.0;
  cfg.dos.duty = 0.5;
  cfg.dos.period = 30.0;
  cfg.dos.seed = 7;
  cfg.design.auto_all = true;
  cfg.sim.delta_seconds = 0.01;
  cfg.sim.horizon_steps = 150000;
  cfg.sim.record_decimation = 10;
  cfg.sim.seed = 1;
  cfg.bounds.theta0 = 6.0;
  cfg.bounds.c_x0 = 2.5;
  cfg.bounds.c_xstar = 25.0;
  cfg.bounds.gamma1_margin = 0.5;
  cfg.bounds.h_safety = 0.99;
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  Json j;
  j["game"] = {{"rho", cfg.game.rho},
               {"x_desired", cfg.game.x_desired},
               {"p0", cfg.game.p0},
               {"q0", cfg.game.q0},
               {"x0", cfg.game.x0}};
  Json topo;
  if (!cfg.topology.preset.empty()) {
    topo["preset"] = cfg.topology.preset;
    topo["n"] = cfg.topology.n;
    topo["weight"] = cfg.topology.weight;
  } else {
    topo["n"] = cfg.topology.n;
    Json edges = Json::array();
    for (const auto& e : cfg.topology.edges) edges.push_back({e[0], e[1], e[2]});
    topo["edges"] = edges;
  }
  j["topology"] = topo;
  Json dos;
  if (!cfg.dos.file.empty()) {
    dos["file"] = cfg.dos.file;
  } else {
    dos["duty"] = cfg.dos.duty;
    dos["period"] = cfg.dos.period;
    dos["seed"] = cfg.dos.seed;
  }
  j["dos"] = dos;
  // Default-constructed Json is null; an empty section must stay an object.
  Json design = Json::object();
  if (cfg.design.auto_all) design["auto"] = true;
  if (cfg.design.h) design["h"] = *cfg.design.h;
  if (cfg.design.delta) design["delta"] = *cfg.design.delta;
  if (cfg.design.gamma1) design["gamma1"] = *cfg.design.gamma1;
  if (cfg.design.theta0) design["theta0"] = *cfg.design.theta0;
  if (cfg.design.r_x) design["R_x"] = *cfg.design.r_x;
  if (cfg.design.r_y) design["R_y"] = *cfg.design.r_y;
  j["design"] = design;
  j["sim"] = {{"delta_seconds", cfg.sim.delta_seconds},
              {"horizon_steps", cfg.sim.horizon_steps},
              {"record_decimation", cfg.sim.record_decimation},
              {"seed", cfg.sim.seed}};
  j["bounds"] = {{"theta0", cfg.bounds.theta0},
                 {"c_x0", cfg.bounds.c_x0},
                 {"c_xstar", cfg.bounds.c_xstar},
                 {"gamma1_margin", cfg.bounds.gamma1_margin},
                 {"h_safety", cfg.bounds.h_safety}};
  return j.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, "", {"game", "topology", "dos", "design", "sim", "bounds"});
  RunConfig cfg;

  const Json& g = j.at("game");
  reject_unknown(g, "game", {"rho", "x_desired", "p0", "q0", "x0"});
  cfg.game.rho = g.at("rho").get<std::vector<double>>();
  cfg.game.x_desired = g.at("x_desired").get<std::vector<double>>();
  cfg.game.p0 = g.at("p0").get<double>();
  cfg.game.q0 = g.at("q0").get<double>();
  cfg.game.x0 = g.value("x0", std::vector<double>(cfg.game.rho.size(), 0.0));

  const Json& t = j.at("topology");
  reject_unknown(t, "topology", {"preset", "n", "weight", "edges"});
  cfg.topology.n = t.at("n").get<int>();
  if (t.contains("preset")) {
    if (t.contains("edges")) throw std::invalid_argument("topology: preset and edges are exclusive");
    cfg.topology.preset = t.at("preset").get<std::string>();
    cfg.topology.weight = t.value("weight", 1.0);
  } else {
    if (!t.contains("edges")) throw std::invalid_argument("topology needs preset or edges");
    for (const auto& e : t.at("edges")) {
      if (!e.is_array() || e.size() != 3)
        throw std::invalid_argument("topology.edges entries must be [i, j, weight]");
      cfg.topology.edges.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
    }
  }

  const Json& d = j.at("dos");
  reject_unknown(d, "dos", {"duty", "period", "seed", "file"});
  if (d.contains("file")) {
    if (d.contains("duty") || d.contains("period") || d.contains("seed"))
      throw std::invalid_argument("dos: file and duty/period/seed are exclusive");
    cfg.dos.file = d.at("file").get<std::string>();
  } else {
    cfg.dos.duty = d.at("duty").get<double>();
    cfg.dos.period = d.at("period").get<double>();
    cfg.dos.seed = d.value("seed", std::uint64_t{0});
  }

  if (j.contains("design")) {
    const Json& ds = j.at("design");
    reject_unknown(ds, "design", {"auto", "h", "delta", "gamma1", "theta0", "R_x", "R_y"});
    cfg.design.auto_all = ds.value("auto", false);
    if (ds.contains("h")) cfg.design.h = ds.at("h").get<double>();
    if (ds.contains("delta")) cfg.design.delta = ds.at("delta").get<double>();
    if (ds.contains("gamma1")) cfg.design.gamma1 = ds.at("gamma1").get<double>();
    if (ds.contains("theta0")) cfg.design.theta0 = ds.at("theta0").get<double>();
    if (ds.contains("R_x")) cfg.design.r_x = ds.at("R_x").get<std::int64_t>();
    if (ds.contains("R_y")) cfg.design.r_y = ds.at("R_y").get<std::int64_t>();
    const bool any_pin = cfg.design.h || cfg.design.delta || cfg.design.gamma1 ||
                         cfg.design.theta0 || cfg.design.r_x || cfg.design.r_y;
    if (cfg.design.auto_all && any_pin)
      throw std::invalid_argument("design: auto and explicit constants are mutually exclusive");
  } else {
    cfg.design.auto_all = true;
  }

  const Json& s = j.at("sim");
  reject_unknown(s, "sim", {"delta_seconds", "horizon_steps", "record_decimation", "seed"});
  cfg.sim.delta_seconds = s.at("delta_seconds").get<double>();
  cfg.sim.horizon_steps = s.at("horizon_steps").get<std::int64_t>();
  cfg.sim.record_decimation = s.value("record_decimation", std::int64_t{10});
  cfg.sim.seed = s.value("seed", std::uint64_t{1});

  const Json& b = j.at("bounds");
  reject_unknown(b, "bounds", {"theta0", "c_x0", "c_xstar", "gamma1_margin", "h_safety"});
  cfg.bounds.theta0 = b.at("theta0").get<double>();
  cfg.bounds.c_x0 = b.at("c_x0").get<double>();
  cfg.bounds.c_xstar = b.at("c_xstar").get<double>();
  cfg.bounds.gamma1_margin = b.value("gamma1_margin", 0.1);
  cfg.bounds.h_safety = b.value("h_safety", 0.99);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open config for writing: " + path);
  out << config_to_json(cfg);
  if (!out) throw std::runtime_error("config write failed: " + path);
}

GameSpec make_game(const RunConfig& cfg) {
  return GameSpec(to_vec(cfg.game.rho), to_vec(cfg.game.x_desired), cfg.game.p0, cfg.game.q0);
}

Topology make_topology(const RunConfig& cfg) {
  const auto& t = cfg.topology;
  if (t.preset == "cycle") return Topology::cycle(t.n, t.weight);
  if (t.preset == "path") return Topology::path(t.n, t.weight);
  if (t.preset == "complete") return Topology::complete(t.n, t.weight);
  if (!t.preset.empty()) throw std::invalid_argument("unknown topology preset: " + t.preset);
  return Topology::from_edges(t.n, t.edges);
}

DosTrace make_trace(const RunConfig& cfg, std::optional<std::uint64_t> seed_override) {
  if (!cfg.dos.file.empty()) return DosTrace::load(cfg.dos.file);
  const double horizon = static_cast<double>(cfg.sim.horizon_steps) * cfg.sim.delta_seconds;
  return generate_dos(cfg.dos.duty, cfg.dos.period, horizon,
                      seed_override.value_or(cfg.dos.seed));
}

DesignParams resolve_design(const RunConfig& cfg, const GameSpec& game, const Topology& topo) {
  const auto& ds = cfg.design;
  const bool all_pinned =
      ds.h && ds.delta && ds.gamma1 && ds.theta0 && ds.r_x && ds.r_y;
  const GameConstants gc = game.constants();
  const int n = game.n();

  DesignParams dp;
  dp.h = ds.h ? *ds.h : cfg.bounds.h_safety * h_max(topo);
  const ProtocolMatrices pm = build_matrices(topo, dp.h);
  const double norm_h = spectral_norm(pm.h);
  const double norm_s = spectral_norm(pm.s);
  const double norm_g = spectral_norm(pm.g);
  const double norm_a0 = spectral_norm(pm.a0);

  if (ds.delta) {
    dp.delta = *ds.delta;
    if (!delta_feasible(dp.delta, norm_h, gc.lipschitz_l, gc.mu, n)) {
      if (all_pinned) {
        logf(LogLevel::kWarn, "pinned delta = %g is outside the feasible range", dp.delta);
      } else {
        throw InfeasibleDesign("pinned delta is outside the feasible range");
      }
    }
  } else {
    dp.delta = select_delta(norm_h, gc.lipschitz_l, gc.mu, n);
  }
  dp.rho_hbar = rho_hbar(norm_h, dp.delta, gc.lipschitz_l, gc.mu, n);

  if (ds.gamma1) {
    dp.gamma1 = *ds.gamma1;
    if (!(dp.gamma1 > dp.rho_hbar) || !(dp.gamma1 < 1.0)) {
      if (all_pinned) {
        logf(LogLevel::kWarn, "pinned gamma1 = %g is not inside (rho(Hbar), 1) = (%g, 1)",
             dp.gamma1, dp.rho_hbar);
      } else {
        throw InfeasibleDesign("pinned gamma1 must lie in (rho(Hbar), 1)");
      }
    }
  } else {
    if (!(dp.rho_hbar < 1.0)) throw InfeasibleDesign("rho(Hbar) >= 1, no zoom factor exists");
    dp.gamma1 = dp.rho_hbar + cfg.bounds.gamma1_margin * (1.0 - dp.rho_hbar);
  }
  dp.theta0 = ds.theta0 ? *ds.theta0 : cfg.bounds.theta0;

  try {
    const CBound cb = bound_c(dp.h, dp.gamma1, dp.theta0, dp.rho_hbar, norm_s, norm_a0, n,
                              cfg.bounds.c_x0, cfg.bounds.c_xstar);
    dp.c_bound = cb.c;
    dp.c_gamma = cb.c_gamma;
    dp.gamma_decay = cb.gamma;
    const RequiredR rr = required_r(cb.c, dp.gamma1, dp.delta, gc.lipschitz_l, dp.h, norm_g,
                                    norm_a0, norm_s, n);
    dp.r_x = ds.r_x ? *ds.r_x : rr.r_x;
    dp.r_y = ds.r_y ? *ds.r_y : rr.r_y;
  } catch (const std::exception& e) {
    if (!all_pinned && (!ds.r_x || !ds.r_y)) throw;
    logf(LogLevel::kWarn, "envelope bound not computable for pinned constants: %s", e.what());
    dp.c_bound = std::nan("");
    dp.gamma_decay = std::nan("");
    dp.r_x = *ds.r_x;
    dp.r_y = *ds.r_y;
  }

  if (dp.theta0 < 2.0 * dp.gamma1 * cfg.bounds.c_x0) {
    logf(LogLevel::kWarn,
         "theta0 = %g below 2*gamma1*c_x0 = %g; the first transmission may saturate", dp.theta0,
         2.0 * dp.gamma1 * cfg.bounds.c_x0);
  }
  if (!cfg.game.x0.empty()) {
    double x0max = 0.0;
    for (double v : cfg.game.x0) x0max = std::max(x0max, std::fabs(v));
    if (cfg.bounds.c_x0 < x0max)
      logf(LogLevel::kWarn, "c_x0 = %g below ||x(0)||_inf = %g; the envelope bound is void",
           cfg.bounds.c_x0, x0max);
  }
  const double xstar_max = game.solve_ne().cwiseAbs().maxCoeff();
  if (cfg.bounds.c_xstar < xstar_max)
    logf(LogLevel::kWarn, "c_xstar = %g below ||x*||_inf = %g; the envelope bound is void",
         cfg.bounds.c_xstar, xstar_max);
  return dp;
}

}  // namespace nesh
