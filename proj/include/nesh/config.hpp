#pragma once
// Run configuration: one JSON document with sections game / topology /
// dos / design / sim / bounds. Serialization preserves key order and
// shortest-round-trip doubles, so save(load(path)) is byte-identical.
// The design section either sets "auto": true (every constant comes from
// the synthesis pipeline) or pins any subset of h, delta, gamma1, theta0,
// R_x, R_y; pinned and synthesized fields are mutually exclusive per
// field, and "auto": true next to an explicit constant is rejected.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nesh/dos.hpp"
#include "nesh/game.hpp"
#include "nesh/topology.hpp"
#include "nesh/tuner.hpp"

namespace nesh {

struct GameSection {
  std::vector<double> rho;
  std::vector<double> x_desired;
  double p0{0.0};
  double q0{0.0};
  std::vector<double> x0;
};

struct TopologySection {
  std::string preset;  // "cycle", "path", "complete"; empty when edges given
  int n{0};
  double weight{1.0};
  std::vector<std::array<double, 3>> edges;  // (i, j, weight), 0-based
};

struct DosSection {
  double duty{0.0};
  double period{0.0};
  std::uint64_t seed{0};
  std::string file;  // exclusive with duty/period/seed
};

struct DesignSection {
  bool auto_all{false};
  std::optional<double> h;
  std::optional<double> delta;
  std::optional<double> gamma1;
  std::optional<double> theta0;
  std::optional<std::int64_t> r_x;
  std::optional<std::int64_t> r_y;
};

struct SimSection {
  double delta_seconds{0.01};
  std::int64_t horizon_steps{150000};
  std::int64_t record_decimation{10};
  std::uint64_t seed{1};
};

struct BoundsSection {
  double theta0{1.0};
  double c_x0{0.0};
  double c_xstar{0.0};
  double gamma1_margin{0.1};
  double h_safety{0.99};
};

struct RunConfig {
  GameSection game;
  TopologySection topology;
  DosSection dos;
  DesignSection design;
  SimSection sim;
  BoundsSection bounds;
};

// The repo's self-contained 5-player default (well-conditioned game on a
// unit-weight 5-cycle); mirrors configs/default.json.
[[nodiscard]] RunConfig default_config();

[[nodiscard]] RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);
[[nodiscard]] std::string config_to_json(const RunConfig& cfg);
[[nodiscard]] RunConfig config_from_json(const std::string& text);

[[nodiscard]] GameSpec make_game(const RunConfig& cfg);
[[nodiscard]] Topology make_topology(const RunConfig& cfg);

// File traces load from disk; generated traces cover exactly the sim
// window horizon_steps * delta_seconds. seed_override, when set, replaces
// dos.seed.
[[nodiscard]] DosTrace make_trace(const RunConfig& cfg,
                                  std::optional<std::uint64_t> seed_override = std::nullopt);

// Synthesis honoring the design pins. When every field is pinned the
// constants are echoed untouched and feasibility findings downgrade to
// warnings; otherwise an infeasible pin raises InfeasibleDesign.
[[nodiscard]] DesignParams resolve_design(const RunConfig& cfg, const GameSpec& game,
                                          const Topology& topo);

}  // namespace nesh
