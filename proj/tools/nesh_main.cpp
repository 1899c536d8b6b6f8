// nesh: simulate and tune quantized Nash-equilibrium seeking over a
// DoS-prone network.
//
// Subcommands:
//   tune     synthesize design constants from a config (exit 2 when the
//            game/topology admits no feasible design)
//   gen-dos  generate a seeded DoS trace and report its envelopes
//   run      simulate a config against a trace (exit 3 when a quantizer
//            saturated, exit 4 when the DoS load breaks the resilience
//            condition; 4 wins when both apply, since a broken premise
//            voids the saturation guarantee)
//   verify   cross-check the engine against the closed-form recursions,
//            encoder/decoder synchrony and the scaling identity
//
// NESH_LOG=quiet|warn|info|debug controls stderr diagnostics.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nesh/config.hpp"
#include "nesh/dos.hpp"
#include "nesh/game.hpp"
#include "nesh/log.hpp"
#include "nesh/quantizer.hpp"
#include "nesh/sim.hpp"
#include "nesh/topology.hpp"
#include "nesh/tuner.hpp"

namespace {

using nesh::LogLevel;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitSaturated = 3;
constexpr int kExitResilience = 4;

void print_design(const nesh::DesignParams& dp) {
  std::printf("h=%.17g\n", dp.h);
  std::printf("delta=%.17g\n", dp.delta);
  std::printf("rho_hbar=%.17g\n", dp.rho_hbar);
  std::printf("gamma1=%.17g\n", dp.gamma1);
  std::printf("gamma=%.17g\n", dp.gamma_decay);
  std::printf("c=%.17g\n", dp.c_bound);
  std::printf("theta0=%.17g\n", dp.theta0);
  std::printf("R_x=%" PRId64 "\n", dp.r_x);
  std::printf("R_y=%" PRId64 "\n", dp.r_y);
  nlohmann::ordered_json design = {{"h", dp.h},         {"delta", dp.delta},
                                   {"gamma1", dp.gamma1}, {"theta0", dp.theta0},
                                   {"R_x", dp.r_x},     {"R_y", dp.r_y}};
  std::printf("design=%s\n", design.dump().c_str());
}

int cmd_tune(const std::string& config_path, const std::string& out_path) {
  nesh::RunConfig cfg = nesh::load_config(config_path);
  const nesh::GameSpec game = nesh::make_game(cfg);
  const nesh::Topology topo = nesh::make_topology(cfg);
  const nesh::DesignParams dp = nesh::resolve_design(cfg, game, topo);
  print_design(dp);
  if (!out_path.empty()) {
    cfg.design.auto_all = false;
    cfg.design.h = dp.h;
    cfg.design.delta = dp.delta;
    cfg.design.gamma1 = dp.gamma1;
    cfg.design.theta0 = dp.theta0;
    cfg.design.r_x = dp.r_x;
    cfg.design.r_y = dp.r_y;
    nesh::save_config(cfg, out_path);
    std::printf("config_written=%s\n", out_path.c_str());
  }
  return kExitOk;
}

int cmd_gen_dos(double duty, double period, double horizon, std::uint64_t seed,
                const std::string& out_path, double delta, std::vector<double> tau_d_grid,
                std::vector<double> t_dur_grid, double resolution) {
  const nesh::DosTrace trace = nesh::generate_dos(duty, period, horizon, seed);
  const double measure = trace.active_measure(0.0, horizon);
  const auto onsets = trace.onset_count(0.0, horizon);
  std::printf("horizon=%.17g\n", horizon);
  std::printf("measure=%.17g\n", measure);
  std::printf("onsets=%" PRId64 "\n", onsets);

  const double duty_tot = measure / horizon;
  const double tau_d_tot = onsets > 0 ? horizon / static_cast<double>(onsets) : 0.0;
  std::printf("duty_totals=%.17g\n", duty_tot);
  if (onsets > 0) {
    std::printf("tau_d_totals=%.17g\n", tau_d_tot);
    std::printf("t_dur_totals=%.17g\n", duty_tot > 0.0 ? 1.0 / duty_tot : 0.0);
    const double load = duty_tot + delta / tau_d_tot;
    std::printf("load_totals=%.17g\n", load);
    std::printf("resilience_ok=%d\n", load < 1.0 ? 1 : 0);
  } else {
    std::printf("resilience_ok=1\n");
  }

  if (tau_d_grid.empty()) tau_d_grid = {0.5 * period, period, 2.0 * period};
  if (t_dur_grid.empty()) {
    const double base = duty > 0.0 ? 1.0 / duty : 4.0;
    t_dur_grid = {std::max(1.000001, base), std::max(1.000001, 1.25 * base),
                  std::max(1.000001, 2.0 * base)};
  }
  for (double td : tau_d_grid) {
    const nesh::DosParams p = nesh::certify(trace, td, t_dur_grid.front(), resolution);
    std::printf("eta[tau_d=%.17g]=%.17g\n", td, p.eta);
  }
  for (double tc : t_dur_grid) {
    const nesh::DosParams p = nesh::certify(trace, tau_d_grid.front(), tc, resolution);
    std::printf("kappa[T=%.17g]=%.17g\n", tc, p.kappa);
  }
  if (!out_path.empty()) {
    trace.save(out_path);
    std::printf("trace_written=%s\n", out_path.c_str());
  }
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& trace_path,
            const std::string& out_path, std::optional<std::uint64_t> seed,
            std::optional<std::int64_t> decimation, bool dual_state) {
  nesh::RunConfig cfg = nesh::load_config(config_path);
  if (!trace_path.empty()) cfg.dos.file = trace_path;
  if (decimation) cfg.sim.record_decimation = *decimation;
  const nesh::GameSpec game = nesh::make_game(cfg);
  const nesh::Topology topo = nesh::make_topology(cfg);
  const nesh::DesignParams dp = nesh::resolve_design(cfg, game, topo);
  const nesh::DosTrace trace = nesh::make_trace(cfg, seed);

  // Totals-based resilience gate: a load at or beyond 1 means equilibrium
  // seeking cannot make progress; the run still executes for inspection.
  const double horizon = trace.horizon();
  const double duty_tot = trace.active_measure(0.0, horizon) / horizon;
  const auto onsets = trace.onset_count(0.0, horizon);
  const double load =
      duty_tot + (onsets > 0 ? cfg.sim.delta_seconds * static_cast<double>(onsets) / horizon : 0.0);
  const bool resilient = load < 1.0;
  if (!resilient)
    nesh::logf(LogLevel::kWarn,
               "DoS load %.6g >= 1: beyond the maximum resilience boundary, no convergence", load);

  nesh::Vec x0(game.n());
  for (int i = 0; i < game.n(); ++i) x0[i] = cfg.game.x0[static_cast<std::size_t>(i)];
  const nesh::SimResult res = nesh::run(game, topo, dp, trace, cfg.sim.delta_seconds,
                                        cfg.sim.horizon_steps, cfg.sim.record_decimation, x0,
                                        dual_state);

  std::printf("steps=%" PRId64 "\n", cfg.sim.horizon_steps);
  std::printf("initial_err=%.17g\n", res.summary.initial_err);
  std::printf("final_err=%.17g\n", res.summary.final_err);
  std::printf("min_theta=%.17g\n", res.summary.min_theta);
  std::printf("ts_empirical=%" PRId64 "\n", res.summary.ts_empirical);
  std::printf("max_qarg_x=%.17g\n", res.summary.max_qarg_x);
  std::printf("max_qarg_y=%.17g\n", res.summary.max_qarg_y);
  if (res.summary.first_saturation)
    std::printf("first_saturation=%" PRId64 "\n", *res.summary.first_saturation);
  else
    std::printf("first_saturation=none\n");
  std::printf("resilience_ok=%d\n", resilient ? 1 : 0);
  if (!out_path.empty()) {
    nesh::write_csv(out_path, res, game.n());
    std::printf("csv_written=%s\n", out_path.c_str());
  }
  if (!resilient) return kExitResilience;
  if (res.summary.first_saturation) return kExitSaturated;
  return kExitOk;
}

int cmd_verify(const std::string& config_path, std::int64_t steps, std::uint64_t seed) {
  nesh::RunConfig cfg = nesh::load_config(config_path);
  const nesh::GameSpec game = nesh::make_game(cfg);
  const nesh::Topology topo = nesh::make_topology(cfg);
  const nesh::DesignParams dp = nesh::resolve_design(cfg, game, topo);
  const nesh::ProtocolMatrices pm = nesh::build_matrices(topo, dp.h);
  const nesh::UniformQuantizer qx(dp.r_x);
  const nesh::UniformQuantizer qy(dp.r_y);
  const nesh::Vec x_star = game.solve_ne();
  const int n = game.n();
  nesh::Vec x0(n);
  for (int i = 0; i < n; ++i) x0[i] = cfg.game.x0[static_cast<std::size_t>(i)];

  bool ok = true;

  // Suite 1: one-step oracle equivalence along a mixed attack pattern.
  {
    std::mt19937_64 rng(seed);
    auto flip = [&](double p) { return (static_cast<double>(rng() >> 11) * 0x1.0p-53) < p; };
    nesh::NetworkState st = nesh::initial_state(x0, dp);
    bool dos_now = false;
    double max_dev = 0.0;
    for (std::int64_t k = 0; k < steps; ++k) {
      const bool dos_next = flip(0.4);
      const double theta = st.scaling.theta;
      const nesh::ErrorState before = nesh::error_state_of(st, x_star);
      const nesh::ErrorState oracle =
          nesh::oracle_step(before, theta, dos_now, dos_next, game, pm, dp, qx, qy, x_star);
      (void)nesh::step(st, game, topo, dp, qx, qy, dos_now, dos_next, x_star);
      const nesh::ErrorState after = nesh::error_state_of(st, x_star);
      max_dev = std::max(max_dev, (oracle.y_bar - after.y_bar).cwiseAbs().maxCoeff());
      max_dev = std::max(max_dev, (oracle.chi_raw - after.chi_raw).cwiseAbs().maxCoeff());
      max_dev = std::max(max_dev, (oracle.e_x - after.e_x).cwiseAbs().maxCoeff());
      max_dev = std::max(max_dev, (oracle.e_y - after.e_y).cwiseAbs().maxCoeff());
      dos_now = dos_next;
    }
    std::printf("oracle_equivalence_max_dev=%.3g\n", max_dev);
    ok = ok && max_dev < 1e-9;
  }

  // Suite 2: encoder/decoder synchrony (dual-state run; throws on drift).
  {
    const double horizon = static_cast<double>(steps) * cfg.sim.delta_seconds;
    const nesh::DosTrace trace = nesh::generate_dos(0.4, 20.0 * cfg.sim.delta_seconds, horizon, seed);
    (void)nesh::run(game, topo, dp, trace, cfg.sim.delta_seconds, steps, steps, x0, true);
    std::printf("dual_state_synchrony=ok\n");
  }

  // Suite 3: hold-under-attack freeze and the scaling identity.
  {
    // Cover the closing instant too: intervals are right-open.
    const double horizon = static_cast<double>(steps + 1) * cfg.sim.delta_seconds;
    std::vector<nesh::DosInterval> iv{{0.0, horizon}};
    const nesh::DosTrace all_on(std::move(iv), horizon);
    const nesh::SimResult frozen =
        nesh::run(game, topo, dp, all_on, cfg.sim.delta_seconds, steps, 1, x0);
    bool frozen_ok = true;
    for (const auto& rec : frozen.records) {
      for (int i = 0; i < n; ++i) frozen_ok = frozen_ok && rec.x[i] == x0[i];
      frozen_ok = frozen_ok && rec.theta == dp.theta0;
    }
    std::printf("freeze_under_attack=%s\n", frozen_ok ? "ok" : "FAIL");
    ok = ok && frozen_ok;

    const nesh::DosTrace trace =
        nesh::generate_dos(0.5, 25.0 * cfg.sim.delta_seconds, horizon, seed + 1);
    const nesh::SimResult res =
        nesh::run(game, topo, dp, trace, cfg.sim.delta_seconds, steps, 1, x0);
    bool theta_ok = true;
    double chain = dp.theta0;
    std::size_t idx = 0;
    for (std::int64_t k = 0; k <= steps; ++k) {
      if (k > 0 && !trace.is_active(static_cast<double>(k) * cfg.sim.delta_seconds))
        chain *= dp.gamma1;
      if (idx < res.records.size() && res.records[idx].k == k) {
        theta_ok = theta_ok && res.records[idx].theta == chain;
        ++idx;
      }
    }
    theta_ok = theta_ok && idx == res.records.size();
    std::printf("scaling_identity=%s\n", theta_ok ? "ok" : "FAIL");
    ok = ok && theta_ok;
  }

  std::printf("verify=%s\n", ok ? "pass" : "FAIL");
  return ok ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantized NE seeking under DoS: tuner, trace tools, simulator"};
  app.require_subcommand(1);

  auto* tune = app.add_subcommand("tune", "synthesize design constants");
  std::string tune_config;
  std::string tune_out;
  tune->add_option("--config", tune_config, "run config (JSON)")->required();
  tune->add_option("--out", tune_out, "write config with the synthesized design pinned");

  auto* gen = app.add_subcommand("gen-dos", "generate a DoS trace");
  double gen_duty = 0.5, gen_period = 30.0, gen_horizon = 1500.0, gen_delta = 0.01;
  double gen_resolution = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  std::vector<double> gen_tau_d, gen_t_dur;
  gen->add_option("--duty", gen_duty, "target attacked fraction in [0, 1)")->required();
  gen->add_option("--period", gen_period, "mean seconds between attack onsets")->required();
  gen->add_option("--horizon", gen_horizon, "trace horizon in seconds")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "trace file to write");
  gen->add_option("--delta", gen_delta, "sampling period for the load report");
  gen->add_option("--tau-d", gen_tau_d, "frequency slopes to certify");
  gen->add_option("--t-dur", gen_t_dur, "duration slopes to certify");
  gen->add_option("--resolution", gen_resolution, "certify grid spacing (default delta/100)");

  auto* runc = app.add_subcommand("run", "simulate a config against a trace");
  std::string run_config, run_trace, run_out;
  std::optional<std::uint64_t> run_seed;
  std::optional<std::int64_t> run_decim;
  bool run_dual = false;
  runc->add_option("--config", run_config, "run config (JSON)")->required();
  runc->add_option("--trace", run_trace, "trace file overriding the dos section");
  runc->add_option("--out", run_out, "trajectory CSV to write");
  runc->add_option("--seed", run_seed, "override the dos generator seed");
  runc->add_option("--decimation", run_decim, "override record decimation");
  runc->add_flag("--dual-state", run_dual, "check encoder/decoder synchrony every step");

  auto* verify = app.add_subcommand("verify", "cross-check engine invariants");
  std::string verify_config;
  std::int64_t verify_steps = 400;
  std::uint64_t verify_seed = 20259;
  verify->add_option("--config", verify_config, "run config (JSON)")->required();
  verify->add_option("--steps", verify_steps, "steps per suite");
  verify->add_option("--seed", verify_seed, "pattern seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (tune->parsed()) return cmd_tune(tune_config, tune_out);
    if (gen->parsed()) {
      const double res = gen_resolution > 0.0 ? gen_resolution : gen_delta / 100.0;
      return cmd_gen_dos(gen_duty, gen_period, gen_horizon, gen_seed, gen_out, gen_delta,
                         gen_tau_d, gen_t_dur, res);
    }
    if (runc->parsed()) return cmd_run(run_config, run_trace, run_out, run_seed, run_decim, run_dual);
    if (verify->parsed()) return cmd_verify(verify_config, verify_steps, verify_seed);
  } catch (const nesh::InfeasibleDesign& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
