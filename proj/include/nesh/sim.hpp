#pragma once
// Quantized NE-seeking protocol over a DoS-prone network, plus the
// closed-form error-coordinate recursions used as an independent
// cross-check oracle.
//
// Per sampling step k the engine applies, in order:
//   (a) plant update        x_i(k+1) = x_i(k) + u_i(k), where u_i is the
//       delta-scaled partial at (x_i, y_{-i}) on attack-free steps and 0
//       under attack;
//   (b) estimate update     y_ij(k+1) = y_ij(k) - sigma(k) [ sum_l a_il
//       (yh_ij - yh_lj) + a_ij (yh_ij - xh_j) ], sigma(k) = h or 0,
//       evaluated on the step-k hat values;
//   (c) encoder/decoder     hats advance by theta(k) * symbol when the
//       NEXT instant is attack-free, and freeze otherwise (a jammed
//       transmission updates nobody);
//   (d) scaling             theta(k+1) = gamma1 * theta(k) on attack-free
//       next instants, held exactly under attack.
// Channels are noiseless, so one hat state serves encoder and decoder; a
// diagnostic dual-state mode keeps a separate decoder copy fed only by
// the integer symbols and insists on bit-identical values.
//
// The oracle advances the stacked error coordinates
//   y_bar = y - 1 (x) x,  chi_raw = x - x*,  e_x = x - xh,  e_y = y - yh
// through the four (now, next) attack-status cases of the closed-form
// recursions and must agree with the engine's step to floating-point
// accuracy when started from the same state.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nesh/dos.hpp"
#include "nesh/game.hpp"
#include "nesh/quantizer.hpp"
#include "nesh/topology.hpp"
#include "nesh/tuner.hpp"

namespace nesh {

struct NetworkState {
  Vec x;          // N actions
  Mat y;          // N x N estimates, row i = player i's view
  Vec x_hat;      // shared encoder/decoder state for actions
  Mat y_hat;      // shared encoder/decoder state for estimates
  ScalingState scaling;
  std::int64_t k{0};
};

// Zero estimates and hats, theta = theta0: both channel ends agree on the
// initial state by convention, so step 0 needs no special casing.
[[nodiscard]] NetworkState initial_state(const Vec& x0, const DesignParams& dp);

// Record of the post-step instant; max_qarg_* are the largest quantizer
// argument magnitudes of the encoding event at that instant (0 when the
// instant is attacked and nothing is encoded). saturated flags whether
// any channel argument reached its quantizer's saturation edge.
struct StepRecord {
  std::int64_t k{0};
  bool dos{false};
  Vec x;
  double theta{0.0};
  double err_ne{0.0};
  double max_qarg_x{0.0};
  double max_qarg_y{0.0};
  bool saturated{false};
};

// Decoder-side replica for the diagnostic dual-state mode.
struct DecoderState {
  Vec x_hat;
  Mat y_hat;
};

// u(k): zero under attack, else -delta * mixed pseudogradient.
[[nodiscard]] Vec control_input(const GameSpec& game, const Vec& x, const Mat& y, double delta,
                                bool dos_now);

// One protocol step; st.k advances by one and the returned record
// describes the new instant. x_star is used for err_ne only. When
// decoder is non-null it is advanced from the transmitted symbols alone
// and compared bit-for-bit against the engine hats (throws on mismatch).
StepRecord step(NetworkState& st, const GameSpec& game, const Topology& topo,
                const DesignParams& dp, const UniformQuantizer& qx, const UniformQuantizer& qy,
                bool dos_now, bool dos_next, const Vec& x_star, DecoderState* decoder = nullptr);

// Stacked error coordinates (dimension N^2 for y_bar/e_y, N otherwise).
struct ErrorState {
  Vec y_bar;
  Vec chi_raw;
  Vec e_x;
  Vec e_y;
};

[[nodiscard]] ErrorState error_state_of(const NetworkState& st, const Vec& x_star);

// Closed-form recursion for one step, dispatching on the four
// (dos_now, dos_next) cases; theta is theta(k). The pseudogradient is
// reconstructed from (y_bar, chi_raw) via the mixed evaluation.
[[nodiscard]] ErrorState oracle_step(const ErrorState& err, double theta, bool dos_now,
                                     bool dos_next, const GameSpec& game,
                                     const ProtocolMatrices& pm, const DesignParams& dp,
                                     const UniformQuantizer& qx, const UniformQuantizer& qy,
                                     const Vec& x_star);

struct ScaledCoordinates {
  Vec beta;
  Vec chi;
  Vec xi_x;
  Vec xi_y;
  double pi_norm{0.0};  // hypot(||beta||, ||chi||)
};

[[nodiscard]] ScaledCoordinates scaled_coordinates(const ErrorState& err, double theta);

struct RunSummary {
  double final_err{0.0};
  double initial_err{0.0};
  std::optional<std::int64_t> first_saturation;
  double min_theta{0.0};
  std::int64_t ts_empirical{0};  // attack-free instants among 1..K (zoom events)
  double max_qarg_x{0.0};
  double max_qarg_y{0.0};
};

struct SimResult {
  std::vector<StepRecord> records;  // decimated, always includes instants 0 and K
  RunSummary summary;
  Vec x_final;
  Vec x_star;
};

// Runs horizon_steps protocol steps against the trace (which must cover
// horizon_steps * delta_seconds). Records every record_decimation-th
// instant. Throws when theta falls below 1e-300 (numerically exhausted).
[[nodiscard]] SimResult run(const GameSpec& game, const Topology& topo, const DesignParams& dp,
                            const DosTrace& trace, double delta_seconds,
                            std::int64_t horizon_steps, std::int64_t record_decimation,
                            const Vec& x0, bool dual_state_check = false);

// CSV rows k,dos,x_1..x_N,theta,err_ne,max_qarg_x,max_qarg_y,saturated at
// 17 significant digits.
void write_csv(const std::string& path, const SimResult& result, int n_players);

}  // namespace nesh
