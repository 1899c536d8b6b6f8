#pragma once
// Design-constant synthesis for the quantized protocol. Given the game
// constants (mu, l), the consensus matrices and user bounds on the
// initial data, the pipeline chooses
//   h       consensus gain (safety factor below h_max),
//   delta   gradient step, feasible iff
//             (a) delta < 2 mu / l^2
//             (b) delta < (1 - ||H||) / (l sqrt(N))
//             (c) B(delta) = (1 - ||H|| - l sqrt(N) delta)
//                            * (1 - sqrt(1 - 2 mu delta + (l delta)^2))
//                            - N^2 l^2 delta^2 > 0,
//   gamma1  zoom factor strictly between rho(Hbar) and 1,
//   C       envelope bound on the scaled consensus/optimality pair,
//   R_x/R_y minimal quantizer ranges that keep every transmission
//           unsaturated under the envelope.
// Hbar is the 2x2 comparison matrix
//   [ ||H|| + delta l sqrt(N)   delta l N ]
//   [ delta l N                 sqrt(1 - 2 mu delta + (delta l)^2) ];
// it is symmetric with non-negative entries, so rho(Hbar) equals its
// spectral norm and powers obey ||(Hbar/gamma1)^k|| = gamma^k exactly with
// gamma = rho(Hbar)/gamma1 and prefactor c_gamma = 1.

#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

#include "nesh/game.hpp"
#include "nesh/topology.hpp"

namespace nesh {

struct DesignParams {
  double h{0.0};
  double delta{0.0};
  double gamma1{0.0};
  double theta0{1.0};
  double c_bound{0.0};
  double c_gamma{1.0};
  double gamma_decay{0.0};  // rho(Hbar)/gamma1
  double rho_hbar{0.0};
  std::int64_t r_x{1};
  std::int64_t r_y{1};
};

// Raised when no feasible design exists for the given inputs.
struct InfeasibleDesign : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[nodiscard]] Eigen::Matrix2d hbar_matrix(double norm_h, double delta, double l, double mu, int n);
[[nodiscard]] double rho_hbar(double norm_h, double delta, double l, double mu, int n);

struct DeltaReport {
  bool contraction{false};   // (a)
  bool margin{false};        // (b)
  bool coupling{false};      // (c)
  double b_value{0.0};
  // The (1 - ||H||)/(mu sqrt(N)) variant of (b), reported for diagnosis
  // only; the l-denominator version above is the operative constraint.
  double margin_alt_bound{0.0};
  [[nodiscard]] bool feasible() const { return contraction && margin && coupling; }
};

[[nodiscard]] DeltaReport delta_report(double delta, double norm_h, double l, double mu, int n);
[[nodiscard]] bool delta_feasible(double delta, double norm_h, double l, double mu, int n);

// Minimizes rho(Hbar) over the feasible delta range (log grid plus
// golden-section refinement). Throws InfeasibleDesign when ||H|| >= 1.
[[nodiscard]] double select_delta(double norm_h, double l, double mu, int n);

struct CBound {
  double c{0.0};
  double c_gamma{1.0};
  double gamma{0.0};
};

// Envelope bound C = max of the initial-data term and the accumulated
// quantization-noise term. Requires rho < gamma1 < 1, theta0 > 0 and
// non-negative c_x0, c_xstar.
[[nodiscard]] CBound bound_c(double h, double gamma1, double theta0, double rho,
                             double norm_s, double norm_a0, int n, double c_x0, double c_xstar);

struct RequiredR {
  std::int64_t r_x{1};
  std::int64_t r_y{1};
  double a_x{0.0};  // transmission-range bound the x channel must cover
  double a_y{0.0};
};

// Minimal integer ranges with (2R+1)/2 >= A for
//   A_x = N/(2 gamma1) + (1 + sqrt(N)) delta l C
//   A_y = N ||G||/(2 gamma1) + h ||A0|| N/(2 gamma1) + h ||S|| C.
[[nodiscard]] RequiredR required_r(double c, double gamma1, double delta, double l, double h,
                                   double norm_g, double norm_a0, double norm_s, int n);

// Full pipeline: h = h_safety * h_max(topo), matrices and norms, feasible
// delta, gamma1 = rho + gamma1_margin * (1 - rho), C, R. gamma1_margin in
// (0, 1). Warns (NESH_LOG) when theta0 < 2 gamma1 c_x0, which voids the
// no-saturation guarantee for the very first transmission.
[[nodiscard]] DesignParams synthesize(const GameSpec& game, const Topology& topo, double theta0,
                                      double c_x0, double c_xstar, double gamma1_margin,
                                      double h_safety = 0.99);

}  // namespace nesh
