#include "nesh/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nesh/log.hpp"

namespace nesh {

namespace {

constexpr int kGridPoints = 256;
constexpr int kGoldenIters = 80;

// Only positivity is demanded of the game constants: either ordering of mu
// and l is legal here, the envelope algebra covers both.
void check_common(double norm_h, double l, double mu, int n) {
  if (n < 2) throw std::invalid_argument("need at least two players");
  if (!(l > 0.0) || !(mu > 0.0)) throw std::invalid_argument("game constants must be positive");
  if (!(norm_h >= 0.0)) throw std::invalid_argument("||H|| must be non-negative");
}

}  // namespace

Eigen::Matrix2d hbar_matrix(double norm_h, double delta, double l, double mu, int n) {
  check_common(norm_h, l, mu, n);
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const double rn = std::sqrt(static_cast<double>(n));
  const double disc = std::max(0.0, 1.0 - 2.0 * delta * mu + (delta * l) * (delta * l));
  Eigen::Matrix2d hb;
  hb(0, 0) = norm_h + delta * l * rn;
  hb(0, 1) = delta * l * static_cast<double>(n);
  hb(1, 0) = hb(0, 1);
  hb(1, 1) = std::sqrt(disc);
  return hb;
}

double rho_hbar(double norm_h, double delta, double l, double mu, int n) {
  const Eigen::Matrix2d hb = hbar_matrix(norm_h, delta, l, mu, n);
  // Symmetric non-negative 2x2: spectral radius is the larger eigenvalue.
  const double half_tr = 0.5 * (hb(0, 0) + hb(1, 1));
  const double half_gap = 0.5 * (hb(0, 0) - hb(1, 1));
  return half_tr + std::hypot(half_gap, hb(0, 1));
}

DeltaReport delta_report(double delta, double norm_h, double l, double mu, int n) {
  check_common(norm_h, l, mu, n);
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const double rn = std::sqrt(static_cast<double>(n));
  DeltaReport rep;
  rep.contraction = delta < 2.0 * mu / (l * l);
  rep.margin = delta < (1.0 - norm_h) / (l * rn);
  rep.margin_alt_bound = (1.0 - norm_h) / (mu * rn);
  const double disc = std::max(0.0, 1.0 - 2.0 * mu * delta + (l * delta) * (l * delta));
  rep.b_value = (1.0 - norm_h - l * rn * delta) * (1.0 - std::sqrt(disc)) -
                static_cast<double>(n) * static_cast<double>(n) * l * l * delta * delta;
  rep.coupling = rep.b_value > 0.0;
  return rep;
}

bool delta_feasible(double delta, double norm_h, double l, double mu, int n) {
  return delta_report(delta, norm_h, l, mu, n).feasible();
}

double select_delta(double norm_h, double l, double mu, int n) {
  check_common(norm_h, l, mu, n);
  if (!(norm_h < 1.0))
    throw InfeasibleDesign("no feasible gradient step: ||H|| >= 1");
  const double rn = std::sqrt(static_cast<double>(n));
  const double hi = std::min(2.0 * mu / (l * l), (1.0 - norm_h) / (l * rn));

  const auto score = [&](double d) {
    if (!(d > 0.0) || !delta_feasible(d, norm_h, l, mu, n))
      return std::numeric_limits<double>::infinity();
    return rho_hbar(norm_h, d, l, mu, n);
  };

  double best_d = -1.0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> grid(kGridPoints);
  const double lo_exp = std::log(hi) - std::log(1e9);
  const double hi_exp = std::log(hi * (1.0 - 1e-9));
  for (int i = 0; i < kGridPoints; ++i) {
    const double e = lo_exp + (hi_exp - lo_exp) * static_cast<double>(i) / (kGridPoints - 1);
    grid[static_cast<std::size_t>(i)] = std::exp(e);
  }
  int best_i = -1;
  for (int i = 0; i < kGridPoints; ++i) {
    const double v = score(grid[static_cast<std::size_t>(i)]);
    if (v < best) {
      best = v;
      best_d = grid[static_cast<std::size_t>(i)];
      best_i = i;
    }
  }
  if (best_i < 0)
    throw InfeasibleDesign("no feasible gradient step on the search range");

  // Golden-section refinement inside the bracketing grid cells.
  double a = grid[static_cast<std::size_t>(std::max(0, best_i - 1))];
  double b = grid[static_cast<std::size_t>(std::min(kGridPoints - 1, best_i + 1))];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = score(x1);
  double f2 = score(x2);
  for (int it = 0; it < kGoldenIters; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = score(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = score(x2);
    }
  }
  const double refined = f1 <= f2 ? x1 : x2;
  const double refined_score = std::min(f1, f2);
  return refined_score < best ? refined : best_d;
}

CBound bound_c(double h, double gamma1, double theta0, double rho, double norm_s, double norm_a0,
               int n, double c_x0, double c_xstar) {
  if (n < 2) throw std::invalid_argument("need at least two players");
  if (!(h > 0.0) || !(theta0 > 0.0)) throw std::invalid_argument("h and theta0 must be positive");
  if (!(rho < gamma1) || !(gamma1 < 1.0))
    throw std::invalid_argument("need rho(Hbar) < gamma1 < 1");
  if (c_x0 < 0.0 || c_xstar < 0.0) throw std::invalid_argument("data bounds must be non-negative");
  CBound cb;
  cb.gamma = rho / gamma1;
  cb.c_gamma = 1.0;
  const double cbar = std::max(cb.gamma * cb.c_gamma, 1.0);
  const auto nd = static_cast<double>(n);
  const double init_term =
      cbar / theta0 * std::sqrt(nd * nd * c_x0 * c_x0 + nd * (c_xstar + c_x0) * (c_xstar + c_x0));
  const double noise_term =
      cb.c_gamma * h * nd * (norm_s + norm_a0) / (2.0 * gamma1 * gamma1 * (1.0 - cb.gamma));
  cb.c = std::max(init_term, noise_term);
  return cb;
}

RequiredR required_r(double c, double gamma1, double delta, double l, double h, double norm_g,
                     double norm_a0, double norm_s, int n) {
  if (n < 2) throw std::invalid_argument("need at least two players");
  if (!(c >= 0.0) || !(gamma1 > 0.0) || !(gamma1 < 1.0) || !(delta > 0.0) || !(l > 0.0) ||
      !(h > 0.0))
    throw std::invalid_argument("invalid design inputs");
  const auto nd = static_cast<double>(n);
  const double rn = std::sqrt(nd);
  RequiredR rr;
  rr.a_x = nd / (2.0 * gamma1) + (1.0 + rn) * delta * l * c;
  rr.a_y = nd * norm_g / (2.0 * gamma1) + h * norm_a0 * nd / (2.0 * gamma1) + h * norm_s * c;
  if (!std::isfinite(rr.a_x) || !std::isfinite(rr.a_y))
    throw InfeasibleDesign("quantizer range bound is not finite");
  const auto minimal = [](double a) {
    const auto r = static_cast<std::int64_t>(std::ceil(a - 0.5));
    return std::max<std::int64_t>(1, r);
  };
  rr.r_x = minimal(rr.a_x);
  rr.r_y = minimal(rr.a_y);
  return rr;
}

DesignParams synthesize(const GameSpec& game, const Topology& topo, double theta0, double c_x0,
                        double c_xstar, double gamma1_margin, double h_safety) {
  if (game.n() != topo.n()) throw std::invalid_argument("game and topology sizes differ");
  if (!(theta0 > 0.0)) throw std::invalid_argument("theta0 must be positive");
  if (!(gamma1_margin > 0.0) || !(gamma1_margin < 1.0))
    throw std::invalid_argument("gamma1_margin must lie in (0, 1)");
  if (!(h_safety > 0.0) || !(h_safety < 1.0))
    throw std::invalid_argument("h_safety must lie in (0, 1)");

  const int n = game.n();
  const GameConstants gc = game.constants();
  DesignParams dp;
  dp.h = h_safety * h_max(topo);
  const ProtocolMatrices pm = build_matrices(topo, dp.h);
  const double norm_h = spectral_norm(pm.h);
  const double norm_s = spectral_norm(pm.s);
  const double norm_g = spectral_norm(pm.g);
  const double norm_a0 = spectral_norm(pm.a0);

  dp.delta = select_delta(norm_h, gc.lipschitz_l, gc.mu, n);
  dp.rho_hbar = rho_hbar(norm_h, dp.delta, gc.lipschitz_l, gc.mu, n);
  dp.gamma1 = dp.rho_hbar + gamma1_margin * (1.0 - dp.rho_hbar);
  dp.theta0 = theta0;

  const CBound cb = bound_c(dp.h, dp.gamma1, theta0, dp.rho_hbar, norm_s, norm_a0, n, c_x0, c_xstar);
  dp.c_bound = cb.c;
  dp.c_gamma = cb.c_gamma;
  dp.gamma_decay = cb.gamma;

  const RequiredR rr =
      required_r(cb.c, dp.gamma1, dp.delta, gc.lipschitz_l, dp.h, norm_g, norm_a0, norm_s, n);
  dp.r_x = rr.r_x;
  dp.r_y = rr.r_y;

  if (theta0 < 2.0 * dp.gamma1 * c_x0) {
    logf(LogLevel::kWarn,
         "theta0 = %g is below 2*gamma1*c_x0 = %g; the first transmission may saturate",
         theta0, 2.0 * dp.gamma1 * c_x0);
  }
  const Vec xstar = game.solve_ne();
  const double xstar_max = xstar.cwiseAbs().maxCoeff();
  if (c_xstar < xstar_max) {
    logf(LogLevel::kWarn, "c_xstar = %g is below ||x*||_inf = %g; the envelope bound is void",
         c_xstar, xstar_max);
  }
  return dp;
}

}  // namespace nesh
