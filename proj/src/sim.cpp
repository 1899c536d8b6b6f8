#include "nesh/sim.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nesh {

namespace {

constexpr double kThetaFloor = 1e-300;

void check_design(const DesignParams& dp) {
  if (!(dp.h > 0.0)) throw std::invalid_argument("design gain h must be positive");
  if (!(dp.delta > 0.0)) throw std::invalid_argument("design delta must be positive");
  if (!(dp.gamma1 > 0.0) || !(dp.gamma1 < 1.0))
    throw std::invalid_argument("gamma1 must lie in (0, 1)");
  if (!(dp.theta0 > 0.0)) throw std::invalid_argument("theta0 must be positive");
  if (dp.r_x < 1 || dp.r_y < 1) throw std::invalid_argument("quantizer ranges must be >= 1");
}

// 1_N (x) v stacked row-major: entry (i, j) = v_j.
Vec kron_ones(const Vec& v, int n) {
  Vec out(static_cast<Eigen::Index>(n) * v.size());
  for (int i = 0; i < n; ++i) out.segment(i * v.size(), v.size()) = v;
  return out;
}

// v - theta * q(v / theta), component-wise.
Vec quantize_residual(const UniformQuantizer& q, const Vec& v, double theta) {
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const QuantResult qr = q.quantize(v[i] / theta);
    out[i] = v[i] - theta * static_cast<double>(qr.symbol);
  }
  return out;
}

}  // namespace

NetworkState initial_state(const Vec& x0, const DesignParams& dp) {
  check_design(dp);
  const auto n = static_cast<int>(x0.size());
  if (n < 2) throw std::invalid_argument("need at least two players");
  if (!x0.allFinite()) throw std::invalid_argument("x0 must be finite");
  NetworkState st;
  st.x = x0;
  st.y = Mat::Zero(n, n);
  st.x_hat = Vec::Zero(n);
  st.y_hat = Mat::Zero(n, n);
  st.scaling = ScalingState{dp.theta0, dp.gamma1};
  st.k = 0;
  return st;
}

Vec control_input(const GameSpec& game, const Vec& x, const Mat& y, double delta, bool dos_now) {
  if (dos_now) return Vec::Zero(x.size());
  return (-delta * game.mixed_pseudogradient(x, y)).eval();
}

StepRecord step(NetworkState& st, const GameSpec& game, const Topology& topo,
                const DesignParams& dp, const UniformQuantizer& qx, const UniformQuantizer& qy,
                bool dos_now, bool dos_next, const Vec& x_star, DecoderState* decoder) {
  const int n = game.n();
  if (topo.n() != n || st.x.size() != n) throw std::invalid_argument("state/game/topology size mismatch");
  const double theta = st.scaling.theta;

  // (a) plant
  Vec x_next = st.x;
  if (!dos_now) {
    const Vec g = game.mixed_pseudogradient(st.x, st.y);
    for (int i = 0; i < n; ++i) x_next[i] = st.x[i] - dp.delta * g[i];
  }

  // (b) estimates, driven by the step-k hat values
  Mat y_next = st.y;
  if (!dos_now) {
    const Mat& a = topo.adjacency();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double lap = 0.0;
        for (int l = 0; l < n; ++l) {
          if (a(i, l) > 0.0) lap += a(i, l) * (st.y_hat(i, j) - st.y_hat(l, j));
        }
        const double own = a(i, j) * (st.y_hat(i, j) - st.x_hat[j]);
        y_next(i, j) = st.y(i, j) - dp.h * (lap + own);
      }
    }
  }

  // (c) encoders/decoders; a jammed next instant freezes every hat
  StepRecord rec;
  if (!dos_next) {
    for (int j = 0; j < n; ++j) {
      const double arg = (x_next[j] - st.x_hat[j]) / theta;
      rec.max_qarg_x = std::max(rec.max_qarg_x, std::fabs(arg));
      const QuantResult qr = qx.quantize(arg);
      rec.saturated = rec.saturated || qr.saturated;
      const double delta_hat = theta * static_cast<double>(qr.symbol);
      st.x_hat[j] += delta_hat;
      if (decoder != nullptr) decoder->x_hat[j] += delta_hat;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double arg = (y_next(i, j) - st.y_hat(i, j)) / theta;
        rec.max_qarg_y = std::max(rec.max_qarg_y, std::fabs(arg));
        const QuantResult qr = qy.quantize(arg);
        rec.saturated = rec.saturated || qr.saturated;
        const double delta_hat = theta * static_cast<double>(qr.symbol);
        st.y_hat(i, j) += delta_hat;
        if (decoder != nullptr) decoder->y_hat(i, j) += delta_hat;
      }
    }
    if (decoder != nullptr) {
      for (int j = 0; j < n; ++j) {
        if (decoder->x_hat[j] != st.x_hat[j])
          throw std::logic_error("encoder/decoder desynchronized on the action channel");
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (decoder->y_hat(i, j) != st.y_hat(i, j))
            throw std::logic_error("encoder/decoder desynchronized on the estimate channel");
        }
      }
    }
  }

  // (d) scaling
  st.scaling = scale_step(st.scaling, dos_next);
  if (st.scaling.theta < kThetaFloor)
    throw std::runtime_error("scaling factor underflow: theta < 1e-300, run numerically exhausted");

  st.x = std::move(x_next);
  st.y = std::move(y_next);
  st.k += 1;

  rec.k = st.k;
  rec.dos = dos_next;
  rec.x = st.x;
  rec.theta = st.scaling.theta;
  rec.err_ne = (st.x - x_star).norm();
  return rec;
}

ErrorState error_state_of(const NetworkState& st, const Vec& x_star) {
  const auto n = static_cast<int>(st.x.size());
  ErrorState err;
  err.chi_raw = st.x - x_star;
  err.e_x = st.x - st.x_hat;
  err.y_bar.resize(static_cast<Eigen::Index>(n) * n);
  err.e_y.resize(static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      err.y_bar[i * n + j] = st.y(i, j) - st.x[j];
      err.e_y[i * n + j] = st.y(i, j) - st.y_hat(i, j);
    }
  }
  return err;
}

ErrorState oracle_step(const ErrorState& err, double theta, bool dos_now, bool dos_next,
                       const GameSpec& game, const ProtocolMatrices& pm, const DesignParams& dp,
                       const UniformQuantizer& qx, const UniformQuantizer& qy, const Vec& x_star) {
  const int n = game.n();
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  if (err.y_bar.size() != nn || err.e_y.size() != nn || err.chi_raw.size() != n ||
      err.e_x.size() != n)
    throw std::invalid_argument("error state dimensions mismatch");
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  const double h = pm.gain;

  if (dos_now && dos_next) return err;  // both instants jammed: everything holds

  ErrorState out = err;
  if (dos_now) {
    // Attacked now, free next: plant and estimates froze, but the upcoming
    // transmission re-quantizes the standing errors.
    out.e_x = quantize_residual(qx, err.e_x, theta);
    out.e_y = quantize_residual(qy, err.e_y, theta);
    return out;
  }

  // Attack-free now: reconstruct the pseudogradient at the mixed point.
  Vec x = err.chi_raw + x_star;
  Mat est(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) est(i, j) = err.y_bar[i * n + j] + x[j];
  const Vec p = game.mixed_pseudogradient(x, est);

  const Vec k1ex = kron_ones(err.e_x, n);
  out.y_bar = pm.h * err.y_bar + dp.delta * kron_ones(p, n) + h * (pm.s * err.e_y) -
              h * (pm.a0 * k1ex);
  out.chi_raw = err.chi_raw - dp.delta * p;
  const Vec vx = err.e_x - dp.delta * p;
  const Vec vy = pm.g * err.e_y - h * (pm.a0 * k1ex) - h * (pm.s * err.y_bar);
  if (dos_next) {
    out.e_x = vx;
    out.e_y = vy;
  } else {
    out.e_x = quantize_residual(qx, vx, theta);
    out.e_y = quantize_residual(qy, vy, theta);
  }
  return out;
}

ScaledCoordinates scaled_coordinates(const ErrorState& err, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  ScaledCoordinates sc;
  sc.beta = err.y_bar / theta;
  sc.chi = err.chi_raw / theta;
  sc.xi_x = err.e_x / theta;
  sc.xi_y = err.e_y / theta;
  sc.pi_norm = std::hypot(sc.beta.norm(), sc.chi.norm());
  return sc;
}

SimResult run(const GameSpec& game, const Topology& topo, const DesignParams& dp,
              const DosTrace& trace, double delta_seconds, std::int64_t horizon_steps,
              std::int64_t record_decimation, const Vec& x0, bool dual_state_check) {
  check_design(dp);
  if (game.n() != topo.n() || x0.size() != game.n())
    throw std::invalid_argument("game/topology/x0 size mismatch");
  if (!(delta_seconds > 0.0)) throw std::invalid_argument("delta_seconds must be positive");
  if (horizon_steps < 1) throw std::invalid_argument("horizon_steps must be >= 1");
  if (record_decimation < 1) throw std::invalid_argument("record_decimation must be >= 1");
  if (static_cast<double>(horizon_steps) * delta_seconds > trace.horizon())
    throw std::invalid_argument("trace horizon shorter than the simulation window");

  const Vec x_star = game.solve_ne();
  const UniformQuantizer qx(dp.r_x);
  const UniformQuantizer qy(dp.r_y);
  NetworkState st = initial_state(x0, dp);
  DecoderState dec{st.x_hat, st.y_hat};

  SimResult res;
  res.x_star = x_star;
  StepRecord r0;
  r0.k = 0;
  r0.dos = trace.is_active(0.0);
  r0.x = x0;
  r0.theta = dp.theta0;
  r0.err_ne = (x0 - x_star).norm();
  res.records.push_back(r0);
  res.summary.initial_err = r0.err_ne;
  res.summary.min_theta = dp.theta0;

  for (std::int64_t k = 0; k < horizon_steps; ++k) {
    const bool dos_now = trace.is_active(static_cast<double>(k) * delta_seconds);
    const bool dos_next = trace.is_active(static_cast<double>(k + 1) * delta_seconds);
    const StepRecord rec = step(st, game, topo, dp, qx, qy, dos_now, dos_next, x_star,
                                dual_state_check ? &dec : nullptr);
    if (!dos_next) ++res.summary.ts_empirical;
    res.summary.min_theta = std::min(res.summary.min_theta, rec.theta);
    res.summary.max_qarg_x = std::max(res.summary.max_qarg_x, rec.max_qarg_x);
    res.summary.max_qarg_y = std::max(res.summary.max_qarg_y, rec.max_qarg_y);
    if (rec.saturated && !res.summary.first_saturation.has_value())
      res.summary.first_saturation = rec.k;
    if (rec.k % record_decimation == 0 || rec.k == horizon_steps) res.records.push_back(rec);
  }
  res.summary.final_err = (st.x - x_star).norm();
  res.x_final = st.x;
  return res;
}

void write_csv(const std::string& path, const SimResult& result, int n_players) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw std::runtime_error("cannot open CSV for writing: " + path);
  std::fprintf(f, "k,dos");
  for (int i = 1; i <= n_players; ++i) std::fprintf(f, ",x_%d", i);
  std::fprintf(f, ",theta,err_ne,max_qarg_x,max_qarg_y,saturated\n");
  for (const auto& rec : result.records) {
    std::fprintf(f, "%lld,%d", static_cast<long long>(rec.k), rec.dos ? 1 : 0);
    for (int i = 0; i < n_players; ++i) std::fprintf(f, ",%.17g", rec.x[i]);
    std::fprintf(f, ",%.17g,%.17g,%.17g,%.17g,%d\n", rec.theta, rec.err_ne, rec.max_qarg_x,
                 rec.max_qarg_y, rec.saturated ? 1 : 0);
  }
  if (std::fclose(f) != 0) throw std::runtime_error("write failed: " + path);
}

}  // namespace nesh
