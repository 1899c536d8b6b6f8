#pragma once
// Denial-of-service interval model on a finite horizon of seconds.
//
// A trace is a normalized set of attack intervals [start, start + dur)
// inside [0, horizon]; dur = 0 marks a pulse covering exactly {start}.
// Construction sorts and merges, so stored intervals are disjoint with
// strictly increasing starts. Two envelope families describe a trace:
//   frequency  n(tau, t)   <= eta   + (t - tau) / tau_d
//   duration  |Xi(tau, t)| <= kappa + (t - tau) / t_dur
// where n counts attack onsets in [tau, t] and |Xi| is the Lebesgue
// measure of the attacked subset. certify() returns the tightest
// (eta, kappa) for given (tau_d, t_dur); with 1/t_dur + delta/tau_d < 1
// the number of attack-free sampling instants obeys the linear lower
// bound ts_lower_bound(). At or beyond that boundary equilibrium seeking
// is impossible (the protocol freezes), so ts_lower_bound refuses.

#include <cstdint>
#include <string>
#include <vector>

namespace nesh {

struct DosInterval {
  double start{0.0};
  double duration{0.0};
};

struct DosParams {
  double eta{0.0};
  double tau_d{0.0};
  double kappa{0.0};
  double t_dur{0.0};
};

class DosTrace {
 public:
  // Intervals may arrive unsorted/overlapping; they must satisfy
  // start >= 0, duration >= 0, start + duration <= horizon.
  DosTrace(std::vector<DosInterval> intervals, double horizon);

  [[nodiscard]] double horizon() const { return horizon_; }
  [[nodiscard]] const std::vector<DosInterval>& intervals() const { return iv_; }

  // Membership of instant t; requires 0 <= t <= horizon.
  [[nodiscard]] bool is_active(double t) const;

  // Attack onsets in the closed window [tau, t].
  [[nodiscard]] std::int64_t onset_count(double tau, double t) const;
  // Lebesgue measure of the attacked subset of [tau, t].
  [[nodiscard]] double active_measure(double tau, double t) const;

  void save(const std::string& path) const;
  static DosTrace load(const std::string& path);

 private:
  std::vector<DosInterval> iv_;
  std::vector<double> starts_;
  std::vector<double> ends_;
  std::vector<double> cumdur_;  // cumdur_[q] = total duration of iv_[0..q)
  double horizon_;
};

// Seeded alternating off/on generator aiming at E[measure]/horizon = duty
// and one attack per mean_period. duty in [0, 1), mean_period > 0,
// horizon > 0; duty = 0 yields an empty trace. Deterministic for a fixed
// seed (own bit-exact uniform sampler on top of mt19937_64).
[[nodiscard]] DosTrace generate_dos(double duty, double mean_period, double horizon,
                                    std::uint64_t seed);

// Tightest envelope parameters for the given slopes. Extrema of both
// envelopes sit on interval endpoints, so the endpoint-pair scan is
// exact; the resolution grid (spacing >= resolution, at most 2048 points)
// is a redundant cross-check. tau_d > 0, t_dur > 0, resolution > 0.
[[nodiscard]] DosParams certify(const DosTrace& trace, double tau_d, double t_dur,
                                double resolution);

// (1 - 1/t_dur - delta/tau_d) k - (kappa + eta delta)/delta; requires the
// resilience condition 1/t_dur + delta/tau_d < 1.
[[nodiscard]] double ts_lower_bound(const DosParams& p, double delta, std::int64_t k);

// Attack-free sampling instants m*delta for m = 0..k (inclusive); needs
// k*delta <= horizon.
[[nodiscard]] std::int64_t count_successes(const DosTrace& trace, double delta, std::int64_t k);

}  // namespace nesh
