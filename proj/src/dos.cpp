#include "nesh/dos.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nesh {

namespace {

constexpr int kMaxGridPoints = 2048;

// [0, 1) from the top 53 bits; bit-exact on every platform.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace

DosTrace::DosTrace(std::vector<DosInterval> intervals, double horizon) : horizon_(horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("trace horizon must be positive and finite");
  for (const auto& iv : intervals) {
    if (!std::isfinite(iv.start) || !std::isfinite(iv.duration))
      throw std::invalid_argument("attack interval must be finite");
    if (iv.start < 0.0 || iv.duration < 0.0)
      throw std::invalid_argument("attack interval must have start >= 0, duration >= 0");
    if (iv.start + iv.duration > horizon)
      throw std::invalid_argument("attack interval exceeds horizon");
  }
  std::sort(intervals.begin(), intervals.end(), [](const DosInterval& a, const DosInterval& b) {
    return a.start < b.start || (a.start == b.start && a.duration < b.duration);
  });
  // Merge overlaps and positive-length contiguity. A pulse sitting exactly
  // on a right-open endpoint stays separate: [a, b) plus {b} is not an
  // interval of the [start, start + dur) form.
  for (const auto& iv : intervals) {
    if (!iv_.empty()) {
      DosInterval& last = iv_.back();
      const double last_end = last.start + last.duration;
      const bool merges = iv.start < last_end ||
                          (iv.start == last_end && (iv.duration > 0.0 || iv.start == last.start));
      if (merges) {
        last.duration = std::max(last_end, iv.start + iv.duration) - last.start;
        continue;
      }
    }
    iv_.push_back(iv);
  }
  starts_.reserve(iv_.size());
  ends_.reserve(iv_.size());
  cumdur_.reserve(iv_.size() + 1);
  cumdur_.push_back(0.0);
  for (const auto& iv : iv_) {
    starts_.push_back(iv.start);
    ends_.push_back(iv.start + iv.duration);
    cumdur_.push_back(cumdur_.back() + iv.duration);
  }
}

bool DosTrace::is_active(double t) const {
  if (!(t >= 0.0) || !(t <= horizon_))
    throw std::out_of_range("query instant outside [0, horizon]");
  auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  if (it == starts_.begin()) return false;
  const auto q = static_cast<std::size_t>(it - starts_.begin()) - 1;
  return t < ends_[q] || (iv_[q].duration == 0.0 && t == iv_[q].start);
}

std::int64_t DosTrace::onset_count(double tau, double t) const {
  if (t < tau) return 0;
  auto lo = std::lower_bound(starts_.begin(), starts_.end(), tau);
  auto hi = std::upper_bound(starts_.begin(), starts_.end(), t);
  return static_cast<std::int64_t>(hi - lo);
}

double DosTrace::active_measure(double tau, double t) const {
  if (t <= tau) return 0.0;
  // First interval ending after tau, last starting before t.
  auto lo_it = std::upper_bound(ends_.begin(), ends_.end(), tau);
  auto hi_it = std::lower_bound(starts_.begin(), starts_.end(), t);
  const auto lo = static_cast<std::size_t>(lo_it - ends_.begin());
  const auto hi = static_cast<std::size_t>(hi_it - starts_.begin());
  if (lo >= hi) return 0.0;
  double sum = cumdur_[hi] - cumdur_[lo];
  sum -= std::max(0.0, tau - starts_[lo]);
  sum -= std::max(0.0, ends_[hi - 1] - t);
  return std::max(sum, 0.0);
}

void DosTrace::save(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw std::runtime_error("cannot open trace file for writing: " + path);
  std::fprintf(f, "# horizon=%.17g\n", horizon_);
  for (const auto& iv : iv_) std::fprintf(f, "%.17g %.17g\n", iv.start, iv.duration);
  if (std::fclose(f) != 0) throw std::runtime_error("write failed: " + path);
}

DosTrace DosTrace::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::string line;
  double horizon = -1.0;
  std::vector<DosInterval> iv;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("horizon=");
      if (pos != std::string::npos) {
        horizon = std::strtod(line.c_str() + pos + 8, nullptr);
        header_seen = true;
      }
      continue;
    }
    std::istringstream ls(line);
    DosInterval one;
    if (!(ls >> one.start >> one.duration))
      throw std::runtime_error("malformed trace line: " + line);
    iv.push_back(one);
  }
  if (!header_seen) throw std::runtime_error("trace file missing '# horizon=' header: " + path);
  return DosTrace(std::move(iv), horizon);
}

DosTrace generate_dos(double duty, double mean_period, double horizon, std::uint64_t seed) {
  if (!(duty >= 0.0) || !(duty < 1.0)) throw std::invalid_argument("duty must lie in [0, 1)");
  if (!(mean_period > 0.0)) throw std::invalid_argument("mean_period must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  std::vector<DosInterval> iv;
  if (duty > 0.0) {
    std::mt19937_64 rng(seed);
    // On-fraction jitter is clipped so duty * u never exceeds 1; the mean
    // stays at duty, so measure/horizon -> duty and onsets ~ horizon/period.
    const double j = std::min(0.2, 1.0 / duty - 1.0);
    double t = 0.0;
    while (t < horizon) {
      const double period = mean_period * uniform(rng, 0.8, 1.2);
      const double on = period * std::min(1.0, duty * uniform(rng, 1.0 - j, 1.0 + j));
      const double off = period - on;
      const double start = t + off;
      if (start < horizon && on > 0.0) {
        iv.push_back({start, std::min(on, horizon - start)});
      }
      t += period;
    }
  }
  return DosTrace(std::move(iv), horizon);
}

DosParams certify(const DosTrace& trace, double tau_d, double t_dur, double resolution) {
  if (!(tau_d > 0.0) || !(t_dur > 0.0)) throw std::invalid_argument("tau_d and t_dur must be positive");
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  const double horizon = trace.horizon();

  std::vector<double> taus{0.0};
  std::vector<double> ts_freq{horizon};
  std::vector<double> ts_dur{horizon};
  for (const auto& iv : trace.intervals()) {
    taus.push_back(iv.start);
    ts_freq.push_back(iv.start);
    ts_dur.push_back(iv.start + iv.duration);
  }

  DosParams p{0.0, tau_d, 0.0, t_dur};
  auto consider = [&](double tau, double t) {
    if (t < tau) return;
    const double span = t - tau;
    p.eta = std::max(p.eta, static_cast<double>(trace.onset_count(tau, t)) - span / tau_d);
    p.kappa = std::max(p.kappa, trace.active_measure(tau, t) - span / t_dur);
  };
  for (double tau : taus) {
    for (double t : ts_freq) consider(tau, t);
    for (double t : ts_dur) consider(tau, t);
  }

  // Redundant grid cross-check; the endpoint scan above is already exact.
  const double spacing = std::max(resolution, horizon / kMaxGridPoints);
  std::vector<double> grid;
  for (double g = 0.0; g <= horizon; g += spacing) grid.push_back(g);
  for (std::size_t a = 0; a < grid.size(); ++a)
    for (std::size_t b = a; b < grid.size(); ++b) consider(grid[a], grid[b]);

  return p;
}

double ts_lower_bound(const DosParams& p, double delta, std::int64_t k) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(p.tau_d > 0.0) || !(p.t_dur > 0.0))
    throw std::invalid_argument("envelope slopes must be positive");
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  const double load = 1.0 / p.t_dur + delta / p.tau_d;
  if (!(load < 1.0))
    throw std::domain_error("resilience condition violated: 1/T + delta/tau_d >= 1");
  return (1.0 - load) * static_cast<double>(k) - (p.kappa + p.eta * delta) / delta;
}

std::int64_t count_successes(const DosTrace& trace, double delta, std::int64_t k) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  if (static_cast<double>(k) * delta > trace.horizon())
    throw std::out_of_range("sampling window exceeds trace horizon");
  std::int64_t count = 0;
  for (std::int64_t m = 0; m <= k; ++m) {
    if (!trace.is_active(static_cast<double>(m) * delta)) ++count;
  }
  return count;
}

}  // namespace nesh
