#include "nesh/quantizer.hpp"

#include <cmath>
#include <stdexcept>

namespace nesh {

UniformQuantizer::UniformQuantizer(std::int64_t levels_r) : r_(levels_r) {
  if (levels_r < 1) throw std::invalid_argument("quantizer needs at least one level");
}

QuantResult UniformQuantizer::quantize(double b) const {
  if (!std::isfinite(b)) throw std::invalid_argument("quantizer input must be finite");
  const double a = std::fabs(b);
  if (a < 0.5) return {0, false};
  const bool neg = b < 0.0;
  if (a >= saturation_edge()) return {neg ? -r_ : r_, true};
  // Cell z holds 2z-1 <= 2a < 2z+1; 2a is exact, the +-1 step corrects any
  // rounding in the fast floor estimate.
  auto z = static_cast<std::int64_t>(std::floor(a + 0.5));
  const double twice = 2.0 * a;
  if (static_cast<double>(2 * z - 1) > twice) {
    --z;
  } else if (twice >= static_cast<double>(2 * z + 1)) {
    ++z;
  }
  if (z < 1) z = 1;
  if (z > r_) z = r_;
  return {neg ? -z : z, false};
}

std::pair<std::vector<std::int64_t>, bool> quantize_vec(const UniformQuantizer& q,
                                                        const Eigen::VectorXd& b) {
  std::vector<std::int64_t> symbols(static_cast<std::size_t>(b.size()));
  bool saturated = false;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const QuantResult r = q.quantize(b[i]);
    symbols[static_cast<std::size_t>(i)] = r.symbol;
    saturated = saturated || r.saturated;
  }
  return {std::move(symbols), saturated};
}

ScalingState scale_step(const ScalingState& s, bool dos_active) {
  ScalingState next = s;
  if (!dos_active) next.theta = s.theta * s.gamma_zoom;
  return next;
}

}  // namespace nesh
