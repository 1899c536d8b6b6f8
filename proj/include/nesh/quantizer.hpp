#pragma once
// Finite-level uniform quantizer and the zoom-in-and-hold scaling state.
//
// quantize() maps a real b to an integer symbol in {-R, ..., R} with
// midpoint-aligned cells:
//   |b| < 1/2                      -> 0
//   (2z-1)/2 <= b < (2z+1)/2       -> z,  z = 1..R
//   b >= (2R+1)/2                  -> R   (saturated)
//   b <= -1/2                      -> -quantize(-b)
// Odd symmetry makes the shared boundary b = -1/2 map to -1. While the
// input is in range, reconstruction satisfies |b - symbol| <= 1/2; the
// saturated flag is true exactly when |b| >= (2R+1)/2.

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nesh {

struct QuantResult {
  std::int64_t symbol{0};
  bool saturated{false};
};

class UniformQuantizer {
 public:
  // levels_r >= 1.
  explicit UniformQuantizer(std::int64_t levels_r);

  [[nodiscard]] std::int64_t levels() const { return r_; }
  // (2R+1)/2, the smallest |b| that saturates.
  [[nodiscard]] double saturation_edge() const { return (2.0 * static_cast<double>(r_) + 1.0) / 2.0; }

  // b must be finite.
  [[nodiscard]] QuantResult quantize(double b) const;

 private:
  std::int64_t r_;
};

// Component-wise quantization; saturated is the OR over components.
[[nodiscard]] std::pair<std::vector<std::int64_t>, bool> quantize_vec(
    const UniformQuantizer& q, const Eigen::VectorXd& b);

// Scaling factor shared by every encoder/decoder pair. On attack-free
// steps theta contracts by gamma_zoom (zoom-in); on attacked steps it is
// held exactly (the hold factor is pinned to 1 so a hold never drifts the
// mantissa). Valid state: theta > 0, 0 < gamma_zoom < 1.
struct ScalingState {
  double theta{1.0};
  double gamma_zoom{0.5};
  static constexpr double kGammaHold = 1.0;
};

[[nodiscard]] ScalingState scale_step(const ScalingState& s, bool dos_active);

}  // namespace nesh
