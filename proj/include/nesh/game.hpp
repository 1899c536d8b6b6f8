#pragma once
// Quadratic aggregative game on R^N. Player i owns the cost
//   f_i(x) = rho_i (x_i - xd_i)^2 + (p0 * sum_j x_j + q0) * x_i,
// so the stacked partials ('pseudogradient') are affine:
//   P(x) = M x + c,  M = 2 diag(rho) + p0 (I + 1 1^T),
//                    c = q0 1 - 2 rho .* xd.
// Component i reads 2 rho_i (x_i - xd_i) + p0 (x_i + sum_{j!=i} x_j)
// + q0 + p0 x_i. The Nash equilibrium is the unique solve of M x* = -c.
// Strong monotonicity constant mu = lambda_min((M+M^T)/2) > 0 is enforced
// at construction; l = max_i ||row_i(M)||_2 bounds each component's
// Lipschitz constant.

#include <Eigen/Dense>

namespace nesh {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct GameConstants {
  double mu{0.0};
  double lipschitz_l{0.0};
};

class GameSpec {
 public:
  // rho and x_desired must have the same size n >= 2, rho > 0 entrywise,
  // and M must come out positive definite.
  GameSpec(Vec rho, Vec x_desired, double p0, double q0);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] const Vec& rho() const { return rho_; }
  [[nodiscard]] const Vec& x_desired() const { return xd_; }
  [[nodiscard]] double p0() const { return p0_; }
  [[nodiscard]] double q0() const { return q0_; }

  [[nodiscard]] Mat matrix_m() const;
  [[nodiscard]] Vec vector_c() const;

  // P(x); x.size() == n.
  [[nodiscard]] Vec pseudogradient(const Vec& x) const;

  // Partial-information variant: component i is evaluated at player i's own
  // action x_i and its estimate row estimates(i, :) of everyone else; the
  // (i, i) entry is ignored in favor of x_i. With estimates(i, :) == x^T for
  // all i this reproduces pseudogradient(x) bit for bit (shared kernel,
  // identical summation order).
  [[nodiscard]] Vec mixed_pseudogradient(const Vec& x, const Mat& estimates) const;

  // Unique NE; the returned point satisfies ||P(x*)||_2 <= 1e-10.
  [[nodiscard]] Vec solve_ne() const;

  [[nodiscard]] GameConstants constants() const;

 private:
  template <class Other>
  [[nodiscard]] double partial(int i, double xi, Other&& other) const {
    double sum = 0.0;
    for (int j = 0; j < n_; ++j) {
      if (j != i) sum += other(j);
    }
    return 2.0 * rho_[i] * (xi - xd_[i]) + p0_ * (xi + sum) + q0_ + p0_ * xi;
  }

  int n_;
  Vec rho_;
  Vec xd_;
  double p0_;
  double q0_;
};

}  // namespace nesh
