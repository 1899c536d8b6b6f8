#include "nesh/game.hpp"

#include <stdexcept>

namespace nesh {

GameSpec::GameSpec(Vec rho, Vec x_desired, double p0, double q0)
    : n_(static_cast<int>(rho.size())),
      rho_(std::move(rho)),
      xd_(std::move(x_desired)),
      p0_(p0),
      q0_(q0) {
  if (n_ < 2) throw std::invalid_argument("game needs at least two players");
  if (xd_.size() != n_) throw std::invalid_argument("rho and x_desired sizes differ");
  if (!rho_.allFinite() || !xd_.allFinite() || !std::isfinite(p0) || !std::isfinite(q0))
    throw std::invalid_argument("game parameters must be finite");
  if ((rho_.array() <= 0.0).any()) throw std::invalid_argument("rho must be positive");
  if (constants().mu <= 0.0) throw std::invalid_argument("pseudogradient matrix is not positive definite");
}

Mat GameSpec::matrix_m() const {
  Mat m = Mat::Constant(n_, n_, p0_);
  for (int i = 0; i < n_; ++i) m(i, i) += 2.0 * rho_[i] + p0_;
  return m;
}

Vec GameSpec::vector_c() const {
  return Vec::Constant(n_, q0_) - 2.0 * rho_.cwiseProduct(xd_).eval();
}

Vec GameSpec::pseudogradient(const Vec& x) const {
  if (x.size() != n_) throw std::invalid_argument("action profile size mismatch");
  Vec p(n_);
  for (int i = 0; i < n_; ++i) p[i] = partial(i, x[i], [&](int j) { return x[j]; });
  return p;
}

Vec GameSpec::mixed_pseudogradient(const Vec& x, const Mat& estimates) const {
  if (x.size() != n_) throw std::invalid_argument("action profile size mismatch");
  if (estimates.rows() != n_ || estimates.cols() != n_)
    throw std::invalid_argument("estimates must be n-by-n");
  Vec p(n_);
  for (int i = 0; i < n_; ++i) p[i] = partial(i, x[i], [&](int j) { return estimates(i, j); });
  return p;
}

Vec GameSpec::solve_ne() const {
  const Mat m = matrix_m();
  const Vec c = vector_c();
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) throw std::runtime_error("NE solve failed: M not positive definite");
  Vec x = llt.solve(-c);
  x += llt.solve((-c - m * x).eval());  // one refinement pass
  const double residual = pseudogradient(x).norm();
  if (!(residual <= 1e-10))
    throw std::runtime_error("NE solve failed: residual above 1e-10");
  return x;
}

GameConstants GameSpec::constants() const {
  const Mat m = matrix_m();
  const Mat sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  GameConstants gc;
  gc.mu = es.eigenvalues().minCoeff();
  gc.lipschitz_l = m.rowwise().norm().maxCoeff();
  return gc;
}

}  // namespace nesh
