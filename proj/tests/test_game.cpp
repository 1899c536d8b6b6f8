#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "nesh/game.hpp"

using nesh::GameConstants;
using nesh::GameSpec;
using nesh::Mat;
using nesh::Vec;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Independent oracle: central finite difference of the payoff
// f_i(x) = rho_i (x_i - xd_i)^2 + (p0 sum_j x_j + q0) x_i in its own action.
double fd_partial(const GameSpec& g, const Vec& x, int i, double step = 1e-6) {
  auto payoff = [&](double xi) {
    double sum = xi;
    for (int j = 0; j < g.n(); ++j) {
      if (j != i) sum += x[j];
    }
    const double d = xi - g.x_desired()[i];
    return g.rho()[i] * d * d + (g.p0() * sum + g.q0()) * xi;
  };
  return (payoff(x[i] + step) - payoff(x[i] - step)) / (2.0 * step);
}

// Independent oracle: full-information gradient play, step below 2 mu / l^2.
Vec gradient_play(const GameSpec& g, Vec x, int iters) {
  const GameConstants gc = g.constants();
  const double alpha = gc.mu / (gc.lipschitz_l * gc.lipschitz_l);
  for (int k = 0; k < iters; ++k) x -= alpha * g.pseudogradient(x);
  return x;
}

}  // namespace

TEST_SUITE("game") {

TEST_CASE("pseudogradient closed form at hand points") {
  GameSpec decoupled(vec({1.0, 1.0}), vec({0.0, 0.0}), 0.0, 0.0);
  CHECK(decoupled.pseudogradient(vec({0.0, 0.0})).norm() == 0.0);

  GameSpec at_desired(vec({1.0, 1.0}), vec({1.0, 2.0}), 0.0, 0.0);
  CHECK(at_desired.pseudogradient(vec({1.0, 2.0})).norm() == 0.0);

  GameSpec g(vec({1.0, 2.0}), vec({1.0, 0.0}), 0.5, 1.0);
  const Vec x = vec({1.0, 1.0});
  const Vec p = g.pseudogradient(x);
  for (int i = 0; i < 2; ++i) {
    CHECK(p[i] == doctest::Approx(fd_partial(g, x, i)).epsilon(1e-6));
  }
}

TEST_CASE("pseudogradient equals M x + c") {
  GameSpec g(vec({1.0, 2.0, 0.7}), vec({3.0, -1.0, 0.5}), 0.3, -0.8);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  const Mat m = g.matrix_m();
  const Vec c = g.vector_c();
  for (int t = 0; t < 100; ++t) {
    Vec x(3);
    for (int i = 0; i < 3; ++i) x[i] = dist(rng);
    CHECK((g.pseudogradient(x) - (m * x + c)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("mixed pseudogradient hand value and collapse") {
  GameSpec g(vec({1.0, 1.0}), vec({0.0, 0.0}), 1.0, 0.0);
  Mat est(2, 2);
  est << 1.0, 0.0,  // player 1 estimates x_2 = 0
      0.0, 1.0;     // player 2 estimates x_1 = 0
  const Vec p = g.mixed_pseudogradient(vec({1.0, 1.0}), est);
  CHECK(p[0] == doctest::Approx(4.0));
  CHECK(p[1] == doctest::Approx(4.0));

  // Exact estimates collapse to the full-information map bit for bit.
  GameSpec g5(vec({1.0, 1.1, 1.2, 1.3, 1.4}), vec({5.0, 4.0, 3.0, 2.0, 1.0}), 0.1, 1.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int t = 0; t < 50; ++t) {
    Vec x(5);
    for (int i = 0; i < 5; ++i) x[i] = dist(rng);
    Mat exact(5, 5);
    for (int i = 0; i < 5; ++i) exact.row(i) = x.transpose();
    const Vec full = g5.pseudogradient(x);
    const Vec mixed = g5.mixed_pseudogradient(x, exact);
    for (int i = 0; i < 5; ++i) CHECK(mixed[i] == full[i]);
  }

  // At the NE with exact estimates the map vanishes.
  const Vec xs = g5.solve_ne();
  Mat star(5, 5);
  for (int i = 0; i < 5; ++i) star.row(i) = xs.transpose();
  CHECK(g5.mixed_pseudogradient(xs, star).norm() < 1e-10);
}

TEST_CASE("solve_ne hand cases") {
  GameSpec decoupled(vec({1.0, 1.0}), vec({3.0, 7.0}), 0.0, 0.0);
  const Vec xs = decoupled.solve_ne();
  CHECK(xs[0] == doctest::Approx(3.0));
  CHECK(xs[1] == doctest::Approx(7.0));

  // M = 2I, c = q0*1, so x* = -[1, 1].
  GameSpec shifted(vec({1.0, 1.0}), vec({0.0, 0.0}), 0.0, 2.0);
  const Vec xs2 = shifted.solve_ne();
  CHECK(xs2[0] == doctest::Approx(-1.0));
  CHECK(xs2[1] == doctest::Approx(-1.0));
}

TEST_CASE("solve_ne matches gradient play and is stationary") {
  GameSpec g(vec({0.98, 1.0, 1.02, 1.04, 1.06}), vec({5.0, 10.0, 15.0, 20.0, 25.0}), 0.02, 1.0);
  const Vec xs = g.solve_ne();
  CHECK(g.pseudogradient(xs).norm() <= 1e-10);
  const Vec oracle = gradient_play(g, Vec::Zero(5), 4000);
  CHECK((xs - oracle).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("constants hand cases") {
  GameSpec iso(vec({1.0, 1.0}), vec({0.0, 0.0}), 0.0, 0.0);
  const GameConstants c0 = iso.constants();
  CHECK(c0.mu == doctest::Approx(2.0));
  CHECK(c0.lipschitz_l == doctest::Approx(2.0));

  // M = 3I + 11^T at N=2: mu = 3, l = ||[4, 1]|| = sqrt(17).
  GameSpec cpl(vec({1.0, 1.0}), vec({0.0, 0.0}), 1.0, 0.0);
  const GameConstants c1 = cpl.constants();
  CHECK(c1.mu == doctest::Approx(3.0));
  CHECK(c1.lipschitz_l == doctest::Approx(std::sqrt(17.0)));
}

TEST_CASE("monotonicity and Lipschitz properties on sampled pairs") {
  GameSpec g(vec({0.8, 1.3, 2.0, 0.5}), vec({1.0, -2.0, 0.0, 4.0}), 0.15, 0.7);
  const GameConstants gc = g.constants();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(-8.0, 8.0);
  for (int t = 0; t < 1000; ++t) {
    Vec x(4), z(4);
    for (int i = 0; i < 4; ++i) {
      x[i] = dist(rng);
      z[i] = dist(rng);
    }
    const Vec px = g.pseudogradient(x);
    const Vec pz = g.pseudogradient(z);
    const double lhs = (x - z).dot(px - pz);
    CHECK(lhs >= gc.mu * (x - z).squaredNorm() - 1e-9);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::fabs(px[i] - pz[i]) <= gc.lipschitz_l * (x - z).norm() + 1e-9);
    }
  }
}

TEST_CASE("construction rejects ill-posed games") {
  CHECK_THROWS_AS(GameSpec(vec({1.0}), vec({0.0}), 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GameSpec(vec({1.0, -1.0}), vec({0.0, 0.0}), 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GameSpec(vec({1.0, 0.0}), vec({0.0, 0.0}), 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GameSpec(vec({1.0, 1.0}), vec({0.0}), 0.0, 0.0), std::invalid_argument);
  // Strongly negative coupling destroys positive definiteness.
  CHECK_THROWS_AS(GameSpec(vec({0.1, 0.1}), vec({0.0, 0.0}), -1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GameSpec(vec({1.0, std::nan("")}), vec({0.0, 0.0}), 0.0, 0.0),
                  std::invalid_argument);

  GameSpec g(vec({1.0, 1.0}), vec({0.0, 0.0}), 0.0, 0.0);
  CHECK_THROWS_AS((void)g.pseudogradient(vec({1.0, 2.0, 3.0})), std::invalid_argument);
}

}  // TEST_SUITE
