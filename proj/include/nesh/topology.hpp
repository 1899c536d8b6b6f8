#pragma once
// Weighted undirected communication graph and the stacked matrices of the
// estimate-consensus protocol. Player i keeps an estimate vector
// y_i in R^N; the stack y = [y_1; ...; y_N] in R^{N^2} evolves on
//   S = L (x) I_N + A0,
// with L the weighted Laplacian and A0 the N^2 diagonal matrix
// diag(a_11, ..., a_1N, a_21, ..., a_2N, ..., a_NN) -- row-major over
// (i, j), matching the stacking order. S is positive definite for a
// connected graph, so H = I - h S is symmetric with ||H|| = rho(H), and
//   h < h_max = min_{i, j in N_i} 1 / (deg_i + a_ij),  deg_i = sum_l a_il,
// guarantees rho(H) < 1. G = I + h S, hence H + G = 2 I.

#include <array>
#include <vector>

#include "nesh/game.hpp"

namespace nesh {

class Topology {
 public:
  // adjacency: symmetric, non-negative, zero diagonal, connected, n >= 2.
  explicit Topology(Mat adjacency);

  // edges as (i, j, weight) with 0-based endpoints; duplicates rejected.
  static Topology from_edges(int n, const std::vector<std::array<double, 3>>& edges);
  static Topology cycle(int n, double weight = 1.0);   // n >= 3
  static Topology path(int n, double weight = 1.0);    // n >= 2
  static Topology complete(int n, double weight = 1.0);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] const Mat& adjacency() const { return a_; }
  [[nodiscard]] double degree(int i) const { return a_.row(i).sum(); }

 private:
  int n_;
  Mat a_;
};

struct ProtocolMatrices {
  Mat laplacian;  // N x N
  Mat a0;         // N^2 x N^2, diagonal
  Mat s;          // L (x) I + A0
  Mat h;          // I - gain * S
  Mat g;          // I + gain * S
  double gain{0.0};
};

// gain > 0; Schur stability of H is only guaranteed below h_max.
[[nodiscard]] ProtocolMatrices build_matrices(const Topology& topo, double gain);

[[nodiscard]] double h_max(const Topology& topo);

// Largest singular value; symmetric inputs go through a self-adjoint
// eigensolver (|lambda|_max), general ones through SVD.
[[nodiscard]] double spectral_norm(const Mat& m);

}  // namespace nesh
