#include "nesh/topology.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace nesh {

namespace {

bool connected(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < n; ++w) {
      if (a(v, w) > 0.0 && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

}  // namespace

Topology::Topology(Mat adjacency) : n_(static_cast<int>(adjacency.rows())), a_(std::move(adjacency)) {
  if (n_ < 2 || a_.cols() != n_) throw std::invalid_argument("adjacency must be square, n >= 2");
  if (!a_.allFinite()) throw std::invalid_argument("adjacency entries must be finite");
  for (int i = 0; i < n_; ++i) {
    if (a_(i, i) != 0.0) throw std::invalid_argument("adjacency diagonal must be zero");
    for (int j = 0; j < n_; ++j) {
      if (a_(i, j) < 0.0) throw std::invalid_argument("adjacency weights must be non-negative");
      if (a_(i, j) != a_(j, i)) throw std::invalid_argument("adjacency must be symmetric");
    }
  }
  if (!connected(a_)) throw std::invalid_argument("graph must be connected");
}

Topology Topology::from_edges(int n, const std::vector<std::array<double, 3>>& edges) {
  if (n < 2) throw std::invalid_argument("edge list needs n >= 2");
  Mat a = Mat::Zero(n, n);
  for (const auto& e : edges) {
    const auto i = static_cast<int>(e[0]);
    const auto j = static_cast<int>(e[1]);
    const double w = e[2];
    if (i < 0 || i >= n || j < 0 || j >= n) throw std::invalid_argument("edge endpoint out of range");
    if (i == j) throw std::invalid_argument("self loops are not allowed");
    if (!(w > 0.0)) throw std::invalid_argument("edge weights must be positive");
    if (a(i, j) != 0.0) throw std::invalid_argument("duplicate edge");
    a(i, j) = w;
    a(j, i) = w;
  }
  return Topology(std::move(a));
}

Topology Topology::cycle(int n, double weight) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  Mat a = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    a(i, j) = weight;
    a(j, i) = weight;
  }
  return Topology(std::move(a));
}

Topology Topology::path(int n, double weight) {
  if (n < 2) throw std::invalid_argument("path needs n >= 2");
  Mat a = Mat::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    a(i, i + 1) = weight;
    a(i + 1, i) = weight;
  }
  return Topology(std::move(a));
}

Topology Topology::complete(int n, double weight) {
  if (n < 2) throw std::invalid_argument("complete graph needs n >= 2");
  Mat a = Mat::Constant(n, n, weight);
  a.diagonal().setZero();
  return Topology(std::move(a));
}

ProtocolMatrices build_matrices(const Topology& topo, double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("gain must be positive");
  const int n = topo.n();
  const Mat& a = topo.adjacency();
  ProtocolMatrices pm;
  pm.gain = gain;
  pm.laplacian = -a;
  for (int i = 0; i < n; ++i) pm.laplacian(i, i) = topo.degree(i);

  const int nn = n * n;
  pm.a0 = Mat::Zero(nn, nn);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pm.a0(i * n + j, i * n + j) = a(i, j);

  pm.s = Mat::Zero(nn, nn);
  for (int bi = 0; bi < n; ++bi)
    for (int bj = 0; bj < n; ++bj)
      if (pm.laplacian(bi, bj) != 0.0)
        for (int d = 0; d < n; ++d) pm.s(bi * n + d, bj * n + d) = pm.laplacian(bi, bj);
  pm.s += pm.a0;

  pm.h = Mat::Identity(nn, nn) - gain * pm.s;
  pm.g = Mat::Identity(nn, nn) + gain * pm.s;
  return pm;
}

double h_max(const Topology& topo) {
  const int n = topo.n();
  const Mat& a = topo.adjacency();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double deg = topo.degree(i);
    for (int j = 0; j < n; ++j) {
      if (a(i, j) > 0.0) best = std::min(best, 1.0 / (deg + a(i, j)));
    }
  }
  return best;
}

double spectral_norm(const Mat& m) {
  if (m.size() == 0) throw std::invalid_argument("spectral norm of empty matrix");
  if (!m.allFinite()) throw std::invalid_argument("matrix entries must be finite");
  if (m.rows() == m.cols() && m == m.transpose()) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

}  // namespace nesh
