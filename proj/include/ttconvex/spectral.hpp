#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace ttconvex {

/// Irreducibility of a nonnegative square matrix: the digraph with an arc
/// j -> i whenever m(i, j) > 0 is strongly connected. A 1x1 matrix is
/// irreducible iff its entry is positive.
template <typename Derived>
bool irreducible(const Eigen::MatrixBase<Derived>& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return false;
  using Bool = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  Bool adj = (m.array() > 0).template cast<int>();
  // reach = I + A + ... + A^n, saturated to {0, 1}
  Bool reach = Bool::Identity(n, n);
  for (Eigen::Index step = 0; step < n; ++step) {
    Bool next = ((reach + adj * reach).array() > 0).template cast<int>();
    if (next == reach) break;
    reach = next;
  }
  if (n == 1) return adj(0, 0) > 0;
  return (reach.array() > 0).all();
}

template <typename Scalar>
struct PerronFrobenius {
  Scalar eigenvalue{};
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> left;  // positive, smallest entry 1
  int iterations = 0;
  bool converged = false;
};

/// PF eigenvalue and left eigenvector of an irreducible nonnegative matrix
/// by power iteration on (M + I)^T. The shift makes the iteration primitive.
template <typename Scalar, typename Derived>
PerronFrobenius<Scalar> perron_frobenius(const Eigen::MatrixBase<Derived>& m, Scalar tol = Scalar(1e-12),
                                         int max_iterations = 100000) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = m.rows();
  const Mat a = m.template cast<Scalar>().transpose() + Mat::Identity(n, n);
  Vec v = Vec::Ones(n) / std::sqrt(Scalar(n));
  PerronFrobenius<Scalar> out;
  Scalar mu = 0;
  for (int it = 1; it <= max_iterations; ++it) {
    Vec w = a * v;
    const Scalar norm = w.norm();
    w /= norm;
    const Scalar delta = (w - v).template lpNorm<Eigen::Infinity>();
    v = std::move(w);
    mu = norm;
    out.iterations = it;
    if (delta < tol) {
      out.converged = true;
      break;
    }
  }
  mu = (a * v).norm() / v.norm();
  out.eigenvalue = mu - Scalar(1);
  out.left = v / v.minCoeff();
  return out;
}

}  // namespace ttconvex
