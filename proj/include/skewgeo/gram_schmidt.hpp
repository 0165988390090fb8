#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "skewgeo/errors.hpp"

namespace skewgeo {

/// Modified Gram-Schmidt in the inner product <a, b> = a^T G b.
///
/// Columns are processed in order. A second projection pass runs for a column
/// whenever one of its coefficients exceeds `reorth_ratio` times the column
/// norm. Throws DegenerateError if a column is dependent on the previous ones
/// (residual norm below `rank_tol` times its original norm).
template <typename Derived, typename MetricDerived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> modified_gram_schmidt(
    const Eigen::MatrixBase<Derived>& vectors, const Eigen::MatrixBase<MetricDerived>& metric,
    typename Derived::Scalar rank_tol = 1e-8, typename Derived::Scalar reorth_ratio = 0.7) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> q(vectors.rows(), vectors.cols());
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Vec v = vectors.col(j);
    const Scalar original = std::sqrt(v.dot(metric * v));
    bool again = false;
    for (Eigen::Index i = 0; i < j; ++i) {
      Scalar c = q.col(i).dot(metric * v);
      if (std::abs(c) > reorth_ratio * original) again = true;
      v -= c * q.col(i);
    }
    if (again) {
      for (Eigen::Index i = 0; i < j; ++i) v -= q.col(i).dot(metric * v) * q.col(i);
    }
    const Scalar norm = std::sqrt(v.dot(metric * v));
    if (!(norm > rank_tol * original) || !(original > 0))
      throw DegenerateError("Gram-Schmidt: column " + std::to_string(j) + " is linearly dependent");
    q.col(j) = v / norm;
  }
  return q;
}

/// Extends G-orthonormal columns to a full G-orthonormal basis of the ambient
/// space, picking at each step the coordinate vector with the largest residual.
/// Returns only the added columns.
template <typename Derived, typename MetricDerived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> complete_basis(
    const Eigen::MatrixBase<Derived>& frame, const Eigen::MatrixBase<MetricDerived>& metric) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index dim = frame.rows();
  const Eigen::Index missing = dim - frame.cols();
  Mat basis(dim, dim);
  basis.leftCols(frame.cols()) = frame;
  Mat added(dim, missing);
  for (Eigen::Index k = 0; k < missing; ++k) {
    const Eigen::Index have = frame.cols() + k;
    Vec best;
    Scalar best_norm = -1;
    for (Eigen::Index a = 0; a < dim; ++a) {
      Vec v = Vec::Unit(dim, a);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index i = 0; i < have; ++i) v -= basis.col(i).dot(metric * v) * basis.col(i);
      Scalar norm = std::sqrt(v.dot(metric * v));
      if (norm > best_norm) {
        best_norm = norm;
        best = v;
      }
    }
    if (!(best_norm > 0)) throw DegenerateError("basis completion failed");
    basis.col(have) = best / best_norm;
    added.col(k) = basis.col(have);
  }
  return added;
}

/// Max |(Q^T G Q - I)_{ij}|.
template <typename Derived, typename MetricDerived>
typename Derived::Scalar gram_defect(const Eigen::MatrixBase<Derived>& q,
                                     const Eigen::MatrixBase<MetricDerived>& metric) {
  auto gram = (q.transpose() * metric * q).eval();
  gram.diagonal().array() -= 1;
  return gram.cwiseAbs().maxCoeff();
}

}  // namespace skewgeo
