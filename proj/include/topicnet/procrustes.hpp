#pragma once

#include <Eigen/Dense>

namespace topicnet {

template <typename Derived>
using SquareOf = Eigen::Matrix<typename Derived::Scalar, Derived::ColsAtCompileTime, Derived::ColsAtCompileTime>;

/// Orthogonal Q minimizing ||source * Q - target||_F (rotation or reflection,
/// no scaling, no translation). Returns the identity when source^T target
/// vanishes, i.e. when there is nothing to align against.
template <typename DerivedS, typename DerivedT>
SquareOf<DerivedS> orthogonal_procrustes(const Eigen::MatrixBase<DerivedS>& source,
                                         const Eigen::MatrixBase<DerivedT>& target) {
  using Square = SquareOf<DerivedS>;
  const Square cross = source.transpose() * target;
  if (cross.squaredNorm() == typename DerivedS::Scalar(0)) return Square::Identity(source.cols(), source.cols());
  Eigen::JacobiSVD<Square> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// `source` rotated/reflected onto `target`.
template <typename DerivedS, typename DerivedT>
typename DerivedS::PlainObject procrustes_align(const Eigen::MatrixBase<DerivedS>& source,
                                                const Eigen::MatrixBase<DerivedT>& target) {
  return source * orthogonal_procrustes(source, target);
}

/// Euclidean distances between every row of `a` and every row of `b`.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> pairwise_distances(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> d(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) d(i, j) = (a.row(i) - b.row(j)).norm();
  return d;
}

}  // namespace topicnet
