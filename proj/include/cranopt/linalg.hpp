#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace cranopt {

// log2 det of a Hermitian positive definite matrix. Cholesky first, Hermitian
// eigendecomposition as fallback near the definiteness boundary. Throws
// std::domain_error if the matrix is not positive definite.
template <typename Derived>
double log_det2_hermitian_pd(const Eigen::MatrixBase<Derived>& expr) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat x = expr;
  Eigen::LLT<Mat> llt(x);
  if (llt.info() == Eigen::Success) {
    double acc = 0.0;
    const auto& packed = llt.matrixLLT();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      acc += std::log2(std::real(packed(i, i)));
    }
    return 2.0 * acc;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(x);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double ev = es.eigenvalues()(i);
    if (!(ev > 0.0)) {
      throw std::domain_error("log_det2_hermitian_pd: matrix is not positive definite");
    }
    acc += std::log2(ev);
  }
  return acc;
}

template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& expr) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat x = expr;
  Eigen::SelfAdjointEigenSolver<Mat> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// PSD acceptance: min eigenvalue >= -tol_scale * |trace|.
template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& expr, double tol_scale = 1e-9) {
  const double tr = std::abs(std::real(expr.trace()));
  return min_eigenvalue(expr) >= -tol_scale * tr;
}

// Eigenvalue clipping at zero.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> project_psd(
    const Eigen::MatrixBase<Derived>& expr) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat x = expr;
  Eigen::SelfAdjointEigenSolver<Mat> es(x);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> hermitian_part(
    const Eigen::MatrixBase<Derived>& expr) {
  return 0.5 * (expr + expr.adjoint());
}

// Real inner product on the space of Hermitian matrices.
template <typename DerivedA, typename DerivedB>
double hermitian_inner(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return std::real((a.adjoint() * b).trace());
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> block_diag(
    const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols()) throw std::invalid_argument("block_diag: blocks must be square");
    n += b.rows();
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.rows()) = b;
    at += b.rows();
  }
  return out;
}

}  // namespace cranopt
