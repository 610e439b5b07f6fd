#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <type_traits>
#include <stdexcept>

namespace seqbell {

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

using Qubit = Matrix2c<double>;
using TwoQubit = Matrix4c<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kReconstructionTol = 1e-10;

namespace pauli {

template <typename Scalar = double>
Matrix2c<Scalar> identity() {
  return Matrix2c<Scalar>::Identity();
}

template <typename Scalar = double>
Matrix2c<Scalar> x() {
  Matrix2c<Scalar> m;
  m << 0, 1, 1, 0;
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> y() {
  using C = std::complex<Scalar>;
  Matrix2c<Scalar> m;
  m << C(0), C(0, -1), C(0, 1), C(0);
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> z() {
  Matrix2c<Scalar> m;
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace pauli

/// Kronecker product of two qubit operators. The left factor acts on the
/// first (party A) qubit, so (a ⊗ b)(i*2 + k, j*2 + l) = a(i, j) b(k, l).
template <typename DerivedA, typename DerivedB>
auto tensor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedB::Scalar>,
                "tensor: factors must share a scalar type");
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
    throw std::invalid_argument("tensor: both factors must be 2x2");
  }
  Eigen::Matrix<Scalar, 4, 4> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

/// Largest entrywise deviation from Hermiticity, max |M - M^†|.
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

struct HermitianEigen {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXcd vectors;   // columns pair with values
};

/// Spectrum of a Hermitian matrix of dimension 2, 3 or 4. Dimension 2 is
/// solved in closed form; larger sizes use cyclic Jacobi sweeps.
/// Throws std::invalid_argument for other sizes or non-Hermitian input.
HermitianEigen hermitian_eigen(const Eigen::Ref<const Eigen::MatrixXcd>& m);

/// Ascending eigenvalues only.
Eigen::VectorXd hermitian_eigs(const Eigen::Ref<const Eigen::MatrixXcd>& m);

/// Singular values of a real 3x3 matrix in descending order, taken as
/// square roots of the eigenvalues of t^T t.
Eigen::Vector3d singular_values_3x3(const Eigen::Matrix3d& t);

}  // namespace seqbell
