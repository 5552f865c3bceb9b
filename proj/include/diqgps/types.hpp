// Common scalar-templated dense types and error hierarchy.

#ifndef DIQGPS_TYPES_HPP
#define DIQGPS_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace diqgps {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using MatrixXc = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorXc = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar>
using Matrix4c = Eigen::Matrix<Complex<Scalar>, 4, 4>;

// Entrywise tolerances shared across the validation helpers.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kInvolutionTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-12;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed mathematical object: wrong dimensions, non-Hermitian, non-unitary.
struct structural_error : error {
  using error::error;
};

// Well-formed input whose values violate a contract (unnormalized block,
// negative travel time, missing round).
struct data_error : error {
  using error::error;
};

// Scenario-level misconfiguration.
struct config_error : error {
  using error::error;
};

// Timestamp does not fit the codec range, or the codec does not fit the run.
struct capacity_error : error {
  using error::error;
};

// Manchester pair violation in revealed carrier inputs.
struct tamper_error : data_error {
  using data_error::data_error;
};

// An (x,y) cell has no retained rounds; statistically inconclusive, not evidence
// of attack.
struct insufficient_data_error : data_error {
  using data_error::data_error;
};

// Kronecker product of two dense expressions, row-major index convention:
// out((i*rb + k), (j*cb + l)) = a(i, j) * b(k, l).
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using ScalarT = typename DerivedA::Scalar;
  Eigen::Matrix<ScalarT, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                             a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kHermitianTol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tol = kUnitaryTol) {
  if (m.rows() != m.cols()) return false;
  using ScalarT = typename Derived::Scalar;
  Eigen::Matrix<ScalarT, Eigen::Dynamic, Eigen::Dynamic> id =
      Eigen::Matrix<ScalarT, Eigen::Dynamic, Eigen::Dynamic>::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
auto min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<
      Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>>
      solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace diqgps

#endif  // DIQGPS_TYPES_HPP
