// Exact two-party quantum strategies: density matrices, binary (+-1)
// observables, Born-rule probabilities, deterministic outcome sampling, and
// the local-unitary/ancilla gauge transformations that leave all observed
// correlations unchanged.

#ifndef DIQGPS_QUANTUM_HPP
#define DIQGPS_QUANTUM_HPP

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "diqgps/correlations.hpp"
#include "diqgps/rng.hpp"
#include "diqgps/types.hpp"

namespace diqgps {

// Density matrix on a bipartite system H_R (x) H_S with recorded party
// dimensions. Two qubits by default; gauge embedding can grow either side.
template <typename Scalar = double>
struct BipartiteStateT {
  MatrixXc<Scalar> matrix;
  Eigen::Index dim_R = 2;
  Eigen::Index dim_S = 2;
};

using BipartiteState = BipartiteStateT<double>;

// Hermitian involution (O^2 = 1). Its +-1 eigenspaces define the two
// measurement effects (1 + O)/2 and (1 - O)/2.
template <typename Scalar = double>
struct BinaryObservableT {
  MatrixXc<Scalar> matrix;
};

using BinaryObservable = BinaryObservableT<double>;

// Shared state plus each party's pair of observables; the generator of the
// 16 probabilities p(r,s|x,y).
template <typename Scalar = double>
struct StrategyT {
  BipartiteStateT<Scalar> state;
  std::array<BinaryObservableT<Scalar>, 2> obs_R;
  std::array<BinaryObservableT<Scalar>, 2> obs_S;
};

using Strategy = StrategyT<double>;

// Local unitaries plus optional pure ancillas appended per wing; the degrees
// of freedom that no correlation table can detect. Empty ancilla = none.
template <typename Scalar = double>
struct GaugeTransformT {
  MatrixXc<Scalar> u_R;
  MatrixXc<Scalar> u_S;
  VectorXc<Scalar> ancilla_R;
  VectorXc<Scalar> ancilla_S;
};

using GaugeTransform = GaugeTransformT<double>;

enum class Wing { R, S };

template <typename Scalar = double>
Matrix2c<Scalar> pauli_x() {
  Matrix2c<Scalar> m;
  m << Complex<Scalar>(0), Complex<Scalar>(1), Complex<Scalar>(1), Complex<Scalar>(0);
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> pauli_y() {
  Matrix2c<Scalar> m;
  m << Complex<Scalar>(0), Complex<Scalar>(0, -1), Complex<Scalar>(0, 1), Complex<Scalar>(0);
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> pauli_z() {
  Matrix2c<Scalar> m;
  m << Complex<Scalar>(1), Complex<Scalar>(0), Complex<Scalar>(0), Complex<Scalar>(-1);
  return m;
}

template <typename Scalar>
void validate_state(const BipartiteStateT<Scalar>& state) {
  const auto& rho = state.matrix;
  if (rho.rows() != rho.cols() || rho.rows() != state.dim_R * state.dim_S)
    throw structural_error("state matrix does not match recorded party dimensions");
  if (!is_hermitian(rho, kHermitianTol))
    throw structural_error("state matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex<Scalar>(1)) > kTraceTol)
    throw structural_error("state matrix does not have unit trace");
  if (min_eigenvalue(rho) < -kPsdTol)
    throw structural_error("state matrix is not positive semidefinite");
}

template <typename Scalar>
void validate_observable(const BinaryObservableT<Scalar>& obs) {
  const auto& m = obs.matrix;
  if (m.rows() != m.cols()) throw structural_error("observable is not square");
  if (!is_hermitian(m, kHermitianTol))
    throw structural_error("observable is not Hermitian");
  MatrixXc<Scalar> id = MatrixXc<Scalar>::Identity(m.rows(), m.cols());
  if ((m * m - id).cwiseAbs().maxCoeff() > kInvolutionTol)
    throw structural_error("observable does not square to identity");
}

template <typename Scalar>
void validate_strategy(const StrategyT<Scalar>& strategy) {
  validate_state(strategy.state);
  for (const auto& obs : strategy.obs_R) {
    validate_observable(obs);
    if (obs.matrix.rows() != strategy.state.dim_R)
      throw structural_error("receiver observable dimension mismatch");
  }
  for (const auto& obs : strategy.obs_S) {
    validate_observable(obs);
    if (obs.matrix.rows() != strategy.state.dim_S)
      throw structural_error("satellite observable dimension mismatch");
  }
}

// Measurement effect N_{outcome} = (1 + (-1)^outcome O) / 2.
template <typename Scalar>
MatrixXc<Scalar> effect(const BinaryObservableT<Scalar>& obs, int outcome) {
  const Scalar sign = (outcome == 0) ? Scalar(1) : Scalar(-1);
  MatrixXc<Scalar> id = MatrixXc<Scalar>::Identity(obs.matrix.rows(), obs.matrix.cols());
  return ((id + sign * obs.matrix) / Scalar(2)).eval();
}

// p(r,s|x,y) = Tr[(N^R_{r|x} (x) N^S_{s|y}) rho].
template <typename Scalar>
Scalar born_probability(const StrategyT<Scalar>& strategy, int x, int y, int r, int s) {
  const auto& obs_R = strategy.obs_R[static_cast<std::size_t>(x)];
  const auto& obs_S = strategy.obs_S[static_cast<std::size_t>(y)];
  if (obs_R.matrix.rows() != strategy.state.dim_R ||
      obs_S.matrix.rows() != strategy.state.dim_S)
    throw structural_error("observable dimensions do not match state party dimensions");
  const MatrixXc<Scalar> joint_effect = kron(effect(obs_R, r), effect(obs_S, s));
  return (joint_effect * strategy.state.matrix).trace().real();
}

// The maximal-violation strategy: |phi+> = (|00> + |11>)/sqrt(2) with
// R_0 = sigma_z, R_1 = sigma_x, S_0 = (sigma_z + sigma_x)/sqrt(2),
// S_1 = (sigma_z - sigma_x)/sqrt(2). Attains CHSH = 2*sqrt(2).
template <typename Scalar = double>
StrategyT<Scalar> canonical_strategy() {
  const Scalar inv_sqrt2 = Scalar(1) / std::sqrt(Scalar(2));
  StrategyT<Scalar> strategy;
  MatrixXc<Scalar> rho = MatrixXc<Scalar>::Zero(4, 4);
  rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = Complex<Scalar>(Scalar(1) / Scalar(2));
  strategy.state = {rho, 2, 2};
  strategy.obs_R[0].matrix = pauli_z<Scalar>();
  strategy.obs_R[1].matrix = pauli_x<Scalar>();
  strategy.obs_S[0].matrix = (inv_sqrt2 * (pauli_z<Scalar>() + pauli_x<Scalar>())).eval();
  strategy.obs_S[1].matrix = (inv_sqrt2 * (pauli_z<Scalar>() - pauli_x<Scalar>())).eval();
  return strategy;
}

template <typename Scalar>
CorrelationTableT<Scalar> exact_correlation_table(const StrategyT<Scalar>& strategy) {
  CorrelationTableT<Scalar> table;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
          table.p(x, y, r, s) = born_probability(strategy, x, y, r, s);
  return table;
}

// Inverse-CDF draw over the four joint outcomes in the fixed order
// (0,0),(0,1),(1,0),(1,1). Bit-reproducible given the uniform variate.
template <typename Scalar>
std::pair<int, int> sample_joint(const CorrelationTableT<Scalar>& table, int x, int y,
                                 Scalar u) {
  Scalar cumulative = 0;
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s) {
      cumulative += table.p(x, y, r, s);
      if (u < cumulative) return {r, s};
    }
  return {1, 1};
}

template <typename Scalar>
std::pair<int, int> sample_round(const StrategyT<Scalar>& strategy, int x, int y,
                                 CounterRng& rng) {
  const CorrelationTableT<Scalar> table = exact_correlation_table(strategy);
  return sample_joint(table, x, y, static_cast<Scalar>(rng.next_unit()));
}

namespace detail {

// Appends a pure ancilla register to one wing of the density matrix, keeping
// the (R, S) index order: R gains the register as its minor index, S likewise.
template <typename Scalar>
BipartiteStateT<Scalar> embed_ancilla(const BipartiteStateT<Scalar>& state, Wing wing,
                                      const VectorXc<Scalar>& xi) {
  const Eigen::Index da = xi.size();
  if (std::abs(xi.norm() - Scalar(1)) > kUnitaryTol)
    throw structural_error("ancilla state is not normalized");
  BipartiteStateT<Scalar> out;
  if (wing == Wing::S) {
    // (r,s) (x) a lands directly on r (x) (s,a).
    out.matrix = kron(state.matrix, (xi * xi.adjoint()).eval());
    out.dim_R = state.dim_R;
    out.dim_S = state.dim_S * da;
    return out;
  }
  // R wing needs the register spliced between r and s: index (r,a,s).
  const Eigen::Index dr = state.dim_R;
  const Eigen::Index ds = state.dim_S;
  out.matrix = MatrixXc<Scalar>::Zero(dr * da * ds, dr * da * ds);
  for (Eigen::Index r1 = 0; r1 < dr; ++r1)
    for (Eigen::Index a1 = 0; a1 < da; ++a1)
      for (Eigen::Index s1 = 0; s1 < ds; ++s1)
        for (Eigen::Index r2 = 0; r2 < dr; ++r2)
          for (Eigen::Index a2 = 0; a2 < da; ++a2)
            for (Eigen::Index s2 = 0; s2 < ds; ++s2)
              out.matrix((r1 * da + a1) * ds + s1, (r2 * da + a2) * ds + s2) =
                  state.matrix(r1 * ds + s1, r2 * ds + s2) * xi(a1) * std::conj(xi(a2));
  out.dim_R = dr * da;
  out.dim_S = ds;
  return out;
}

}  // namespace detail

// Conjugates the strategy by local unitaries and optionally tensors in pure
// ancillas on which every observable acts as identity. The resulting strategy
// reproduces the original correlation table exactly.
template <typename Scalar>
StrategyT<Scalar> apply_gauge(const StrategyT<Scalar>& strategy,
                              const GaugeTransformT<Scalar>& gauge) {
  if (gauge.u_R.rows() != strategy.state.dim_R || gauge.u_S.rows() != strategy.state.dim_S)
    throw structural_error("gauge unitary dimensions do not match strategy");
  if (!is_unitary(gauge.u_R) || !is_unitary(gauge.u_S))
    throw structural_error("gauge transform requires unitary matrices");

  StrategyT<Scalar> out = strategy;
  const MatrixXc<Scalar> u_joint = kron(gauge.u_R, gauge.u_S);
  out.state.matrix = u_joint * strategy.state.matrix * u_joint.adjoint();
  for (int i = 0; i < 2; ++i) {
    out.obs_R[static_cast<std::size_t>(i)].matrix =
        gauge.u_R * strategy.obs_R[static_cast<std::size_t>(i)].matrix * gauge.u_R.adjoint();
    out.obs_S[static_cast<std::size_t>(i)].matrix =
        gauge.u_S * strategy.obs_S[static_cast<std::size_t>(i)].matrix * gauge.u_S.adjoint();
  }

  if (gauge.ancilla_R.size() > 0) {
    out.state = detail::embed_ancilla(out.state, Wing::R, gauge.ancilla_R);
    const MatrixXc<Scalar> id =
        MatrixXc<Scalar>::Identity(gauge.ancilla_R.size(), gauge.ancilla_R.size());
    for (auto& obs : out.obs_R) obs.matrix = kron(obs.matrix, id).eval();
  }
  if (gauge.ancilla_S.size() > 0) {
    out.state = detail::embed_ancilla(out.state, Wing::S, gauge.ancilla_S);
    const MatrixXc<Scalar> id =
        MatrixXc<Scalar>::Identity(gauge.ancilla_S.size(), gauge.ancilla_S.size());
    for (auto& obs : out.obs_S) obs.matrix = kron(obs.matrix, id).eval();
  }
  return out;
}

// Haar-distributed unitary via QR of a complex Gaussian matrix, with the
// phase convention fixed from the R diagonal.
template <typename Scalar = double>
MatrixXc<Scalar> random_unitary(Eigen::Index dim, CounterRng& rng) {
  MatrixXc<Scalar> gaussian(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Scalar u1 = std::max(static_cast<Scalar>(rng.next_unit()),
                                 std::numeric_limits<Scalar>::min());
      const Scalar u2 = static_cast<Scalar>(rng.next_unit());
      const Scalar radius = std::sqrt(Scalar(-2) * std::log(u1));
      const Scalar angle = Scalar(2 * EIGEN_PI) * u2;
      gaussian(i, j) = Complex<Scalar>(radius * std::cos(angle), radius * std::sin(angle));
    }
  Eigen::HouseholderQR<MatrixXc<Scalar>> qr(gaussian);
  MatrixXc<Scalar> q = qr.householderQ() * MatrixXc<Scalar>::Identity(dim, dim);
  const MatrixXc<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex<Scalar> d = r(j, j);
    const Scalar mag = std::abs(d);
    if (mag > 0) q.col(j) *= d / mag;
  }
  return q;
}

template <typename Scalar = double>
VectorXc<Scalar> random_pure_state(Eigen::Index dim, CounterRng& rng) {
  VectorXc<Scalar> psi(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Scalar u1 = std::max(static_cast<Scalar>(rng.next_unit()),
                               std::numeric_limits<Scalar>::min());
    const Scalar u2 = static_cast<Scalar>(rng.next_unit());
    const Scalar radius = std::sqrt(Scalar(-2) * std::log(u1));
    const Scalar angle = Scalar(2 * EIGEN_PI) * u2;
    psi(i) = Complex<Scalar>(radius * std::cos(angle), radius * std::sin(angle));
  }
  psi /= psi.norm();
  return psi;
}

// Random binary observable V diag(+1,...,-1,...) V^dagger with a Haar V and
// at least one eigenvalue of each sign when dim > 1.
template <typename Scalar = double>
BinaryObservableT<Scalar> random_observable(Eigen::Index dim, CounterRng& rng) {
  const MatrixXc<Scalar> v = random_unitary<Scalar>(dim, rng);
  VectorXc<Scalar> diag(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const bool plus = (dim > 1 && i == 0) ? true
                      : (dim > 1 && i == 1) ? false
                                            : rng.next_bit() == 0;
    diag(i) = plus ? Complex<Scalar>(1) : Complex<Scalar>(-1);
  }
  BinaryObservableT<Scalar> obs;
  obs.matrix = v * diag.asDiagonal() * v.adjoint();
  return obs;
}

}  // namespace diqgps

#endif  // DIQGPS_QUANTUM_HPP
