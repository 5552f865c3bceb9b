// Test-only reference implementations, kept independent of the library's
// Eigen path: plain nested-vector complex matrices with index-loop algebra.
// Expected values in the suites are computed here (or frozen from here) and
// asserted against the production code.

#ifndef DIQGPS_TESTS_ORACLE_HPP
#define DIQGPS_TESTS_ORACLE_HPP

#include <array>
#include <cassert>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cx = std::complex<double>;
using cmat = std::vector<std::vector<cx>>;

inline cmat zeros(std::size_t n, std::size_t m) {
  return cmat(n, std::vector<cx>(m, cx(0)));
}

inline cmat identity(std::size_t n) {
  cmat out = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) out[i][i] = cx(1);
  return out;
}

inline cmat mul(const cmat& a, const cmat& b) {
  cmat out = zeros(a.size(), b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline cmat add(const cmat& a, const cmat& b) {
  cmat out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) out[i][j] += b[i][j];
  return out;
}

inline cmat scale(cx factor, const cmat& a) {
  cmat out = a;
  for (auto& row : out)
    for (auto& entry : row) entry *= factor;
  return out;
}

inline cmat dagger(const cmat& a) {
  cmat out = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) out[j][i] = std::conj(a[i][j]);
  return out;
}

inline cmat kron(const cmat& a, const cmat& b) {
  const std::size_t ar = a.size(), ac = a[0].size();
  const std::size_t br = b.size(), bc = b[0].size();
  cmat out = zeros(ar * br, ac * bc);
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l)
          out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
  return out;
}

inline cx trace(const cmat& a) {
  cx t(0);
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

inline cmat sigma_x() { return {{cx(0), cx(1)}, {cx(1), cx(0)}}; }
inline cmat sigma_y() { return {{cx(0), cx(0, -1)}, {cx(0, 1), cx(0)}}; }
inline cmat sigma_z() { return {{cx(1), cx(0)}, {cx(0), cx(-1)}}; }

// |phi+><phi+| for |phi+> = (|00> + |11>)/sqrt(2).
inline cmat phi_plus_density() {
  cmat rho = zeros(4, 4);
  rho[0][0] = rho[0][3] = rho[3][0] = rho[3][3] = cx(0.5);
  return rho;
}

// sigma_z-dephased |phi+>: (|00><00| + |11><11|)/2, the intercept-resend
// output on either wing.
inline cmat dephased_phi_plus() {
  cmat rho = zeros(4, 4);
  rho[0][0] = rho[3][3] = cx(0.5);
  return rho;
}

inline cmat effect(const cmat& observable, int outcome) {
  const cx sign = outcome == 0 ? cx(1) : cx(-1);
  return scale(cx(0.5), add(identity(observable.size()), scale(sign, observable)));
}

inline double born(const cmat& rho, const cmat& obs_R, int r, const cmat& obs_S, int s) {
  return trace(mul(kron(effect(obs_R, r), effect(obs_S, s)), rho)).real();
}

// The canonical observables, receiver then satellite, input-bit indexed.
inline std::array<cmat, 2> canonical_obs_R() { return {sigma_z(), sigma_x()}; }

inline std::array<cmat, 2> canonical_obs_S() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {scale(cx(inv_sqrt2), add(sigma_z(), sigma_x())),
          scale(cx(inv_sqrt2), add(sigma_z(), scale(cx(-1), sigma_x())))};
}

// 16-entry table indexed ((x*2+y)*2+r)*2+s.
inline std::array<double, 16> table_for(const cmat& rho, const std::array<cmat, 2>& obs_R,
                                        const std::array<cmat, 2>& obs_S) {
  std::array<double, 16> table{};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
          table[static_cast<std::size_t>(((x * 2 + y) * 2 + r) * 2 + s)] =
              born(rho, obs_R[static_cast<std::size_t>(x)], r,
                   obs_S[static_cast<std::size_t>(y)], s);
  return table;
}

inline double expectation_from_table(const std::array<double, 16>& table, int x, int y) {
  double e = 0;
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s)
      e += ((r + s) % 2 == 0 ? 1.0 : -1.0) *
           table[static_cast<std::size_t>(((x * 2 + y) * 2 + r) * 2 + s)];
  return e;
}

inline double chsh_from_table(const std::array<double, 16>& table) {
  return expectation_from_table(table, 0, 0) + expectation_from_table(table, 0, 1) +
         expectation_from_table(table, 1, 0) - expectation_from_table(table, 1, 1);
}

inline cmat from_eigen(const Eigen::MatrixXcd& m) {
  cmat out = zeros(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

}  // namespace oracle

#endif  // DIQGPS_TESTS_ORACLE_HPP
