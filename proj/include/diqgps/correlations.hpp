// Correlation tables p(r,s|x,y), CHSH functional, finite-sample Bell
// estimation and its classification against the classical bound 2 and the
// Tsirelson value 2*sqrt(2).

#ifndef DIQGPS_CORRELATIONS_HPP
#define DIQGPS_CORRELATIONS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "diqgps/transcript.hpp"
#include "diqgps/types.hpp"

namespace diqgps {

inline constexpr double kChshClassicalBound = 2.0;
inline const double kChshQuantumMax = 2.0 * std::sqrt(2.0);

// Joint conditional distribution over two binary inputs and two binary
// outcomes. Row = 2x + y, column = 2r + s. counts, when present, holds the
// number of samples behind each (x,y) block; absent counts mean the table is
// exact (infinite statistics).
template <typename Scalar = double>
struct CorrelationTableT {
  Eigen::Matrix<Scalar, 4, 4> joint = Eigen::Matrix<Scalar, 4, 4>::Zero();
  std::optional<std::array<std::int64_t, 4>> counts;

  Scalar p(int x, int y, int r, int s) const { return joint(2 * x + y, 2 * r + s); }
  Scalar& p(int x, int y, int r, int s) { return joint(2 * x + y, 2 * r + s); }
  bool exact() const { return !counts.has_value(); }
};

using CorrelationTable = CorrelationTableT<double>;

template <typename Scalar = double>
struct BellEstimateT {
  Scalar value = 0;
  Scalar stderr_ = 0;  // 0 only for exact tables
  std::int64_t n_rounds_used = 0;
};

using BellEstimate = BellEstimateT<double>;

enum class BellClass { QuantumMaximal, NonlocalSubMaximal, LocalExplainable };

inline const char* to_string(BellClass c) {
  switch (c) {
    case BellClass::QuantumMaximal: return "QuantumMaximal";
    case BellClass::NonlocalSubMaximal: return "NonlocalSubMaximal";
    case BellClass::LocalExplainable: return "LocalExplainable";
  }
  return "?";
}

// <R_x S_y> = sum_{r,s} (-1)^{r+s} p(r,s|x,y).
template <typename Scalar>
Scalar expectation(const CorrelationTableT<Scalar>& table, int x, int y) {
  const Scalar block_sum = table.joint.row(2 * x + y).sum();
  if (std::abs(block_sum - Scalar(1)) > Scalar(1e-9))
    throw data_error("correlation block (x=" + std::to_string(x) +
                     ",y=" + std::to_string(y) + ") is not normalized: sum=" +
                     std::to_string(static_cast<double>(block_sum)));
  return table.p(x, y, 0, 0) - table.p(x, y, 0, 1) - table.p(x, y, 1, 0) +
         table.p(x, y, 1, 1);
}

// B = <R_0 S_0> + <R_0 S_1> + <R_1 S_0> - <R_1 S_1>, the CHSH functional with
// the conventional 1,2 input labels mapped to bits 0,1.
template <typename Scalar>
Scalar chsh_value(const CorrelationTableT<Scalar>& table) {
  return expectation(table, 0, 0) + expectation(table, 0, 1) +
         expectation(table, 1, 0) - expectation(table, 1, 1);
}

// Empirical table from a transcript. Rounds whose index is in `exclude`
// (reveal-phase carriers, whose inputs are not uniform) are ignored.
template <typename Scalar = double>
CorrelationTableT<Scalar> estimate_table(
    const std::vector<RoundRecord>& rounds,
    const std::unordered_set<std::int64_t>& exclude = {}) {
  Eigen::Matrix<std::int64_t, 4, 4> tally = Eigen::Matrix<std::int64_t, 4, 4>::Zero();
  for (const RoundRecord& round : rounds) {
    if (exclude.contains(round.index)) continue;
    tally(2 * round.x + round.y, 2 * round.r + round.s) += 1;
  }
  CorrelationTableT<Scalar> table;
  std::array<std::int64_t, 4> counts{};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const int row = 2 * x + y;
      const std::int64_t n = tally.row(row).sum();
      if (n == 0)
        throw insufficient_data_error("no retained rounds for cell (x=" +
                                      std::to_string(x) + ",y=" + std::to_string(y) +
                                      ")");
      counts[static_cast<std::size_t>(row)] = n;
      for (int col = 0; col < 4; ++col)
        table.joint(row, col) = static_cast<Scalar>(tally(row, col)) / static_cast<Scalar>(n);
    }
  table.counts = counts;
  return table;
}

// CHSH value of a table plus its propagated standard error. Each cell
// probability is treated as an independent binomial, so
// Var<R_x S_y> = sum_{r,s} p(1-p)/n_xy and the four settings add.
template <typename Scalar>
BellEstimateT<Scalar> bell_from_table(const CorrelationTableT<Scalar>& table) {
  BellEstimateT<Scalar> est;
  est.value = chsh_value(table);
  if (std::abs(est.value) > Scalar(4) + Scalar(1e-9))
    throw data_error("CHSH value outside algebraic range [-4,4]");
  if (table.counts) {
    Scalar var = 0;
    for (int row = 0; row < 4; ++row) {
      const auto n = static_cast<Scalar>((*table.counts)[static_cast<std::size_t>(row)]);
      for (int col = 0; col < 4; ++col) {
        const Scalar p = table.joint(row, col);
        var += p * (Scalar(1) - p) / n;
      }
      est.n_rounds_used += (*table.counts)[static_cast<std::size_t>(row)];
    }
    est.stderr_ = std::sqrt(var);
  }
  return est;
}

template <typename Scalar = double>
BellEstimateT<Scalar> bell_estimate(const std::vector<RoundRecord>& rounds,
                                    const std::unordered_set<std::int64_t>& exclude = {}) {
  return bell_from_table(estimate_table<Scalar>(rounds, exclude));
}

// Three-way verdict on an estimate, k_sigma standard errors wide. Ties break
// toward the weaker class: the LocalExplainable window is checked first. The
// 1e-9 slack on the quantum threshold absorbs rounding when stderr is zero.
template <typename Scalar>
BellClass classify(const BellEstimateT<Scalar>& est, Scalar k_sigma) {
  if (est.value <= kChshClassicalBound + k_sigma * est.stderr_)
    return BellClass::LocalExplainable;
  if (est.value >= kChshQuantumMax - k_sigma * est.stderr_ - Scalar(1e-9))
    return BellClass::QuantumMaximal;
  return BellClass::NonlocalSubMaximal;
}

struct LocalBounds {
  double max = 0;
  double min = 0;
  int n_strategies = 0;
};

// Exhaustive CHSH extrema over the 16 deterministic strategies r = f(x),
// s = g(y). Exact integers: the classical bound is 2, the minimum -2.
inline LocalBounds local_deterministic_bounds() {
  LocalBounds bounds;
  bounds.max = -4;
  bounds.min = 4;
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1) {
          auto sign = [](int r, int s) { return ((r + s) % 2 == 0) ? 1.0 : -1.0; };
          const double b = sign(a0, b0) + sign(a0, b1) + sign(a1, b0) - sign(a1, b1);
          bounds.max = std::max(bounds.max, b);
          bounds.min = std::min(bounds.min, b);
          ++bounds.n_strategies;
        }
  return bounds;
}

inline double local_bound_bruteforce() { return local_deterministic_bounds().max; }

// Largest absolute no-signalling defect: how much a party's outcome marginal
// moves when the other party's input flips. Zero for quantum tables.
template <typename Scalar>
Scalar nosignalling_violation(const CorrelationTableT<Scalar>& table) {
  Scalar worst = 0;
  for (int x = 0; x < 2; ++x)
    for (int r = 0; r < 2; ++r) {
      const Scalar m0 = table.p(x, 0, r, 0) + table.p(x, 0, r, 1);
      const Scalar m1 = table.p(x, 1, r, 0) + table.p(x, 1, r, 1);
      worst = std::max(worst, std::abs(m0 - m1));
    }
  for (int y = 0; y < 2; ++y)
    for (int s = 0; s < 2; ++s) {
      const Scalar m0 = table.p(0, y, 0, s) + table.p(0, y, 1, s);
      const Scalar m1 = table.p(1, y, 0, s) + table.p(1, y, 1, s);
      worst = std::max(worst, std::abs(m0 - m1));
    }
  return worst;
}

// Worst z-score of the no-signalling comparisons for a counted table, using
// pooled binomial standard errors.
template <typename Scalar>
Scalar nosignalling_max_zscore(const CorrelationTableT<Scalar>& table) {
  if (!table.counts) return nosignalling_violation(table) > 0 ? std::numeric_limits<Scalar>::infinity() : Scalar(0);
  const auto& counts = *table.counts;
  Scalar worst = 0;
  auto zscore = [](Scalar p0, Scalar n0, Scalar p1, Scalar n1) -> Scalar {
    const Scalar pooled = (p0 * n0 + p1 * n1) / (n0 + n1);
    const Scalar var = pooled * (Scalar(1) - pooled) * (Scalar(1) / n0 + Scalar(1) / n1);
    const Scalar diff = std::abs(p0 - p1);
    if (var <= Scalar(0)) return diff > Scalar(0) ? std::numeric_limits<Scalar>::infinity() : Scalar(0);
    return diff / std::sqrt(var);
  };
  for (int x = 0; x < 2; ++x) {
    const auto n0 = static_cast<Scalar>(counts[static_cast<std::size_t>(2 * x)]);
    const auto n1 = static_cast<Scalar>(counts[static_cast<std::size_t>(2 * x + 1)]);
    for (int r = 0; r < 2; ++r) {
      const Scalar m0 = table.p(x, 0, r, 0) + table.p(x, 0, r, 1);
      const Scalar m1 = table.p(x, 1, r, 0) + table.p(x, 1, r, 1);
      worst = std::max(worst, zscore(m0, n0, m1, n1));
    }
  }
  for (int y = 0; y < 2; ++y) {
    const auto n0 = static_cast<Scalar>(counts[static_cast<std::size_t>(y)]);
    const auto n1 = static_cast<Scalar>(counts[static_cast<std::size_t>(2 + y)]);
    for (int s = 0; s < 2; ++s) {
      const Scalar m0 = table.p(0, y, 0, s) + table.p(0, y, 1, s);
      const Scalar m1 = table.p(1, y, 0, s) + table.p(1, y, 1, s);
      worst = std::max(worst, zscore(m0, n0, m1, n1));
    }
  }
  return worst;
}

}  // namespace diqgps

#endif  // DIQGPS_CORRELATIONS_HPP
