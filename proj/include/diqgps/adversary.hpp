// Channel and reveal-phase attacks: intercept-resend measurement on a flying
// subsystem, signal delay with or without quantum memory, and forgery of the
// satellite's reported input sequence.

#ifndef DIQGPS_ADVERSARY_HPP
#define DIQGPS_ADVERSARY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "diqgps/quantum.hpp"
#include "diqgps/transcript.hpp"
#include "diqgps/types.hpp"

namespace diqgps {

enum class AttackKind { None, InterceptResend, Delay, ForgeReveal };

// Scenario-level attack description. Only the fields relevant to `kind` may
// be set; the scenario loader enforces this.
struct AttackConfig {
  AttackKind kind = AttackKind::None;
  // Holding/measurement basis for InterceptResend and memoryless Delay.
  std::optional<BinaryObservable> basis;
  // Attacked subsystem; the satellite-bound wing unless stated otherwise.
  Wing wing = Wing::S;
  std::optional<double> delay_seconds;
  bool has_quantum_memory = false;
  std::vector<double> forged_times;
};

// Measures the attacked wing in the given basis and forwards the
// post-measurement ensemble: rho -> sum_k (1 (x) P_k) rho (1 (x) P_k) for the
// satellite-bound wing, projectors on the receiver side symmetrically. The
// result is the dephased mixture the honest parties then measure.
template <typename Scalar>
BipartiteStateT<Scalar> intercept_resend(const BipartiteStateT<Scalar>& state,
                                         const BinaryObservableT<Scalar>& basis,
                                         Wing wing) {
  const Eigen::Index wing_dim = (wing == Wing::R) ? state.dim_R : state.dim_S;
  if (basis.matrix.rows() != wing_dim)
    throw structural_error("intercept basis dimension does not match attacked wing");
  BipartiteStateT<Scalar> out = state;
  out.matrix.setZero();
  for (int k = 0; k < 2; ++k) {
    const MatrixXc<Scalar> projector = effect(basis, k);
    const MatrixXc<Scalar> lifted =
        (wing == Wing::R)
            ? kron(projector, MatrixXc<Scalar>::Identity(state.dim_S, state.dim_S))
            : kron(MatrixXc<Scalar>::Identity(state.dim_R, state.dim_R), projector);
    out.matrix += lifted * state.matrix * lifted;
  }
  return out;
}

struct ForgeOptions {
  std::uint64_t eve_seed = 0;
  // Counterfactual: the true carrier positions leaked to the attacker, who can
  // then rewrite exactly those rounds with a valid encoding of her times.
  bool positions_leaked = false;
  // When not leaked: rewrite the whole input sequence (the attacker cannot
  // tell carriers from ordinary rounds), or only her guessed positions.
  bool rewrite_all = true;
};

// Rewrites the satellite's reported inputs to encode forged_times. Outcome
// bits, timestamps and the authenticated carrier disclosure are never touched;
// detection is the verdict's job. Empty forged_times is a null forgery.
SessionTranscript forge_reveal(const SessionTranscript& transcript,
                               const std::vector<double>& forged_times,
                               const ForgeOptions& options);

}  // namespace diqgps

#endif  // DIQGPS_ADVERSARY_HPP
