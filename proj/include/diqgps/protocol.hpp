// The DIQGPS session state machine. Test phase: entangled rounds with timed
// detections at a stationary receiver and a stationary-or-moving satellite.
// Reveal phase: the satellite's first detection timestamps, Manchester-encoded
// into later input choices, are disclosed. Verdict: CHSH certification of the
// transcript, clock synchronization, position fix and the dilation check.

#ifndef DIQGPS_PROTOCOL_HPP
#define DIQGPS_PROTOCOL_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "diqgps/correlations.hpp"
#include "diqgps/kinematics.hpp"
#include "diqgps/scenario.hpp"
#include "diqgps/transcript.hpp"

namespace diqgps {

enum class VerdictStatus { Accept, Reject, Inconclusive };

inline const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Accept: return "accept";
    case VerdictStatus::Reject: return "reject";
    case VerdictStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

// Everything the receiver needs to judge a transcript. v is the satellite's
// recession speed (positive = moving away from the source along the photon
// direction) during the moving phase.
struct VerdictPolicy {
  double k_sigma = 3.0;
  DilationFormula dilation_formula = DilationFormula::FirstPrinciples;
  TS0Variant t_s0_variant = TS0Variant::SatelliteBetween;
  double v = 0.0;
  double c = kSpeedOfLight;
  double z_source = 0.0;
};

VerdictPolicy verdict_policy(const Scenario& scenario);

struct VerdictReport {
  BellEstimate bell;
  BellClass bell_class = BellClass::LocalExplainable;
  std::optional<std::array<double, 2>> decoded_t_S;  // first two detections
  std::optional<double> decoded_t_S0;
  std::optional<double> clock_offset;   // (t_R2 - t_R1) - (t_S2 - t_S1)
  std::optional<double> separation;     // receiver-satellite distance fix
  std::optional<double> dilation_expected;
  std::optional<double> dilation_observed;
  DilationFormula dilation_formula_used = DilationFormula::FirstPrinciples;
  bool accept = false;
  VerdictStatus status = VerdictStatus::Reject;
  std::string reason;
};

// Runs the full test + reveal pipeline. Deterministic in master_seed for any
// thread count: every random choice comes from a counter stream addressed by
// (master_seed, stream tag, round index).
SessionTranscript run_session(const Scenario& scenario, std::uint64_t master_seed,
                              int n_threads = 1);

inline SessionTranscript run_session(const Scenario& scenario) {
  return run_session(scenario, scenario.seed, 1);
}

// The receiver's full post-session evaluation. Tamper evidence in the decoded
// carriers rejects; an empty statistics cell is Inconclusive, not Reject;
// otherwise acceptance requires the QuantumMaximal class.
VerdictReport evaluate_verdict(const SessionTranscript& transcript,
                               const VerdictPolicy& policy);

struct ClassicalBaselineResult {
  double true_distance = 0.0;
  double reported_distance = 0.0;
  double distance_error = 0.0;
  bool detected = false;  // the classical protocol has no detection mechanism
};

// One-satellite classical positioning under a signal delay: the receiver
// trusts the transmitted dispatch time, so a delay of delta misplaces it by
// exactly c * delta and nothing flags the attack.
ClassicalBaselineResult classical_baseline_session(const Scenario& scenario,
                                                   double delay_seconds);

}  // namespace diqgps

#endif  // DIQGPS_PROTOCOL_HPP
