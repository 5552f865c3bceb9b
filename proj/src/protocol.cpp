#include "diqgps/protocol.hpp"

#include <cmath>
#include <thread>
#include <unordered_set>
#include <vector>

#include "diqgps/adversary.hpp"
#include "diqgps/codec.hpp"
#include "diqgps/rng.hpp"

namespace diqgps {

namespace {

// Recession speed of the satellite relative to the photons chasing it:
// positive when it moves away from the source. Zero at rest.
double recession_velocity(const KinematicsSection& kin) {
  if (kin.phase == PhaseTag::Rest) return 0.0;
  const double side = (kin.z_satellite - kin.z_source) >= 0 ? 1.0 : -1.0;
  return side * kin.v;
}

// Satellite clock reading for a coordinate detection time. At rest the clock
// tracks coordinate time. In motion the reading follows the scenario's
// selected stretch convention: the first-principles clock accumulates proper
// time t * sqrt(1 - v^2/c^2); the eq8 convention runs the clock at
// t / sqrt(1 - v^2/c^2) so that detection gaps land on that formula.
double satellite_clock(double t_coord, PhaseTag phase, DilationFormula model,
                       double v_recession, double c) {
  if (phase == PhaseTag::Rest) return t_coord;
  const double contraction = lorentz_contraction(v_recession, c);
  return model == DilationFormula::FirstPrinciples ? t_coord * contraction
                                                   : t_coord / contraction;
}

}  // namespace

VerdictPolicy verdict_policy(const Scenario& scenario) {
  VerdictPolicy policy;
  policy.k_sigma = scenario.policy.k_sigma;
  policy.dilation_formula = scenario.policy.dilation_formula;
  policy.t_s0_variant = scenario.policy.t_s0_variant;
  policy.v = recession_velocity(scenario.kinematics);
  policy.c = scenario.kinematics.c;
  policy.z_source = scenario.kinematics.z_source;
  return policy;
}

SessionTranscript run_session(const Scenario& scenario, std::uint64_t master_seed,
                              int n_threads) {
  validate_scenario(scenario);
  const KinematicsSection& kin = scenario.kinematics;
  const AttackConfig& attack = scenario.attack;
  const std::int64_t n_rounds = scenario.n_rounds;

  Strategy strategy = build_strategy(scenario.strategy);
  double delay_R = 0.0;
  double delay_S = 0.0;
  if (attack.kind == AttackKind::InterceptResend ||
      (attack.kind == AttackKind::Delay && !attack.has_quantum_memory)) {
    const BinaryObservable basis =
        attack.basis.value_or(BinaryObservable{pauli_z<double>()});
    strategy.state = intercept_resend(strategy.state, basis, attack.wing);
  }
  if (attack.kind == AttackKind::Delay) {
    (attack.wing == Wing::R ? delay_R : delay_S) = *attack.delay_seconds;
  }
  const CorrelationTable table = exact_correlation_table(strategy);

  const double v = kin.phase == PhaseTag::Moving ? kin.v : 0.0;
  const double v_recession = recession_velocity(kin);

  const auto emit_time = [&](std::int64_t i) {
    return kin.emission_start + static_cast<double>(i - 1) * kin.emission_period;
  };
  const auto satellite_clock_at = [&](std::int64_t i) {
    const double t_coord = satellite_detection_time(kin.z_source, kin.z_satellite, v,
                                                    kin.c, emit_time(i)) +
                           delay_S;
    return satellite_clock(t_coord, kin.phase, scenario.policy.dilation_formula,
                           v_recession, kin.c);
  };

  // Reveal-phase payload: the satellite's first two detection times, plus the
  // emission timestamp when the source rides on the satellite.
  std::vector<double> encoded_times = {satellite_clock_at(1), satellite_clock_at(2)};
  if (scenario.policy.t_s0_variant == TS0Variant::Encoded)
    encoded_times.push_back(emit_time(1));

  TimestampCodec codec;
  codec.width_bits = scenario.codec.width_bits;
  codec.delta_t = scenario.codec.delta_t;
  CounterRng carrier_rng(master_seed, StreamTag::CarrierSelect);
  codec.carrier_indices = sample_without_replacement(
      3, n_rounds, 2 * static_cast<std::size_t>(codec.width_bits) * encoded_times.size(),
      carrier_rng);
  const InputOverlay overlay = encode_timestamps(encoded_times, codec);

  std::vector<RoundRecord> rounds(static_cast<std::size_t>(n_rounds));
  const auto fill_rounds = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i <= end; ++i) {
      RoundRecord record;
      record.index = i;
      record.t_emit = emit_time(i);
      record.t_detect_R =
          receiver_detection_time(kin.z_source, kin.z_receiver, kin.c, record.t_emit) +
          delay_R;
      record.t_detect_S = satellite_clock_at(i);
      record.x =
          CounterRng(master_seed, StreamTag::InputR, static_cast<std::uint64_t>(i))
              .next_bit();
      const auto forced = overlay.find(i);
      record.carrier = forced != overlay.end();
      record.y = record.carrier
                     ? forced->second
                     : CounterRng(master_seed, StreamTag::InputS,
                                  static_cast<std::uint64_t>(i))
                           .next_bit();
      const auto [r, s] = sample_joint(
          table, record.x, record.y,
          CounterRng(master_seed, StreamTag::Outcome, static_cast<std::uint64_t>(i))
              .next_unit());
      record.r = r;
      record.s = s;
      rounds[static_cast<std::size_t>(i - 1)] = record;
    }
  };

  if (n_threads <= 1) {
    fill_rounds(1, n_rounds);
  } else {
    std::vector<std::thread> workers;
    const std::int64_t chunk = (n_rounds + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const std::int64_t begin = 1 + static_cast<std::int64_t>(t) * chunk;
      const std::int64_t end = std::min<std::int64_t>(begin + chunk - 1, n_rounds);
      if (begin > end) break;
      workers.emplace_back(fill_rounds, begin, end);
    }
    for (std::thread& worker : workers) worker.join();
  }

  SessionTranscript transcript;
  transcript.rounds = std::move(rounds);
  transcript.revealed_carriers = std::move(codec);
  transcript.phase_tag = kin.phase;
  transcript.scenario_id = scenario.scenario_id;

  if (attack.kind == AttackKind::ForgeReveal) {
    ForgeOptions options;
    options.eve_seed = master_seed;
    transcript = forge_reveal(transcript, attack.forged_times, options);
  }
  return transcript;
}

VerdictReport evaluate_verdict(const SessionTranscript& transcript,
                               const VerdictPolicy& policy) {
  if (!transcript.revealed_carriers)
    throw data_error("reveal phase incomplete: no carrier disclosure in transcript");
  const TimestampCodec& codec = *transcript.revealed_carriers;

  VerdictReport report;
  report.dilation_formula_used = policy.dilation_formula;

  const RoundRecord* round1 = nullptr;
  const RoundRecord* round2 = nullptr;
  for (const RoundRecord& round : transcript.rounds) {
    if (round.index == 1) round1 = &round;
    if (round.index == 2) round2 = &round;
    if (round1 && round2) break;
  }
  if (!round1 || !round2)
    throw data_error("transcript is missing the first two timestamp rounds");

  const std::unordered_set<std::int64_t> carriers(codec.carrier_indices.begin(),
                                                  codec.carrier_indices.end());
  bool insufficient = false;
  std::string insufficient_reason;
  try {
    report.bell = bell_estimate(transcript.rounds, carriers);
    report.bell_class = classify(report.bell, policy.k_sigma);
  } catch (const insufficient_data_error& e) {
    insufficient = true;
    insufficient_reason = e.what();
  }

  std::string decode_failure;
  std::vector<double> decoded;
  try {
    decoded = decode_timestamps(transcript, codec);
  } catch (const tamper_error& e) {
    decode_failure = std::string("tamper detected: ") + e.what();
  } catch (const data_error& e) {
    decode_failure = std::string("decode failed: ") + e.what();
  }

  if (decode_failure.empty()) {
    const bool expect_ts0 = policy.t_s0_variant == TS0Variant::Encoded;
    if (decoded.size() != (expect_ts0 ? 3u : 2u)) {
      decode_failure = "decode failed: carrier disclosure does not match the policy's timestamp count";
    } else {
      const double t_S1 = decoded[0];
      const double t_S2 = decoded[1];
      report.decoded_t_S = {t_S1, t_S2};
      const double t_R1 = round1->t_detect_R;
      const double t_R2 = round2->t_detect_R;
      report.clock_offset = (t_R2 - t_R1) - (t_S2 - t_S1);
      try {
        if (expect_ts0) {
          report.decoded_t_S0 = decoded[2];
          report.separation =
              distance_from_timestamps(t_R1, t_S1, decoded[2], policy.z_source, policy.c)
                  .separation;
        } else {
          report.separation = separation_satellite_between(t_R1, t_S1, policy.c);
        }
      } catch (const data_error& e) {
        decode_failure = std::string("decode failed: ") + e.what();
      }
      if (transcript.phase_tag == PhaseTag::Moving) {
        report.dilation_observed = t_S2 - t_S1;
        report.dilation_expected =
            dilated_interval(policy.dilation_formula, t_R2 - t_R1, policy.v, policy.c);
      }
    }
  }

  if (!decode_failure.empty()) {
    report.status = VerdictStatus::Reject;
    report.reason = decode_failure;
  } else if (insufficient) {
    report.status = VerdictStatus::Inconclusive;
    report.reason = insufficient_reason;
  } else if (report.bell_class != BellClass::QuantumMaximal) {
    report.status = VerdictStatus::Reject;
    report.reason = std::string("Bell estimate classified ") +
                    to_string(report.bell_class) + ", not QuantumMaximal";
  } else {
    report.status = VerdictStatus::Accept;
  }
  report.accept = report.status == VerdictStatus::Accept;
  return report;
}

ClassicalBaselineResult classical_baseline_session(const Scenario& scenario,
                                                   double delay_seconds) {
  if (delay_seconds < 0) throw config_error("delay must be nonnegative");
  const KinematicsSection& kin = scenario.kinematics;
  ClassicalBaselineResult result;
  result.true_distance = std::abs(kin.z_receiver - kin.z_satellite);
  // The receiver trusts the transmitted dispatch time: reception is late by
  // delay_seconds, so the inferred distance inflates by exactly c * delay.
  result.distance_error = kin.c * delay_seconds;
  result.reported_distance = result.true_distance + result.distance_error;
  result.detected = false;
  return result;
}

}  // namespace diqgps
