// Scenario files: strict key-value text describing one full session — seed,
// round count, measurement strategy, geometry and motion, codec, attack and
// verdict policy. Unknown keys are errors.

#ifndef DIQGPS_SCENARIO_HPP
#define DIQGPS_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "diqgps/adversary.hpp"
#include "diqgps/kinematics.hpp"
#include "diqgps/quantum.hpp"
#include "diqgps/transcript.hpp"

namespace diqgps {

enum class StrategyKind { Canonical, Custom };

struct StrategySpec {
  StrategyKind kind = StrategyKind::Canonical;
  std::optional<Strategy> custom;
};

struct KinematicsSection {
  double z_source = 0.0;
  double z_receiver = 0.0;
  double z_satellite = 0.0;
  double v = 0.0;  // used only in the moving phase
  double c = kSpeedOfLight;
  double emission_start = 0.0;
  double emission_period = 0.0;
  PhaseTag phase = PhaseTag::Rest;
};

struct CodecSection {
  int width_bits = 32;
  double delta_t = 1e-9;
};

struct PolicySection {
  double k_sigma = 3.0;
  DilationFormula dilation_formula = DilationFormula::FirstPrinciples;
  TS0Variant t_s0_variant = TS0Variant::SatelliteBetween;
};

struct Scenario {
  std::uint64_t seed = 0;
  std::int64_t n_rounds = 0;
  std::string scenario_id;
  StrategySpec strategy;
  KinematicsSection kinematics;
  CodecSection codec;
  AttackConfig attack;
  PolicySection policy;
};

// Parses and fully validates a scenario file. Throws config_error with the
// offending line or field named.
Scenario parse_scenario(const std::string& path);

// Same, from in-memory text; `origin` labels error messages.
Scenario parse_scenario_text(const std::string& text, const std::string& origin);

// Canonical textual form; parse_scenario_text(emit_scenario(s)) reproduces s.
std::string emit_scenario(const Scenario& scenario);

// Cross-field checks: strategy invariants, |v| < c, collinear layout, codec
// capacity against n_rounds, attack field consistency.
void validate_scenario(const Scenario& scenario);

Strategy build_strategy(const StrategySpec& spec);

// Number of timestamps the satellite encodes under this scenario's policy.
int encoded_timestamp_count(const Scenario& scenario);

}  // namespace diqgps

#endif  // DIQGPS_SCENARIO_HPP
