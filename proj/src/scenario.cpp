#include "diqgps/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace diqgps {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
  throw config_error(origin + ":" + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
  try {
    std::size_t consumed = 0;
    const double parsed = std::stod(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    fail(origin, line, "invalid number for '" + key + "': " + value);
  }
}

std::int64_t parse_int(const std::string& origin, int line, const std::string& key,
                       const std::string& value) {
  std::int64_t parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size())
    fail(origin, line, "invalid integer for '" + key + "': " + value);
  return parsed;
}

std::uint64_t parse_uint(const std::string& origin, int line, const std::string& key,
                         const std::string& value) {
  std::uint64_t parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size())
    fail(origin, line, "invalid unsigned integer for '" + key + "': " + value);
  return parsed;
}

bool parse_bool(const std::string& origin, int line, const std::string& key,
                const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail(origin, line, "invalid boolean for '" + key + "': " + value);
}

// Complex literal: "1.5", "-2i", "i", "-i", "1+2i", "0.5-0.25i", "1e-3+2e-4i".
std::complex<double> parse_complex(const std::string& token) {
  const std::string text = trim(token);
  if (text.empty()) throw config_error("empty complex literal");
  const bool imaginary = text.back() == 'i';
  // Find the split between real and imaginary parts: a sign that is neither
  // leading nor part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = 1; k < text.size(); ++k) {
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E')
      split = k;
  }
  auto to_double = [&](std::string part) {
    if (part.empty() || part == "+") part = "1";
    if (part == "-") part = "-1";
    std::size_t consumed = 0;
    const double parsed = std::stod(part, &consumed);
    if (consumed != part.size())
      throw config_error("invalid complex literal: " + token);
    return parsed;
  };
  if (split == std::string::npos) {
    if (!imaginary) return {to_double(text), 0.0};
    return {0.0, to_double(text.substr(0, text.size() - 1))};
  }
  if (!imaginary) throw config_error("invalid complex literal: " + token);
  return {to_double(text.substr(0, split)),
          to_double(text.substr(split, text.size() - split - 1))};
}

// Matrix literal: rows separated by ';', entries by ','.
MatrixXc<double> parse_matrix(const std::string& origin, int line, const std::string& key,
                              const std::string& value) {
  std::vector<std::vector<std::complex<double>>> rows;
  std::stringstream row_stream(value);
  std::string row_text;
  while (std::getline(row_stream, row_text, ';')) {
    std::vector<std::complex<double>> row;
    std::stringstream entry_stream(row_text);
    std::string entry;
    while (std::getline(entry_stream, entry, ',')) {
      try {
        row.push_back(parse_complex(entry));
      } catch (const config_error& e) {
        fail(origin, line, std::string(e.what()) + " in '" + key + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(origin, line, "empty matrix for '" + key + "'");
  MatrixXc<double> matrix(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      fail(origin, line, "ragged matrix for '" + key + "'");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return matrix;
}

std::vector<double> parse_double_list(const std::string& origin, int line,
                                      const std::string& key, const std::string& value) {
  std::vector<double> values;
  std::stringstream stream(value);
  std::string token;
  while (std::getline(stream, token, ','))
    values.push_back(parse_double(origin, line, key, trim(token)));
  return values;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string format_complex(const std::complex<double>& z) {
  if (z.imag() == 0.0) return format_double(z.real());
  std::string text;
  if (z.real() != 0.0) {
    text = format_double(z.real());
    if (z.imag() > 0) text += "+";
  }
  return text + format_double(z.imag()) + "i";
}

std::string format_matrix(const MatrixXc<double>& m) {
  std::string text;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) text += "; ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) text += ", ";
      text += format_complex(m(i, j));
    }
  }
  return text;
}

struct ParseState {
  Scenario scenario;
  std::unordered_set<std::string> seen;
  std::optional<MatrixXc<double>> custom_state;
  std::array<std::optional<MatrixXc<double>>, 2> custom_obs_r;
  std::array<std::optional<MatrixXc<double>>, 2> custom_obs_s;
};

void apply_key(ParseState& state, const std::string& origin, int line,
               const std::string& section, const std::string& key,
               const std::string& value) {
  Scenario& sc = state.scenario;
  const std::string qualified = section.empty() ? key : section + "." + key;
  if (!state.seen.insert(qualified).second)
    fail(origin, line, "duplicate key '" + qualified + "'");

  if (section.empty()) {
    if (key == "seed") {
      sc.seed = parse_uint(origin, line, key, value);
    } else if (key == "n_rounds") {
      sc.n_rounds = parse_int(origin, line, key, value);
    } else if (key == "scenario_id") {
      sc.scenario_id = value;
    } else {
      fail(origin, line, "unknown key '" + key + "'");
    }
    return;
  }

  if (section == "strategy") {
    if (key == "kind") {
      if (value == "canonical") sc.strategy.kind = StrategyKind::Canonical;
      else if (value == "custom") sc.strategy.kind = StrategyKind::Custom;
      else fail(origin, line, "unknown strategy kind '" + value + "'");
    } else if (key == "state") {
      state.custom_state = parse_matrix(origin, line, qualified, value);
    } else if (key == "obs_r0" || key == "obs_r1" || key == "obs_s0" || key == "obs_s1") {
      const int slot = key[5] - '0';
      auto& target = (key[4] == 'r') ? state.custom_obs_r : state.custom_obs_s;
      target[static_cast<std::size_t>(slot)] = parse_matrix(origin, line, qualified, value);
    } else {
      fail(origin, line, "unknown key '" + qualified + "'");
    }
    return;
  }

  if (section == "kinematics") {
    if (key == "z_source") sc.kinematics.z_source = parse_double(origin, line, qualified, value);
    else if (key == "z_receiver") sc.kinematics.z_receiver = parse_double(origin, line, qualified, value);
    else if (key == "z_satellite") sc.kinematics.z_satellite = parse_double(origin, line, qualified, value);
    else if (key == "v") sc.kinematics.v = parse_double(origin, line, qualified, value);
    else if (key == "c") sc.kinematics.c = parse_double(origin, line, qualified, value);
    else if (key == "emission_start") sc.kinematics.emission_start = parse_double(origin, line, qualified, value);
    else if (key == "emission_period") sc.kinematics.emission_period = parse_double(origin, line, qualified, value);
    else if (key == "phase") {
      if (value == "rest") sc.kinematics.phase = PhaseTag::Rest;
      else if (value == "moving") sc.kinematics.phase = PhaseTag::Moving;
      else fail(origin, line, "unknown phase '" + value + "'");
    } else {
      fail(origin, line, "unknown key '" + qualified + "'");
    }
    return;
  }

  if (section == "codec") {
    if (key == "width_bits")
      sc.codec.width_bits = static_cast<int>(parse_int(origin, line, qualified, value));
    else if (key == "delta_t")
      sc.codec.delta_t = parse_double(origin, line, qualified, value);
    else
      fail(origin, line, "unknown key '" + qualified + "'");
    return;
  }

  if (section == "attack") {
    if (key == "kind") {
      if (value == "none") sc.attack.kind = AttackKind::None;
      else if (value == "intercept_resend") sc.attack.kind = AttackKind::InterceptResend;
      else if (value == "delay") sc.attack.kind = AttackKind::Delay;
      else if (value == "forge_reveal") sc.attack.kind = AttackKind::ForgeReveal;
      else fail(origin, line, "unknown attack kind '" + value + "'");
    } else if (key == "basis") {
      BinaryObservable basis;
      if (value == "z") basis.matrix = pauli_z<double>();
      else if (value == "x") basis.matrix = pauli_x<double>();
      else if (value == "y") basis.matrix = pauli_y<double>();
      else basis.matrix = parse_matrix(origin, line, qualified, value);
      sc.attack.basis = std::move(basis);
    } else if (key == "wing") {
      if (value == "r") sc.attack.wing = Wing::R;
      else if (value == "s") sc.attack.wing = Wing::S;
      else fail(origin, line, "unknown wing '" + value + "'");
    } else if (key == "delay_seconds") {
      sc.attack.delay_seconds = parse_double(origin, line, qualified, value);
    } else if (key == "has_quantum_memory") {
      sc.attack.has_quantum_memory = parse_bool(origin, line, qualified, value);
    } else if (key == "forged_times") {
      sc.attack.forged_times = parse_double_list(origin, line, qualified, value);
    } else {
      fail(origin, line, "unknown key '" + qualified + "'");
    }
    return;
  }

  if (section == "policy") {
    if (key == "k_sigma") {
      sc.policy.k_sigma = parse_double(origin, line, qualified, value);
    } else if (key == "dilation_formula") {
      if (value == "eq8" || value == "eq8_as_printed")
        sc.policy.dilation_formula = DilationFormula::Eq8AsPrinted;
      else if (value == "first_principles" || value == "first-principles")
        sc.policy.dilation_formula = DilationFormula::FirstPrinciples;
      else
        fail(origin, line, "unknown dilation formula '" + value + "'");
    } else if (key == "t_s0_variant") {
      if (value == "encoded") sc.policy.t_s0_variant = TS0Variant::Encoded;
      else if (value == "s_between") sc.policy.t_s0_variant = TS0Variant::SatelliteBetween;
      else fail(origin, line, "unknown t_s0 variant '" + value + "'");
    } else {
      fail(origin, line, "unknown key '" + qualified + "'");
    }
    return;
  }

  fail(origin, line, "unknown section '[" + section + "]'");
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  ParseState state;
  std::stringstream stream(text);
  std::string raw_line;
  std::string section;
  int line = 0;
  while (std::getline(stream, raw_line)) {
    ++line;
    const std::string content = trim(raw_line);
    if (content.empty() || content[0] == '#') continue;
    if (content.front() == '[') {
      if (content.back() != ']') fail(origin, line, "malformed section header");
      section = trim(content.substr(1, content.size() - 2));
      continue;
    }
    const auto equals = content.find('=');
    if (equals == std::string::npos) fail(origin, line, "expected 'key = value'");
    const std::string key = trim(content.substr(0, equals));
    const std::string value = trim(content.substr(equals + 1));
    if (key.empty()) fail(origin, line, "empty key");
    apply_key(state, origin, line, section, key, value);
  }

  for (const char* required : {"seed", "n_rounds", "scenario_id",
                               "kinematics.z_receiver", "kinematics.z_satellite",
                               "kinematics.emission_period"})
    if (!state.seen.contains(required))
      throw config_error(origin + ": missing required key '" + std::string(required) + "'");

  if (state.scenario.strategy.kind == StrategyKind::Custom) {
    if (!state.custom_state || !state.custom_obs_r[0] || !state.custom_obs_r[1] ||
        !state.custom_obs_s[0] || !state.custom_obs_s[1])
      throw config_error(origin +
                         ": custom strategy requires state, obs_r0, obs_r1, obs_s0, obs_s1");
    Strategy custom;
    if (state.custom_state->rows() != 4)
      throw config_error(origin + ": custom state must be a 4x4 density matrix");
    custom.state = {*state.custom_state, 2, 2};
    custom.obs_R = {BinaryObservable{*state.custom_obs_r[0]},
                    BinaryObservable{*state.custom_obs_r[1]}};
    custom.obs_S = {BinaryObservable{*state.custom_obs_s[0]},
                    BinaryObservable{*state.custom_obs_s[1]}};
    state.scenario.strategy.custom = std::move(custom);
  } else if (state.custom_state || state.custom_obs_r[0] || state.custom_obs_r[1] ||
             state.custom_obs_s[0] || state.custom_obs_s[1]) {
    throw config_error(origin + ": strategy matrices given but kind is not 'custom'");
  }

  validate_scenario(state.scenario);
  return state.scenario;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw config_error("cannot open scenario file: " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

std::string emit_scenario(const Scenario& scenario) {
  std::string out;
  out += "seed = " + std::to_string(scenario.seed) + "\n";
  out += "n_rounds = " + std::to_string(scenario.n_rounds) + "\n";
  out += "scenario_id = " + scenario.scenario_id + "\n";

  out += "\n[strategy]\n";
  out += std::string("kind = ") +
         (scenario.strategy.kind == StrategyKind::Canonical ? "canonical" : "custom") +
         "\n";
  if (scenario.strategy.kind == StrategyKind::Custom && scenario.strategy.custom) {
    const Strategy& custom = *scenario.strategy.custom;
    out += "state = " + format_matrix(custom.state.matrix) + "\n";
    out += "obs_r0 = " + format_matrix(custom.obs_R[0].matrix) + "\n";
    out += "obs_r1 = " + format_matrix(custom.obs_R[1].matrix) + "\n";
    out += "obs_s0 = " + format_matrix(custom.obs_S[0].matrix) + "\n";
    out += "obs_s1 = " + format_matrix(custom.obs_S[1].matrix) + "\n";
  }

  const KinematicsSection& kin = scenario.kinematics;
  out += "\n[kinematics]\n";
  out += "z_source = " + format_double(kin.z_source) + "\n";
  out += "z_receiver = " + format_double(kin.z_receiver) + "\n";
  out += "z_satellite = " + format_double(kin.z_satellite) + "\n";
  out += "v = " + format_double(kin.v) + "\n";
  out += "c = " + format_double(kin.c) + "\n";
  out += "emission_start = " + format_double(kin.emission_start) + "\n";
  out += "emission_period = " + format_double(kin.emission_period) + "\n";
  out += std::string("phase = ") + (kin.phase == PhaseTag::Rest ? "rest" : "moving") + "\n";

  out += "\n[codec]\n";
  out += "width_bits = " + std::to_string(scenario.codec.width_bits) + "\n";
  out += "delta_t = " + format_double(scenario.codec.delta_t) + "\n";

  out += "\n[attack]\n";
  switch (scenario.attack.kind) {
    case AttackKind::None: out += "kind = none\n"; break;
    case AttackKind::InterceptResend: out += "kind = intercept_resend\n"; break;
    case AttackKind::Delay: out += "kind = delay\n"; break;
    case AttackKind::ForgeReveal: out += "kind = forge_reveal\n"; break;
  }
  if (scenario.attack.basis)
    out += "basis = " + format_matrix(scenario.attack.basis->matrix) + "\n";
  if (scenario.attack.kind == AttackKind::InterceptResend ||
      scenario.attack.kind == AttackKind::Delay)
    out += std::string("wing = ") + (scenario.attack.wing == Wing::R ? "r" : "s") + "\n";
  if (scenario.attack.delay_seconds)
    out += "delay_seconds = " + format_double(*scenario.attack.delay_seconds) + "\n";
  if (scenario.attack.kind == AttackKind::Delay)
    out += std::string("has_quantum_memory = ") +
           (scenario.attack.has_quantum_memory ? "true" : "false") + "\n";
  if (!scenario.attack.forged_times.empty()) {
    out += "forged_times = ";
    for (std::size_t i = 0; i < scenario.attack.forged_times.size(); ++i) {
      if (i) out += ", ";
      out += format_double(scenario.attack.forged_times[i]);
    }
    out += "\n";
  }

  out += "\n[policy]\n";
  out += "k_sigma = " + format_double(scenario.policy.k_sigma) + "\n";
  out += std::string("dilation_formula = ") + to_string(scenario.policy.dilation_formula) +
         "\n";
  out += std::string("t_s0_variant = ") + to_string(scenario.policy.t_s0_variant) + "\n";
  return out;
}

Strategy build_strategy(const StrategySpec& spec) {
  Strategy strategy = (spec.kind == StrategyKind::Canonical)
                          ? canonical_strategy<double>()
                          : spec.custom.value();
  validate_strategy(strategy);
  return strategy;
}

int encoded_timestamp_count(const Scenario& scenario) {
  return scenario.policy.t_s0_variant == TS0Variant::Encoded ? 3 : 2;
}

void validate_scenario(const Scenario& scenario) {
  const KinematicsSection& kin = scenario.kinematics;
  if (scenario.n_rounds < 4)
    throw config_error("n_rounds must be at least 4");
  if (scenario.strategy.kind == StrategyKind::Custom && !scenario.strategy.custom)
    throw config_error("custom strategy selected but no matrices given");
  try {
    build_strategy(scenario.strategy);
  } catch (const structural_error& e) {
    throw config_error(std::string("strategy: ") + e.what());
  }

  if (kin.c <= 0) throw config_error("kinematics.c must be positive");
  if (kin.emission_period <= 0)
    throw config_error("kinematics.emission_period must be positive");
  const double v_used = kin.phase == PhaseTag::Moving ? kin.v : 0.0;
  if (std::abs(v_used) >= kin.c)
    throw config_error("kinematics.v: |v| must be strictly below c");
  KinematicsConfig probe;
  probe.z_source = kin.z_source;
  probe.z_receiver = kin.z_receiver;
  probe.z_satellite = kin.z_satellite;
  probe.v = v_used;
  probe.c = kin.c;
  validate_config(probe);
  if (kin.phase == PhaseTag::Moving && kin.v != 0.0) {
    // The satellite must stay on its initial side of the source through the
    // last detection, or the recession speed changes sign mid-session.
    const double t_last = kin.emission_start +
                          static_cast<double>(scenario.n_rounds - 1) * kin.emission_period;
    const double t_det =
        satellite_detection_time(kin.z_source, kin.z_satellite, kin.v, kin.c, t_last);
    const double side_start = kin.z_satellite - kin.z_source;
    const double side_end = kin.z_satellite + kin.v * t_det - kin.z_source;
    if (side_start * side_end <= 0)
      throw config_error("satellite crosses the source during the session");
  }

  if (scenario.codec.width_bits < 1 || scenario.codec.width_bits > 62)
    throw config_error("codec.width_bits must be in [1, 62]");
  if (scenario.codec.delta_t <= 0) throw config_error("codec.delta_t must be positive");
  const std::int64_t carriers_needed = 2LL * scenario.codec.width_bits *
                                       encoded_timestamp_count(scenario);
  if (carriers_needed > scenario.n_rounds - 2)
    throw capacity_error("codec needs " + std::to_string(carriers_needed) +
                         " carrier rounds but only " +
                         std::to_string(scenario.n_rounds - 2) + " are available");

  const AttackConfig& attack = scenario.attack;
  switch (attack.kind) {
    case AttackKind::None:
      if (attack.basis || attack.delay_seconds || attack.has_quantum_memory ||
          !attack.forged_times.empty())
        throw config_error("attack fields set but attack.kind is none");
      break;
    case AttackKind::InterceptResend:
      if (attack.delay_seconds || attack.has_quantum_memory || !attack.forged_times.empty())
        throw config_error("intercept_resend accepts only 'basis' and 'wing'");
      if (attack.basis) validate_observable(*attack.basis);
      break;
    case AttackKind::Delay:
      if (!attack.delay_seconds || *attack.delay_seconds < 0)
        throw config_error("delay attack requires delay_seconds >= 0");
      if (!attack.forged_times.empty())
        throw config_error("delay attack does not take forged_times");
      if (attack.basis) validate_observable(*attack.basis);
      break;
    case AttackKind::ForgeReveal:
      if (attack.basis || attack.delay_seconds || attack.has_quantum_memory)
        throw config_error("forge_reveal accepts only 'forged_times'");
      break;
  }

  if (scenario.policy.k_sigma <= 0) throw config_error("policy.k_sigma must be positive");
}

}  // namespace diqgps
