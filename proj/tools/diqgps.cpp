// diqgps — scenario-driven simulator for device-independent quantum GPS
// sessions: run honest or attacked sessions, re-evaluate stored transcripts,
// and compare the satellite-clock dilation conventions.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diqgps/io.hpp"
#include "diqgps/protocol.hpp"
#include "diqgps/scenario.hpp"

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitError = 1;
constexpr int kExitReject = 10;
constexpr int kExitInconclusive = 20;

int verdict_exit_code(const diqgps::VerdictReport& report) {
  switch (report.status) {
    case diqgps::VerdictStatus::Accept: return kExitAccept;
    case diqgps::VerdictStatus::Reject: return kExitReject;
    case diqgps::VerdictStatus::Inconclusive: return kExitInconclusive;
  }
  return kExitError;
}

struct CommonOptions {
  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> formula_override;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& options, bool needs_out) {
  cmd->add_option("--scenario", options.scenario_path, "scenario file")
      ->required();
  auto* out = cmd->add_option("--out", options.out_dir, "output directory");
  if (needs_out) out->required();
  cmd->add_option("--seed", options.seed_override, "override the scenario seed");
  cmd->add_option("--formula", options.formula_override,
                  "dilation convention: eq8 or first-principles")
      ->check(CLI::IsMember({"eq8", "first-principles"}));
  cmd->add_option("--threads", options.threads, "worker threads for round generation")
      ->check(CLI::PositiveNumber);
}

diqgps::Scenario load_scenario(const CommonOptions& options) {
  diqgps::Scenario scenario = diqgps::parse_scenario(options.scenario_path);
  if (options.seed_override) scenario.seed = *options.seed_override;
  if (options.formula_override)
    scenario.policy.dilation_formula = *options.formula_override == "eq8"
                                           ? diqgps::DilationFormula::Eq8AsPrinted
                                           : diqgps::DilationFormula::FirstPrinciples;
  return scenario;
}

void write_outputs(const std::string& out_dir, const diqgps::SessionTranscript& transcript,
                   const diqgps::VerdictReport& report) {
  std::filesystem::create_directories(out_dir);
  diqgps::write_text_file_atomic(out_dir + "/transcript.csv",
                                 diqgps::transcript_to_csv(transcript));
  diqgps::write_text_file_atomic(out_dir + "/verdict.json",
                                 diqgps::verdict_to_json(report).dump(2) + "\n");
  diqgps::write_text_file_atomic(
      out_dir + "/summary.txt",
      diqgps::verdict_summary_text(report, transcript.scenario_id));
}

int run_simulate(const CommonOptions& options) {
  const diqgps::Scenario scenario = load_scenario(options);
  const diqgps::SessionTranscript transcript =
      diqgps::run_session(scenario, scenario.seed, options.threads);
  const diqgps::VerdictReport report =
      diqgps::evaluate_verdict(transcript, diqgps::verdict_policy(scenario));
  write_outputs(options.out_dir, transcript, report);
  std::cout << diqgps::verdict_summary_text(report, transcript.scenario_id);
  return verdict_exit_code(report);
}

int run_attack_demo(const CommonOptions& options) {
  const diqgps::Scenario scenario = load_scenario(options);
  if (scenario.attack.kind == diqgps::AttackKind::None)
    throw diqgps::config_error("attack-demo needs a scenario with an attack configured");

  const diqgps::SessionTranscript transcript =
      diqgps::run_session(scenario, scenario.seed, options.threads);
  const diqgps::VerdictReport report =
      diqgps::evaluate_verdict(transcript, diqgps::verdict_policy(scenario));
  write_outputs(options.out_dir, transcript, report);

  nlohmann::ordered_json demo;
  demo["scenario_id"] = scenario.scenario_id;
  demo["verdict"] = diqgps::verdict_to_json(report);
  const double true_separation =
      std::abs(scenario.kinematics.z_receiver - scenario.kinematics.z_satellite);
  demo["true_separation"] = true_separation;
  demo["separation_error"] =
      report.separation ? nlohmann::ordered_json(std::abs(*report.separation) -
                                                 true_separation)
                        : nlohmann::ordered_json(nullptr);

  const bool is_delay = scenario.attack.kind == diqgps::AttackKind::Delay;
  if (is_delay) {
    const double delay = scenario.attack.delay_seconds.value_or(0.0);
    const auto baseline = diqgps::classical_baseline_session(scenario, delay);
    demo["classical_baseline"] = {{"delay_seconds", delay},
                                  {"distance_error", baseline.distance_error},
                                  {"detected", baseline.detected}};
  } else {
    demo["classical_baseline"] = nullptr;
  }
  // A delay attacker holding intact qubits defeats the certification: the
  // verdict accepts even though the position fix is wrong. That acceptance is
  // the no-quantum-memory assumption being violated.
  demo["assumption1_violated"] =
      is_delay && scenario.attack.has_quantum_memory && report.accept;

  diqgps::write_text_file_atomic(options.out_dir + "/demo.json", demo.dump(2) + "\n");

  std::cout << diqgps::verdict_summary_text(report, transcript.scenario_id);
  if (is_delay) {
    std::cout << "classical baseline error: "
              << demo["classical_baseline"]["distance_error"].get<double>()
              << " m (never detected)\n";
    if (demo["assumption1_violated"].get<bool>())
      std::cout << "note: attacker held qubits intact; accepted despite the delay "
                   "(quantum-memory assumption violated)\n";
  }
  return verdict_exit_code(report);
}

int run_verify(const CommonOptions& options, const std::string& transcript_path) {
  const diqgps::Scenario scenario = load_scenario(options);
  diqgps::SessionTranscript transcript =
      diqgps::transcript_from_csv(diqgps::read_text_file(transcript_path));
  diqgps::attach_revealed_codec(transcript, scenario.codec.width_bits,
                                scenario.codec.delta_t);
  transcript.phase_tag = scenario.kinematics.phase;
  transcript.scenario_id = scenario.scenario_id;
  const diqgps::VerdictReport report =
      diqgps::evaluate_verdict(transcript, diqgps::verdict_policy(scenario));
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    diqgps::write_text_file_atomic(options.out_dir + "/verdict.json",
                                   diqgps::verdict_to_json(report).dump(2) + "\n");
    diqgps::write_text_file_atomic(
        options.out_dir + "/summary.txt",
        diqgps::verdict_summary_text(report, transcript.scenario_id));
  }
  std::cout << diqgps::verdict_summary_text(report, transcript.scenario_id);
  return verdict_exit_code(report);
}

int run_kinematics(const std::vector<double>& v_over_c, double delta,
                   const std::string& out_dir) {
  const auto rows = diqgps::compare_dilation_formulas(v_over_c, delta);
  std::ostringstream csv;
  csv << "v_over_c,coordinate_interval,eq8_as_printed,first_principles,ratio\n";
  std::printf("%10s %20s %20s %20s %14s\n", "v/c", "coordinate", "eq8_as_printed",
              "first_principles", "ratio");
  for (const auto& row : rows) {
    std::printf("%10.6g %20.10g %20.10g %20.10g %14.10g\n", row.v_over_c,
                row.coordinate_interval, row.eq8_as_printed, row.first_principles,
                row.ratio);
    char line[256];
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", row.v_over_c,
                  row.coordinate_interval, row.eq8_as_printed, row.first_principles,
                  row.ratio);
    csv << line;
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    diqgps::write_text_file_atomic(out_dir + "/kinematics.csv", csv.str());
  }
  return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"device-independent quantum GPS simulator"};
  app.require_subcommand(1);

  CommonOptions simulate_options;
  CLI::App* simulate = app.add_subcommand("simulate", "run a full session and judge it");
  add_common(simulate, simulate_options, true);

  CommonOptions demo_options;
  CLI::App* demo =
      app.add_subcommand("attack-demo", "run an attacked session and report the damage");
  add_common(demo, demo_options, true);

  CommonOptions verify_options;
  std::string transcript_path;
  CLI::App* verify =
      app.add_subcommand("verify", "re-evaluate a stored transcript CSV");
  add_common(verify, verify_options, false);
  verify->add_option("--transcript", transcript_path, "transcript CSV file")->required();

  std::vector<double> v_over_c = {0.1, 0.5, 0.8};
  double delta = 1.0;
  std::string kinematics_out;
  CLI::App* kinematics =
      app.add_subcommand("kinematics", "compare the two dilation conventions");
  kinematics->add_option("--v-over-c", v_over_c, "speeds as fractions of c")
      ->delimiter(',');
  kinematics->add_option("--delta", delta, "receiver-side interval in seconds");
  kinematics->add_option("--out", kinematics_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (simulate->parsed()) return run_simulate(simulate_options);
    if (demo->parsed()) return run_attack_demo(demo_options);
    if (verify->parsed()) return run_verify(verify_options, transcript_path);
    if (kinematics->parsed()) return run_kinematics(v_over_c, delta, kinematics_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
