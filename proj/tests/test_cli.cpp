// End-to-end checks of the installed command-line surface: exit codes, file
// outputs, byte determinism, and the verify round trip. Each case shells out
// to the real binary.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

const std::string kBin = DIQGPS_CLI_BIN;
const std::string kScenarioDir = DIQGPS_SCENARIO_DIR;

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run(const std::string& args) {
  const std::string out_file =
      (std::filesystem::temp_directory_path() / "diqgps_cli_stdout.txt").string();
  const std::string command = kBin + " " + args + " > " + out_file + " 2>&1";
  const int raw = std::system(command.c_str());
  std::ifstream file(out_file);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return {WEXITSTATUS(raw), buffer.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  REQUIRE(file.good());
  std::stringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "diqgps_cli_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("simulate accepts the honest fixture with exit 0 and writes all files") {
  const auto dir = fresh_dir("simulate_honest");
  const RunResult result = run("simulate --scenario " + kScenarioDir +
                               "/honest_rest.scn --out " + dir.string());
  CHECK(result.exit_code == 0);
  CHECK(std::filesystem::exists(dir / "transcript.csv"));
  CHECK(std::filesystem::exists(dir / "verdict.json"));
  CHECK(std::filesystem::exists(dir / "summary.txt"));
  const auto verdict = nlohmann::json::parse(slurp((dir / "verdict.json").string()));
  CHECK(verdict["accept"].get<bool>());
  CHECK(verdict["status"].get<std::string>() == "accept");
  CHECK(verdict["class"].get<std::string>() == "QuantumMaximal");
}

TEST_CASE("simulate rejects the intercept fixture with exit 10") {
  const auto dir = fresh_dir("simulate_intercept");
  const RunResult result = run("simulate --scenario " + kScenarioDir +
                               "/intercept_resend.scn --out " + dir.string());
  CHECK(result.exit_code == 10);
  const auto verdict = nlohmann::json::parse(slurp((dir / "verdict.json").string()));
  CHECK(!verdict["accept"].get<bool>());
  CHECK(verdict["class"].get<std::string>() == "LocalExplainable");
}

TEST_CASE("identical scenario and seed produce byte-identical outputs") {
  const auto dir_a = fresh_dir("determinism_a");
  const auto dir_b = fresh_dir("determinism_b");
  const auto dir_c = fresh_dir("determinism_c");
  const std::string base =
      "simulate --scenario " + kScenarioDir + "/honest_rest.scn --out ";
  CHECK(run(base + dir_a.string()).exit_code == 0);
  CHECK(run(base + dir_b.string()).exit_code == 0);
  CHECK(run(base + dir_c.string() + " --threads 4").exit_code == 0);
  const std::string csv_a = slurp((dir_a / "transcript.csv").string());
  CHECK(csv_a == slurp((dir_b / "transcript.csv").string()));
  CHECK(csv_a == slurp((dir_c / "transcript.csv").string()));
  const std::string json_a = slurp((dir_a / "verdict.json").string());
  CHECK(json_a == slurp((dir_b / "verdict.json").string()));
  CHECK(json_a == slurp((dir_c / "verdict.json").string()));
}

TEST_CASE("seed override changes the transcript") {
  const auto dir_a = fresh_dir("seed_a");
  const auto dir_b = fresh_dir("seed_b");
  const std::string base =
      "simulate --scenario " + kScenarioDir + "/honest_rest.scn --out ";
  CHECK(run(base + dir_a.string()).exit_code == 0);
  CHECK(run(base + dir_b.string() + " --seed 77777").exit_code == 0);
  CHECK(slurp((dir_a / "transcript.csv").string()) !=
        slurp((dir_b / "transcript.csv").string()));
}

TEST_CASE("verify reproduces the simulate verdict from the stored transcript") {
  const auto dir = fresh_dir("verify_roundtrip");
  const auto verify_dir = fresh_dir("verify_roundtrip_out");
  CHECK(run("simulate --scenario " + kScenarioDir + "/honest_rest.scn --out " +
            dir.string())
            .exit_code == 0);
  const RunResult verify =
      run("verify --scenario " + kScenarioDir + "/honest_rest.scn --transcript " +
          (dir / "transcript.csv").string() + " --out " + verify_dir.string());
  CHECK(verify.exit_code == 0);
  const auto original = nlohmann::json::parse(slurp((dir / "verdict.json").string()));
  const auto recheck =
      nlohmann::json::parse(slurp((verify_dir / "verdict.json").string()));
  CHECK(recheck["accept"] == original["accept"]);
  CHECK(recheck["class"] == original["class"]);
  CHECK(recheck["bell"]["value"] == original["bell"]["value"]);
  // Timestamps pass through 12-significant-digit CSV, so compare loosely.
  CHECK(std::abs(recheck["clock_offset"].get<double>() -
                 original["clock_offset"].get<double>()) < 1e-9);
}

TEST_CASE("attack-demo on the memory-equipped delay flags the assumption") {
  const auto dir = fresh_dir("attack_demo_memory");
  const RunResult result = run("attack-demo --scenario " + kScenarioDir +
                               "/delay_with_memory.scn --out " + dir.string());
  CHECK(result.exit_code == 0);  // accepted: that is the point of the demo
  const auto demo = nlohmann::json::parse(slurp((dir / "demo.json").string()));
  CHECK(demo["assumption1_violated"].get<bool>());
  CHECK(demo["classical_baseline"]["distance_error"].get<double>() ==
        doctest::Approx(299.792458).epsilon(1e-9));
  CHECK(std::abs(std::abs(demo["separation_error"].get<double>()) - 299.792458) < 1.0);
}

TEST_CASE("attack-demo on the memoryless delay rejects") {
  const auto dir = fresh_dir("attack_demo_nomem");
  const RunResult result = run("attack-demo --scenario " + kScenarioDir +
                               "/delay_no_memory.scn --out " + dir.string());
  CHECK(result.exit_code == 10);
  const auto demo = nlohmann::json::parse(slurp((dir / "demo.json").string()));
  CHECK(!demo["assumption1_violated"].get<bool>());
}

TEST_CASE("attack-demo refuses scenarios without an attack") {
  const auto dir = fresh_dir("attack_demo_honest");
  const RunResult result = run("attack-demo --scenario " + kScenarioDir +
                               "/honest_rest.scn --out " + dir.string());
  CHECK(result.exit_code == 1);
}

TEST_CASE("kinematics prints both conventions and the ratio") {
  const auto dir = fresh_dir("kinematics_out");
  const RunResult result =
      run("kinematics --v-over-c 0.5,0.8 --delta 1.0 --out " + dir.string());
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.find("eq8_as_printed") != std::string::npos);
  CHECK(result.stdout_text.find("first_principles") != std::string::npos);
  CHECK(result.stdout_text.find("2.309401077") != std::string::npos);
  CHECK(result.stdout_text.find("1.732050808") != std::string::npos);
  const std::string csv = slurp((dir / "kinematics.csv").string());
  CHECK(csv.rfind("v_over_c,coordinate_interval,eq8_as_printed,first_principles,ratio",
                  0) == 0);
}

TEST_CASE("config errors exit 1 with a named field") {
  const auto dir = fresh_dir("config_error");
  const auto bad = dir / "bad.scn";
  std::ofstream(bad.string())
      << "seed = 1\nn_rounds = 400\nscenario_id = bad\n"
      << "[kinematics]\nz_receiver = -1\nz_satellite = 1\nemission_period = 1\nc = 1\n"
      << "v = 1.5\nphase = moving\n";
  const RunResult result =
      run("simulate --scenario " + bad.string() + " --out " + dir.string());
  CHECK(result.exit_code == 1);
  CHECK(result.stdout_text.find("kinematics.v") != std::string::npos);
}

TEST_CASE("unwritable output directory exits 1") {
  const RunResult result = run("simulate --scenario " + kScenarioDir +
                               "/honest_rest.scn --out /proc/diqgps_forbidden");
  CHECK(result.exit_code == 1);
}

TEST_CASE("missing subcommand or unknown flag exits 1") {
  CHECK(run("").exit_code == 1);
  CHECK(run("simulate --no-such-flag").exit_code == 1);
}
