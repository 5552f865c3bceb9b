#include "diqgps/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "diqgps/types.hpp"

namespace diqgps {

namespace {

std::string format_time(double t) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", t);
  return buffer;
}

double parse_csv_double(const std::string& token, int line) {
  try {
    std::size_t consumed = 0;
    const double value = std::stod(token, &consumed);
    if (consumed != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw data_error("transcript line " + std::to_string(line) +
                     ": invalid number '" + token + "'");
  }
}

std::int64_t parse_csv_int(const std::string& token, int line) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw data_error("transcript line " + std::to_string(line) + ": invalid integer '" +
                     token + "'");
  return value;
}

}  // namespace

std::string transcript_to_csv(const SessionTranscript& transcript) {
  std::string out = kTranscriptHeader;
  out += "\n";
  for (const RoundRecord& round : transcript.rounds) {
    out += std::to_string(round.index);
    out += ",";
    out += std::to_string(round.x);
    out += ",";
    out += std::to_string(round.y);
    out += ",";
    out += std::to_string(round.r);
    out += ",";
    out += std::to_string(round.s);
    out += ",";
    out += format_time(round.t_emit);
    out += ",";
    out += format_time(round.t_detect_R);
    out += ",";
    out += format_time(round.t_detect_S);
    out += ",";
    out += round.carrier ? "1" : "0";
    out += "\n";
  }
  return out;
}

SessionTranscript transcript_from_csv(const std::string& text) {
  std::stringstream stream(text);
  std::string line;
  if (!std::getline(stream, line)) throw data_error("transcript is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTranscriptHeader)
    throw data_error("transcript header mismatch: got '" + line + "'");

  SessionTranscript transcript;
  int line_number = 1;
  while (std::getline(stream, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string, 9> fields;
    std::size_t field = 0;
    std::string token;
    std::stringstream row(line);
    while (std::getline(row, token, ',')) {
      if (field >= fields.size())
        throw data_error("transcript line " + std::to_string(line_number) +
                         ": too many columns");
      fields[field++] = token;
    }
    if (field != fields.size())
      throw data_error("transcript line " + std::to_string(line_number) +
                       ": expected 9 columns, got " + std::to_string(field));
    RoundRecord round;
    round.index = parse_csv_int(fields[0], line_number);
    round.x = static_cast<int>(parse_csv_int(fields[1], line_number));
    round.y = static_cast<int>(parse_csv_int(fields[2], line_number));
    round.r = static_cast<int>(parse_csv_int(fields[3], line_number));
    round.s = static_cast<int>(parse_csv_int(fields[4], line_number));
    round.t_emit = parse_csv_double(fields[5], line_number);
    round.t_detect_R = parse_csv_double(fields[6], line_number);
    round.t_detect_S = parse_csv_double(fields[7], line_number);
    const std::int64_t carrier = parse_csv_int(fields[8], line_number);
    if (carrier != 0 && carrier != 1)
      throw data_error("transcript line " + std::to_string(line_number) +
                       ": carrier flag must be 0 or 1");
    round.carrier = carrier == 1;
    transcript.rounds.push_back(round);
  }
  return transcript;
}

void attach_revealed_codec(SessionTranscript& transcript, int width_bits,
                           double delta_t) {
  TimestampCodec codec;
  codec.width_bits = width_bits;
  codec.delta_t = delta_t;
  for (const RoundRecord& round : transcript.rounds)
    if (round.carrier) codec.carrier_indices.push_back(round.index);
  std::sort(codec.carrier_indices.begin(), codec.carrier_indices.end());
  transcript.revealed_carriers = std::move(codec);
}

nlohmann::ordered_json verdict_to_json(const VerdictReport& report) {
  nlohmann::ordered_json json;
  json["bell"] = {{"value", report.bell.value},
                  {"stderr", report.bell.stderr_},
                  {"n_rounds_used", report.bell.n_rounds_used}};
  json["class"] = to_string(report.bell_class);
  if (report.decoded_t_S)
    json["decoded_t_S"] = {(*report.decoded_t_S)[0], (*report.decoded_t_S)[1]};
  else
    json["decoded_t_S"] = nullptr;
  json["decoded_t_S0"] =
      report.decoded_t_S0 ? nlohmann::ordered_json(*report.decoded_t_S0) : nullptr;
  json["clock_offset"] =
      report.clock_offset ? nlohmann::ordered_json(*report.clock_offset) : nullptr;
  json["separation"] =
      report.separation ? nlohmann::ordered_json(*report.separation) : nullptr;
  json["dilation_expected"] = report.dilation_expected
                                  ? nlohmann::ordered_json(*report.dilation_expected)
                                  : nullptr;
  json["dilation_observed"] = report.dilation_observed
                                  ? nlohmann::ordered_json(*report.dilation_observed)
                                  : nullptr;
  json["dilation_formula_used"] = to_string(report.dilation_formula_used);
  json["accept"] = report.accept;
  json["status"] = to_string(report.status);
  json["reason"] = report.reason;
  return json;
}

std::string verdict_summary_text(const VerdictReport& report,
                                 const std::string& scenario_id) {
  std::ostringstream out;
  out << "scenario:        " << scenario_id << "\n";
  out << "status:          " << to_string(report.status) << "\n";
  out << "bell value:      " << report.bell.value << " +- " << report.bell.stderr_
      << " (" << report.bell.n_rounds_used << " rounds)\n";
  out << "classification:  " << to_string(report.bell_class) << "\n";
  if (report.decoded_t_S)
    out << "decoded t_S:     " << format_time((*report.decoded_t_S)[0]) << " s, "
        << format_time((*report.decoded_t_S)[1]) << " s\n";
  if (report.decoded_t_S0)
    out << "decoded t_S0:    " << format_time(*report.decoded_t_S0) << " s\n";
  if (report.clock_offset)
    out << "clock offset:    " << format_time(*report.clock_offset) << " s\n";
  if (report.separation)
    out << "separation:      " << format_time(*report.separation) << " m\n";
  if (report.dilation_expected && report.dilation_observed) {
    out << "dilation:        observed " << format_time(*report.dilation_observed)
        << " s vs expected " << format_time(*report.dilation_expected) << " s ("
        << to_string(report.dilation_formula_used) << ")\n";
  }
  if (!report.reason.empty()) out << "reason:          " << report.reason << "\n";
  return out.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  const std::string temp = path + ".tmp";
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw error("cannot open for writing: " + temp);
    file << content;
    if (!file) throw error("write failed: " + temp);
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp);
    throw error("cannot rename " + temp + " to " + path + ": " + ec.message());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw error("cannot open: " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

}  // namespace diqgps
