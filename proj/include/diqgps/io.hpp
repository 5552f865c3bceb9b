// Transcript CSV and verdict JSON serialization. Column order and key set are
// stable; times carry 12 significant digits; JSON floats round-trip exactly.

#ifndef DIQGPS_IO_HPP
#define DIQGPS_IO_HPP

#include <string>

#include <json.hpp>

#include "diqgps/protocol.hpp"
#include "diqgps/transcript.hpp"

namespace diqgps {

inline constexpr const char* kTranscriptHeader =
    "index,x,y,r,s,t_emit,t_detect_R,t_detect_S,carrier";

std::string transcript_to_csv(const SessionTranscript& transcript);

// Rounds and carrier flags only; phase tag, scenario id and codec parameters
// live in the scenario file. Header must match kTranscriptHeader exactly.
SessionTranscript transcript_from_csv(const std::string& text);

// Rebuilds the reveal-phase disclosure from the carrier flags (ascending
// index order, which is how sessions lay carriers out).
void attach_revealed_codec(SessionTranscript& transcript, int width_bits,
                           double delta_t);

nlohmann::ordered_json verdict_to_json(const VerdictReport& report);

std::string verdict_summary_text(const VerdictReport& report,
                                 const std::string& scenario_id);

// Write-then-rename; the target never holds a partial file.
void write_text_file_atomic(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace diqgps

#endif  // DIQGPS_IO_HPP
