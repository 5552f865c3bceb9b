// Session transcript records: one row per protocol round, plus the
// reveal-phase disclosure of which rounds carried timestamp bits.

#ifndef DIQGPS_TRANSCRIPT_HPP
#define DIQGPS_TRANSCRIPT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace diqgps {

// One protocol round. Round indices are 1-based; the first two rounds supply
// the detection timestamps, so carriers can only sit at index >= 3.
// t_detect_R and t_detect_S are readings on the respective party's own clock.
struct RoundRecord {
  std::int64_t index = 0;
  int x = 0;
  int y = 0;
  int r = 0;
  int s = 0;
  double t_emit = 0.0;
  double t_detect_R = 0.0;
  double t_detect_S = 0.0;
  bool carrier = false;
};

// Manchester timestamp codec parameters. Each timestamp is quantized to
// width_bits bits with resolution delta_t and occupies 2 * width_bits carrier
// rounds (one anti-correlated input pair per bit). carrier_indices is ordered;
// consecutive entries form the pairs.
struct TimestampCodec {
  int width_bits = 32;
  double delta_t = 1e-9;
  std::vector<std::int64_t> carrier_indices;
};

enum class PhaseTag { Rest, Moving };

struct SessionTranscript {
  std::vector<RoundRecord> rounds;
  // Present only once the reveal phase has completed.
  std::optional<TimestampCodec> revealed_carriers;
  PhaseTag phase_tag = PhaseTag::Rest;
  std::string scenario_id;
};

}  // namespace diqgps

#endif  // DIQGPS_TRANSCRIPT_HPP
