// Manchester timestamp codec: each timestamp is quantized to width_bits bits
// (most-significant first) and every bit is written into two carrier rounds
// as an anti-correlated input pair, bit 0 -> inputs (0,1), bit 1 -> (1,0).
// Carrier inputs therefore stay marginally balanced, and any equal pair in a
// revealed transcript is direct tamper evidence.

#ifndef DIQGPS_CODEC_HPP
#define DIQGPS_CODEC_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "diqgps/transcript.hpp"

namespace diqgps {

// Forced satellite input bits, keyed by round index.
using InputOverlay = std::unordered_map<std::int64_t, int>;

// Nearest-integer quantization t -> round(t / delta_t). Throws capacity_error
// when the result does not fit in width_bits bits.
std::int64_t quantize_timestamp(double t, const TimestampCodec& codec);

// Lays the timestamps out over codec.carrier_indices in order, two rounds per
// bit. The codec must provide exactly 2 * width_bits * times.size() distinct
// indices, each >= 3.
InputOverlay encode_timestamps(const std::vector<double>& times,
                               const TimestampCodec& codec);

// Inverse of encode_timestamps, reading the satellite inputs recorded in the
// transcript at the revealed carrier positions. Returns quantized times
// T * delta_t. Equal pairs raise tamper_error; absent rounds raise data_error.
std::vector<double> decode_timestamps(const SessionTranscript& transcript,
                                      const TimestampCodec& codec);

}  // namespace diqgps

#endif  // DIQGPS_CODEC_HPP
