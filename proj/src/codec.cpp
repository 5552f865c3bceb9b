#include "diqgps/codec.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

#include "diqgps/types.hpp"

namespace diqgps {

namespace {

void validate_codec(const TimestampCodec& codec, std::size_t n_times) {
  if (codec.width_bits <= 0 || codec.width_bits > 62)
    throw structural_error("codec width must be in [1, 62] bits");
  if (codec.delta_t <= 0) throw structural_error("codec resolution must be positive");
  const std::size_t needed = 2 * static_cast<std::size_t>(codec.width_bits) * n_times;
  if (codec.carrier_indices.size() != needed)
    throw structural_error("codec provides " + std::to_string(codec.carrier_indices.size()) +
                           " carrier rounds, need " + std::to_string(needed));
  std::unordered_set<std::int64_t> seen;
  for (const std::int64_t index : codec.carrier_indices) {
    if (index < 3)
      throw structural_error("carrier round " + std::to_string(index) +
                             " precedes the first two timestamp rounds");
    if (!seen.insert(index).second)
      throw structural_error("carrier round " + std::to_string(index) + " used twice");
  }
}

}  // namespace

std::int64_t quantize_timestamp(double t, const TimestampCodec& codec) {
  const auto quantized = static_cast<std::int64_t>(std::llround(t / codec.delta_t));
  const std::int64_t limit = std::int64_t(1) << codec.width_bits;
  if (quantized < 0 || quantized >= limit)
    throw capacity_error("timestamp " + std::to_string(t) + " s does not fit in " +
                         std::to_string(codec.width_bits) + " bits at resolution " +
                         std::to_string(codec.delta_t) + " s");
  return quantized;
}

InputOverlay encode_timestamps(const std::vector<double>& times,
                               const TimestampCodec& codec) {
  validate_codec(codec, times.size());
  InputOverlay overlay;
  std::size_t cursor = 0;
  for (const double t : times) {
    const std::int64_t quantized = quantize_timestamp(t, codec);
    for (int bit_pos = codec.width_bits - 1; bit_pos >= 0; --bit_pos) {
      const int bit = static_cast<int>((quantized >> bit_pos) & 1);
      overlay[codec.carrier_indices[cursor]] = bit;
      overlay[codec.carrier_indices[cursor + 1]] = 1 - bit;
      cursor += 2;
    }
  }
  return overlay;
}

std::vector<double> decode_timestamps(const SessionTranscript& transcript,
                                      const TimestampCodec& codec) {
  if (codec.carrier_indices.size() % (2 * static_cast<std::size_t>(codec.width_bits)) != 0)
    throw structural_error("carrier count is not a whole number of timestamps");
  const std::size_t n_times =
      codec.carrier_indices.size() / (2 * static_cast<std::size_t>(codec.width_bits));
  validate_codec(codec, n_times);

  std::unordered_map<std::int64_t, int> recorded_input;
  recorded_input.reserve(codec.carrier_indices.size());
  for (const RoundRecord& round : transcript.rounds)
    recorded_input.emplace(round.index, round.y);

  std::vector<double> times;
  times.reserve(n_times);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < n_times; ++i) {
    std::int64_t quantized = 0;
    for (int bit_pos = 0; bit_pos < codec.width_bits; ++bit_pos) {
      const std::int64_t first = codec.carrier_indices[cursor];
      const std::int64_t second = codec.carrier_indices[cursor + 1];
      cursor += 2;
      const auto a = recorded_input.find(first);
      const auto b = recorded_input.find(second);
      if (a == recorded_input.end() || b == recorded_input.end())
        throw data_error("transcript is missing carrier round " +
                         std::to_string(a == recorded_input.end() ? first : second));
      if (a->second == b->second)
        throw tamper_error("carrier pair (" + std::to_string(first) + "," +
                           std::to_string(second) + ") is not anti-correlated");
      quantized = (quantized << 1) | (a->second == 1 ? 1 : 0);
    }
    times.push_back(static_cast<double>(quantized) * codec.delta_t);
  }
  return times;
}

}  // namespace diqgps
