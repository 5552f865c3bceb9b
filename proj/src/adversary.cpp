#include "diqgps/adversary.hpp"

#include "diqgps/codec.hpp"
#include "diqgps/rng.hpp"

namespace diqgps {

namespace {

// Distinct round indices in [3, n_rounds], drawn from the attacker's own
// stream, ascending.
std::vector<std::int64_t> pick_positions(std::int64_t n_rounds, std::size_t count,
                                         std::uint64_t eve_seed) {
  if (n_rounds - 2 < static_cast<std::int64_t>(count))
    throw capacity_error("forged timestamps do not fit in the transcript");
  CounterRng rng(eve_seed, StreamTag::EveSelect);
  return sample_without_replacement(3, n_rounds, count, rng);
}

}  // namespace

SessionTranscript forge_reveal(const SessionTranscript& transcript,
                               const std::vector<double>& forged_times,
                               const ForgeOptions& options) {
  if (!transcript.revealed_carriers)
    throw data_error("forge_reveal requires a completed reveal phase");
  if (forged_times.empty()) return transcript;

  SessionTranscript forged = transcript;
  const TimestampCodec& true_codec = *transcript.revealed_carriers;

  if (options.positions_leaked) {
    const InputOverlay overlay = encode_timestamps(forged_times, true_codec);
    for (RoundRecord& round : forged.rounds) {
      const auto it = overlay.find(round.index);
      if (it != overlay.end()) round.y = it->second;
    }
    return forged;
  }

  // Without the positions, the attacker lays her encoding over rounds of her
  // own choosing and fills the remainder with her own uniform bits.
  TimestampCodec eve_codec;
  eve_codec.width_bits = true_codec.width_bits;
  eve_codec.delta_t = true_codec.delta_t;
  const std::size_t needed =
      2 * static_cast<std::size_t>(true_codec.width_bits) * forged_times.size();
  eve_codec.carrier_indices = pick_positions(
      static_cast<std::int64_t>(forged.rounds.size()), needed, options.eve_seed);
  const InputOverlay overlay = encode_timestamps(forged_times, eve_codec);

  for (RoundRecord& round : forged.rounds) {
    const auto it = overlay.find(round.index);
    if (it != overlay.end()) {
      round.y = it->second;
    } else if (options.rewrite_all) {
      round.y = CounterRng(options.eve_seed, StreamTag::EveInput,
                           static_cast<std::uint64_t>(round.index))
                    .next_bit();
    }
  }
  return forged;
}

}  // namespace diqgps
