// Philox4x32-10 counter-based generator (Salmon et al., Random123).
//
// A draw is a pure function of (key, counter), so every
// (experiment seed, replica, cell) triple names its own random numbers no
// matter how replicas are scheduled.

#ifndef RFJ_RNG_HPP
#define RFJ_RNG_HPP

#include <array>
#include <cstdint>

namespace rfj {

using Philox4x32 = std::array<std::uint32_t, 4>;

constexpr Philox4x32 philox4x32_10(Philox4x32 counter, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * counter[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * counter[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return counter;
}

/// Identifies one independent stream: the experiment seed plus a replica index.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Two uniforms in the open interval (0, 1) for draw `index` of a stream.
struct UniformPair {
  double first;
  double second;
};

constexpr double open_unit(std::uint64_t bits) {
  // 52 random bits, centred in their cell so 0 and 1 are never produced.
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

constexpr UniformPair uniform_pair(const StreamKey& stream, std::uint64_t index) {
  const Philox4x32 out = philox4x32_10(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
       static_cast<std::uint32_t>(stream.replica), static_cast<std::uint32_t>(stream.replica >> 32)},
      {static_cast<std::uint32_t>(stream.seed), static_cast<std::uint32_t>(stream.seed >> 32)});
  const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
  return {open_unit(a), open_unit(b)};
}

}  // namespace rfj

#endif  // RFJ_RNG_HPP
