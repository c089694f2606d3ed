#pragma once

#include "tmech/types.hpp"

#include <array>
#include <map>
#include <span>

namespace tmech {

struct BeaconContribution
{
  std::uint64_t value = 0;

  bool operator==(BeaconContribution const &) const = default;
};

struct BeaconOutput
{
  std::uint64_t        value = 0;
  std::vector<AgentId> contributors;  // ascending agent identifier

  bool degenerate() const noexcept { return contributors.empty(); }

  bool operator==(BeaconOutput const &) const = default;
};

// Sum of all contributions modulo 2^64.
BeaconOutput aggregate(std::map<AgentId, BeaconContribution> const &contributions);

// Deterministic word stream: block j = SHA-256(seed as 8 BE bytes | j as 8 BE bytes),
// with the domain appended as 8 BE bytes when it is non-zero. Each block yields four
// big-endian 64-bit words.
class HashStream
{
public:
  explicit HashStream(std::uint64_t seed, std::uint64_t domain = 0);

  std::uint64_t next_u64();

  // Uniform draw from [0, bound) by rejection sampling; bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  void fill(std::span<std::uint8_t> out);

private:
  void refill();

  std::uint64_t                seed_;
  std::uint64_t                domain_;
  std::uint64_t                block_index_ = 0;
  std::array<std::uint64_t, 4> words_{};
  std::size_t                  next_word_ = 4;
};

// Fisher-Yates shuffle of 0..n-1 driven by HashStream(output.value, domain):
// for i = n-1 down to 1, swap positions i and uniform_below(i + 1).
std::vector<std::size_t> derive_permutation(BeaconOutput const &output, std::size_t n,
                                            std::uint64_t domain = 0);

Bytes              encode_contribution(BeaconContribution c);
BeaconContribution decode_contribution(std::span<std::uint8_t const> bytes);

}  // namespace tmech
