#include "tmech/beacon.hpp"

#include "tmech/commitment.hpp"

#include <limits>
#include <numeric>

namespace tmech {

BeaconOutput aggregate(std::map<AgentId, BeaconContribution> const &contributions)
{
  BeaconOutput out;
  for (auto const &[agent, contribution] : contributions)
  {
    out.value += contribution.value;  // unsigned wrap-around is the mod 2^64 sum
    out.contributors.push_back(agent);
  }
  return out;
}

HashStream::HashStream(std::uint64_t seed, std::uint64_t domain)
  : seed_{seed}
  , domain_{domain}
{}

void HashStream::refill()
{
  Bytes input;
  append_u64_be(input, seed_);
  append_u64_be(input, block_index_++);
  if (domain_ != 0)
  {
    append_u64_be(input, domain_);
  }
  Digest const block = sha256(input);
  for (std::size_t k = 0; k < 4; ++k)
  {
    words_[k] = read_u64_be(block.data() + 8 * k);
  }
  next_word_ = 0;
}

std::uint64_t HashStream::next_u64()
{
  if (next_word_ == words_.size())
  {
    refill();
  }
  return words_[next_word_++];
}

std::uint64_t HashStream::uniform_below(std::uint64_t bound)
{
  if (bound == 0)
  {
    throw std::invalid_argument{"uniform_below requires a positive bound"};
  }
  // Largest multiple of bound representable in 2^64: accept x < limit.
  std::uint64_t const excess = (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
  for (;;)
  {
    std::uint64_t const x = next_u64();
    if (excess == 0 || x < std::numeric_limits<std::uint64_t>::max() - excess + 1)
    {
      return x % bound;
    }
  }
}

void HashStream::fill(std::span<std::uint8_t> out)
{
  std::size_t pos = 0;
  while (pos < out.size())
  {
    std::uint64_t const w = next_u64();
    for (int shift = 56; shift >= 0 && pos < out.size(); shift -= 8)
    {
      out[pos++] = static_cast<std::uint8_t>(w >> shift);
    }
  }
}

std::vector<std::size_t> derive_permutation(BeaconOutput const &output, std::size_t n,
                                            std::uint64_t domain)
{
  if (n == 0)
  {
    throw std::domain_error{"cannot derive a permutation of an empty domain"};
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  HashStream stream{output.value, domain};
  for (std::size_t i = n - 1; i > 0; --i)
  {
    auto const j = static_cast<std::size_t>(stream.uniform_below(i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

Bytes encode_contribution(BeaconContribution c)
{
  Bytes out;
  append_u64_be(out, c.value);
  return out;
}

BeaconContribution decode_contribution(std::span<std::uint8_t const> bytes)
{
  if (bytes.size() != 8)
  {
    throw ValidationError{"beacon contribution must be exactly 8 bytes"};
  }
  return {read_u64_be(bytes.data())};
}

}  // namespace tmech
