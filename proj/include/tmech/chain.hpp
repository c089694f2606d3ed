#pragma once

#include "tmech/types.hpp"

#include <cstddef>
#include <set>
#include <vector>

namespace tmech {

enum class MessageKind : std::uint8_t
{
  Commit,
  Reveal
};

struct Message
{
  AgentId     sender;
  ContractId  contract_id;
  MessageKind kind = MessageKind::Commit;
  Bytes       payload;
  Height      submitted_at = 0;  // stamped by submit(), never by the sender

  bool operator==(Message const &) const = default;
};

using Block = std::vector<Message>;

struct MinerPolicy
{
  enum class Mode : std::uint8_t
  {
    Honest,
    Censor
  };

  Mode              mode = Mode::Honest;
  std::set<AgentId> censor_targets;
  Height            censor_until = 0;

  static MinerPolicy honest() { return {}; }
  static MinerPolicy censor(std::set<AgentId> targets, Height until)
  {
    return {Mode::Censor, std::move(targets), until};
  }

  // True if a message from `sender` is held back from the block at `new_height`.
  bool censors(AgentId const &sender, Height new_height) const;

  bool operator==(MinerPolicy const &) const = default;
};

class PayloadTooLarge : public ValidationError
{
public:
  PayloadTooLarge(AgentId sender, std::size_t size, std::size_t limit);

  AgentId const &sender() const noexcept { return sender_; }

private:
  AgentId sender_;
};

inline constexpr std::size_t kDefaultMaxPayload = 1024;

// Discrete-block ledger. blocks()[i] holds the messages included at height i + 1.
class ChainState
{
public:
  explicit ChainState(std::size_t max_payload = kDefaultMaxPayload)
    : max_payload_{max_payload}
  {}

  Height                    height() const noexcept { return blocks_.size(); }
  std::vector<Block> const &blocks() const noexcept { return blocks_; }
  std::vector<Message> const &mempool() const noexcept { return mempool_; }
  std::size_t               max_payload() const noexcept { return max_payload_; }

  std::size_t included_count() const noexcept;

  bool operator==(ChainState const &) const = default;

  friend ChainState submit(ChainState state, Message msg);
  friend ChainState advance_block(ChainState state, MinerPolicy const &policy);

private:
  std::size_t          max_payload_;
  std::vector<Block>   blocks_;
  std::vector<Message> mempool_;
};

// Appends msg to the mempool stamped with the current height.
[[nodiscard]] ChainState submit(ChainState state, Message msg);

// Mines one block: every mempool message the policy does not censor, in submission order.
[[nodiscard]] ChainState advance_block(ChainState state, MinerPolicy const &policy);

// All messages included in blocks 1..deadline, in inclusion order.
std::vector<Message> messages_through(ChainState const &state, Height deadline);

// Canonical byte encoding of the full ledger, for byte-for-byte comparisons.
Bytes encode(ChainState const &state);

}  // namespace tmech
