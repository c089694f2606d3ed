#include "tmech/chain.hpp"

#include <algorithm>
#include <string>

namespace tmech {

bool MinerPolicy::censors(AgentId const &sender, Height new_height) const
{
  return mode == Mode::Censor && new_height <= censor_until && censor_targets.count(sender) != 0;
}

PayloadTooLarge::PayloadTooLarge(AgentId sender, std::size_t size, std::size_t limit)
  : ValidationError{"payload from agent '" + sender + "' is " + std::to_string(size) +
                    " bytes, limit is " + std::to_string(limit)}
  , sender_{std::move(sender)}
{}

std::size_t ChainState::included_count() const noexcept
{
  std::size_t n = 0;
  for (auto const &block : blocks_)
  {
    n += block.size();
  }
  return n;
}

ChainState submit(ChainState state, Message msg)
{
  if (msg.payload.size() > state.max_payload_)
  {
    throw PayloadTooLarge{msg.sender, msg.payload.size(), state.max_payload_};
  }
  msg.submitted_at = state.height();
  state.mempool_.push_back(std::move(msg));
  return state;
}

ChainState advance_block(ChainState state, MinerPolicy const &policy)
{
  Height const new_height = state.height() + 1;

  Block                block;
  std::vector<Message> pending;
  for (auto &msg : state.mempool_)
  {
    if (policy.censors(msg.sender, new_height))
    {
      pending.push_back(std::move(msg));
    }
    else
    {
      block.push_back(std::move(msg));
    }
  }
  state.blocks_.push_back(std::move(block));
  state.mempool_ = std::move(pending);
  return state;
}

std::vector<Message> messages_through(ChainState const &state, Height deadline)
{
  if (deadline > state.height())
  {
    throw std::out_of_range{"deadline " + std::to_string(deadline) + " is beyond chain height " +
                            std::to_string(state.height())};
  }
  std::vector<Message> out;
  for (Height h = 0; h < deadline; ++h)
  {
    auto const &block = state.blocks()[h];
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

namespace {

void append_string(Bytes &out, std::string const &s)
{
  append_u64_be(out, s.size());
  out.insert(out.end(), s.begin(), s.end());
}

void append_message(Bytes &out, Message const &m)
{
  append_string(out, m.sender);
  append_string(out, m.contract_id);
  out.push_back(static_cast<std::uint8_t>(m.kind));
  append_u64_be(out, m.payload.size());
  out.insert(out.end(), m.payload.begin(), m.payload.end());
  append_u64_be(out, m.submitted_at);
}

}  // namespace

Bytes encode(ChainState const &state)
{
  Bytes out;
  append_u64_be(out, state.max_payload());
  append_u64_be(out, state.height());
  for (auto const &block : state.blocks())
  {
    append_u64_be(out, block.size());
    for (auto const &m : block)
    {
      append_message(out, m);
    }
  }
  append_u64_be(out, state.mempool().size());
  for (auto const &m : state.mempool())
  {
    append_message(out, m);
  }
  return out;
}

}  // namespace tmech
