#include "tmech/auctions.hpp"

#include <algorithm>

namespace tmech {

SlotCTRs::SlotCTRs(std::vector<Rational> rates)
  : rates_{std::move(rates)}
{
  if (rates_.empty())
  {
    throw ValidationError{"at least one click-through rate is required"};
  }
  for (std::size_t i = 0; i < rates_.size(); ++i)
  {
    if (rates_[i] <= Rational{0} || rates_[i] > Rational{1})
    {
      throw ValidationError{"click-through rate " + to_string(rates_[i]) + " is outside (0, 1]"};
    }
    if (i > 0 && !(rates_[i - 1] > rates_[i]))
    {
      throw ValidationError{"click-through rates must be strictly decreasing"};
    }
  }
}

TieBreak TieBreak::from_order(std::vector<AgentId> order)
{
  TieBreak t;
  t.order_ = std::move(order);
  return t;
}

TieBreak TieBreak::from_permutation(std::vector<AgentId> participants,
                                    std::span<std::size_t const> perm)
{
  if (perm.size() != participants.size())
  {
    throw std::invalid_argument{"permutation size does not match participant count"};
  }
  std::sort(participants.begin(), participants.end());
  std::vector<AgentId> order;
  order.reserve(perm.size());
  for (auto idx : perm)
  {
    order.push_back(participants.at(idx));
  }
  return from_order(std::move(order));
}

bool TieBreak::before(AgentId const &a, AgentId const &b) const
{
  auto const pa = std::find(order_.begin(), order_.end(), a);
  auto const pb = std::find(order_.begin(), order_.end(), b);
  if (pa != pb)
  {
    return pa < pb;
  }
  return a < b;
}

std::optional<std::size_t> AuctionOutcome::slot_of(AgentId const &agent) const
{
  auto const it = std::find(allocation.begin(), allocation.end(), agent);
  if (it == allocation.end())
  {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - allocation.begin());
}

std::vector<Bid> rank_bids(std::span<Bid const> bids, TieBreak const &tie_break)
{
  std::vector<Bid> ranked(bids.begin(), bids.end());
  std::sort(ranked.begin(), ranked.end(), [&](Bid const &x, Bid const &y) {
    if (x.amount != y.amount)
    {
      return x.amount > y.amount;
    }
    return tie_break.before(x.agent, y.agent);
  });
  for (std::size_t i = 1; i < ranked.size(); ++i)
  {
    if (ranked[i].agent == ranked[i - 1].agent)
    {
      throw ValidationError{"agent '" + ranked[i].agent + "' submitted more than one bid"};
    }
  }
  return ranked;
}

AuctionOutcome first_price(std::span<Bid const> bids, TieBreak const &tie_break)
{
  if (bids.empty())
  {
    throw NoParticipants{};
  }
  auto const ranked = rank_bids(bids, tie_break);

  AuctionOutcome out;
  out.allocation.push_back(ranked.front().agent);
  out.payments[ranked.front().agent] = ranked.front().amount;
  return out;
}

AuctionOutcome second_price(std::span<Bid const> bids, TieBreak const &tie_break)
{
  if (bids.empty())
  {
    throw NoParticipants{};
  }
  auto const ranked = rank_bids(bids, tie_break);

  AuctionOutcome out;
  out.allocation.push_back(ranked.front().agent);
  out.payments[ranked.front().agent] = ranked.size() > 1 ? ranked[1].amount : Money{0};
  return out;
}

AuctionOutcome gsp(std::span<Bid const> bids, SlotCTRs const &ctrs, TieBreak const &tie_break)
{
  std::size_t const k = ctrs.size();
  if (k == 0 || bids.size() <= k)
  {
    throw ValidationError{"GSP needs more bidders than slots (n = " + std::to_string(bids.size()) +
                          ", k = " + std::to_string(k) + ")"};
  }
  auto const ranked = rank_bids(bids, tie_break);

  AuctionOutcome out;
  out.basis = PaymentBasis::PerClick;
  for (std::size_t slot = 0; slot < k; ++slot)
  {
    out.allocation.push_back(ranked[slot].agent);
    out.payments[ranked[slot].agent] = ranked[slot + 1].amount;
  }
  return out;
}

Rational gsp_utility(Money valuation_per_click, std::optional<std::size_t> slot,
                     AuctionOutcome const &outcome, SlotCTRs const &ctrs)
{
  if (!slot || *slot >= outcome.allocation.size())
  {
    return 0;
  }
  auto const &agent = outcome.allocation[*slot];
  Money const price = outcome.payments.at(agent);
  auto const  margin =
      static_cast<std::int64_t>(valuation_per_click.ticks) - static_cast<std::int64_t>(price.ticks);
  return ctrs[*slot] * margin;
}

Rational gsp_revenue(AuctionOutcome const &outcome, SlotCTRs const &ctrs)
{
  Rational total = 0;
  for (std::size_t slot = 0; slot < outcome.allocation.size(); ++slot)
  {
    total += ctrs[slot] * static_cast<std::int64_t>(outcome.payments.at(outcome.allocation[slot]).ticks);
  }
  return total;
}

Bytes encode_bid(Money amount)
{
  Bytes out;
  append_u64_be(out, amount.ticks);
  return out;
}

Money decode_bid(std::span<std::uint8_t const> bytes)
{
  if (bytes.size() != 8)
  {
    throw ValidationError{"bid payload must be exactly 8 bytes"};
  }
  return {read_u64_be(bytes.data())};
}

}  // namespace tmech
