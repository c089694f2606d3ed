#pragma once

#include "tmech/types.hpp"

#include <compare>
#include <map>
#include <optional>
#include <span>

namespace tmech {

// Integer amount of ticks; one tick is the minimum bid increment.
struct Money
{
  std::uint64_t ticks = 0;

  auto operator<=>(Money const &) const = default;
};

inline constexpr Money kTick{1};

struct Bid
{
  AgentId agent;
  Money   amount;

  bool operator==(Bid const &) const = default;
};

// Strictly decreasing click-through rates, each in (0, 1].
class SlotCTRs
{
public:
  SlotCTRs() = default;
  explicit SlotCTRs(std::vector<Rational> rates);

  std::vector<Rational> const &rates() const noexcept { return rates_; }
  std::size_t                  size() const noexcept { return rates_.size(); }
  Rational const              &operator[](std::size_t slot) const { return rates_.at(slot); }

  bool operator==(SlotCTRs const &) const = default;

private:
  std::vector<Rational> rates_;
};

// Ordering used to break equal bids. Agents earlier in the order win ties; agents
// absent from the order rank after all listed agents, by identifier.
class TieBreak
{
public:
  static TieBreak identifier_order() { return TieBreak{}; }
  static TieBreak from_order(std::vector<AgentId> order);

  // Applies a beacon permutation to the participants sorted by identifier:
  // rank k goes to sorted[perm[k]].
  static TieBreak from_permutation(std::vector<AgentId> participants,
                                   std::span<std::size_t const> perm);

  // True if a is preferred over b when their bids are equal.
  bool before(AgentId const &a, AgentId const &b) const;

  std::vector<AgentId> const &order() const noexcept { return order_; }

  bool operator==(TieBreak const &) const = default;

private:
  std::vector<AgentId> order_;
};

enum class PaymentBasis : std::uint8_t
{
  PerItem,
  PerClick
};

struct AuctionOutcome
{
  std::vector<AgentId>     allocation;  // allocation[i] holds item/slot i (0-based)
  std::map<AgentId, Money> payments;    // allocated agents only
  PaymentBasis             basis = PaymentBasis::PerItem;

  std::optional<std::size_t> slot_of(AgentId const &agent) const;

  bool operator==(AuctionOutcome const &) const = default;
};

class NoParticipants : public ValidationError
{
public:
  NoParticipants()
    : ValidationError{"auction has no participants"}
  {}
};

AuctionOutcome first_price(std::span<Bid const> bids, TieBreak const &tie_break);
AuctionOutcome second_price(std::span<Bid const> bids, TieBreak const &tie_break);

// Requires n > k >= 1. Slot i goes to the i-th highest bidder at a per-click price equal
// to the (i+1)-th highest bid.
AuctionOutcome gsp(std::span<Bid const> bids, SlotCTRs const &ctrs, TieBreak const &tie_break);

// alpha_slot * (valuation - price). No slot means utility 0.
Rational gsp_utility(Money valuation_per_click, std::optional<std::size_t> slot,
                     AuctionOutcome const &outcome, SlotCTRs const &ctrs);

// Expected revenue per impression of a GSP outcome: sum of alpha_i * price_i.
Rational gsp_revenue(AuctionOutcome const &outcome, SlotCTRs const &ctrs);

// Bids sorted descending with ties resolved by tie_break.
std::vector<Bid> rank_bids(std::span<Bid const> bids, TieBreak const &tie_break);

Bytes encode_bid(Money amount);
Money decode_bid(std::span<std::uint8_t const> bytes);

}  // namespace tmech
