#pragma once

#include "tmech/auctions.hpp"
#include "tmech/beacon.hpp"
#include "tmech/school_choice.hpp"

#include <map>
#include <optional>
#include <span>

namespace tmech {

enum class MechanismTag : std::uint8_t
{
  Beacon,
  FirstPrice,
  SecondPrice,
  Gsp,
  Boston
};

enum class TieBreakMode : std::uint8_t
{
  Identifier,
  Beacon
};

enum class PriorityMode : std::uint8_t
{
  Fixed,
  SingleLottery,
  PerSchoolLottery
};

// Which mechanism a contract settles, with its public parameters.
struct MechanismKind
{
  MechanismTag            tag = MechanismTag::Beacon;
  SlotCTRs                ctrs;                                 // Gsp
  TieBreakMode            tie_break  = TieBreakMode::Identifier;  // auctions
  std::vector<SchoolSpec> schools;                              // Boston
  PriorityMode            priorities = PriorityMode::Fixed;     // Boston

  bool is_auction() const noexcept;

  // Whether reveal payloads carry an 8-byte beacon contribution after the report.
  bool carries_contribution() const noexcept;

  void validate() const;

  bool operator==(MechanismKind const &) const = default;
};

// A participant's private report, decoded from a reveal payload.
struct Report
{
  std::optional<Money>                 bid;
  std::optional<std::vector<SchoolId>> ranking;
  std::optional<BeaconContribution>    contribution;

  bool operator==(Report const &) const = default;
};

// Beacon: contribution(8). Auctions: bid(8) [+ contribution(8)].
// Boston: len(1) | school indices [+ contribution(8)].
Bytes  encode_report(MechanismKind const &kind, Report const &report);
Report decode_report(MechanismKind const &kind, std::span<std::uint8_t const> bytes);

// Verified inputs handed from the contract to the mechanism.
struct SettlementInput
{
  std::map<AgentId, Bytes> payloads;  // verified reports keyed by agent
  std::vector<AgentId>     roster;    // every committed agent, ascending
  std::vector<AgentId>     excluded;  // ascending

  bool operator==(SettlementInput const &) const = default;
};

struct Settlement
{
  MechanismTag                  tag = MechanismTag::Beacon;
  std::vector<AgentId>          participants;  // ascending
  std::vector<AgentId>          excluded;      // ascending
  std::optional<BeaconOutput>   beacon;
  bool                          degenerate_beacon = false;
  std::vector<AgentId>          bid_order;  // auctions: bidders by rank after tie-breaking
  std::optional<AuctionOutcome> auction;
  std::vector<SchoolSpec>       schools;  // Boston: priorities actually used
  std::optional<Matching>       matching;

  bool operator==(Settlement const &) const = default;
};

// Runs the mechanism over verified reports. Settlement always proceeds: an empty or
// short participant set yields an empty or truncated allocation rather than an error.
Settlement settle(MechanismKind const &kind, SettlementInput const &input);

}  // namespace tmech
