#pragma once

#include "tmech/contract.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>

namespace tmech {

enum class LeakKind : std::uint8_t
{
  FPATellTopTheSecond,
  SPARaiseSecondBelowTop,
  GSPRaiseKPlusOne,
  GSPDemoteTopBidder,
  BostonSellRankings,
  MinerCensorReveals
};

struct LeakStrategy
{
  LeakKind             kind = LeakKind::FPATellTopTheSecond;
  std::vector<AgentId> targets;           // BostonSellRankings: the informed student
  Height               censor_until = 0;  // MinerCensorReveals

  bool operator==(LeakStrategy const &) const = default;
};

char const *to_string(LeakKind kind) noexcept;
LeakKind    parse_leak_kind(std::string const &name);

// Throws ValidationError when the strategy cannot run against the mechanism.
void check_compatible(LeakStrategy const &strategy, MechanismKind const &mechanism);

struct AgentSpec
{
  AgentId                      id;
  std::optional<std::uint64_t> bid;
  std::optional<std::uint64_t> valuation;  // per item, or per click for GSP; defaults to bid
  std::vector<SchoolId>        ranking;    // true preference order
  std::optional<std::uint64_t> contribution;

  std::uint64_t valuation_or_bid() const { return valuation.value_or(bid.value_or(0)); }

  bool operator==(AgentSpec const &) const = default;
};

// Largest bid or valuation accepted, so utilities stay exact in 64-bit rationals.
inline constexpr std::uint64_t kMaxTicks = 1'000'000'000'000ULL;

struct Scenario
{
  std::string                 name;
  ContractId                  contract_id = "C1";
  MechanismKind               mechanism;
  PhaseSchedule               schedule{1, 2};
  std::vector<AgentSpec>      agents;
  std::optional<LeakStrategy> adversary;
  MinerPolicy                 miner;
  std::uint64_t               seed = 0;

  AgentSpec const &agent(AgentId const &id) const;

  void validate() const;

  bool operator==(Scenario const &) const = default;
};

// Truthful report and salt of one agent. Salts and any unspecified beacon contributions
// come from HashStream(seed, kSeedStreamDomain), consumed in agent-identifier order:
// 32 salt bytes, then one contribution word.
struct HonestInput
{
  AgentId agent;
  Report  report;
  Salt    salt;
};

inline constexpr std::uint64_t kSeedStreamDomain  = 0x5EED;
inline constexpr std::uint64_t kRebidStreamDomain = 0x5EED + 1;

std::vector<HonestInput> honest_inputs(Scenario const &scenario);

nlohmann::json to_json(Scenario const &scenario);
Scenario       scenario_from_json(nlohmann::json const &j);

// Parses scenario text; syntax errors report line and column, schema errors the field path.
Scenario    parse_scenario(std::string const &text);
Scenario    load_scenario(std::filesystem::path const &path);
std::string dump_scenario(Scenario const &scenario);

// Scenarios shipped with the tool (mirrored as files under scenarios/).
std::vector<Scenario> bundled_scenarios();

}  // namespace tmech
