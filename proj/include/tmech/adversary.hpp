#pragma once

#include "tmech/scenario.hpp"

#include <map>
#include <optional>
#include <span>

namespace tmech {

enum class ExecutionMode : std::uint8_t
{
  CentralizedSequential,
  DecentralizedCommitReveal
};

char const *to_string(ExecutionMode mode) noexcept;

// A colluding agent's replacement report, as full mechanism payload bytes.
struct Rebid
{
  AgentId agent;
  Bytes   report;

  bool operator==(Rebid const &) const = default;
};

// Each agent's private knowledge of itself. Strategies read only the colluder's entry.
struct PrivateKnowledge
{
  std::map<AgentId, Money>             valuations;
  std::map<AgentId, PreferenceRanking> true_rankings;

  static PrivateKnowledge from(Scenario const &scenario);
};

// Best response of the strategy's colluder to what the view discloses. A view without
// disclosed reports yields no rebids.
std::vector<Rebid> respond(LeakStrategy const &strategy, MechanismKind const &mechanism,
                           PublicView const &view, PrivateKnowledge const &knowledge);

// Exhaustive search (at most 6 schools) over every ordered list of distinct schools for
// the report maximising the student's rank utility with others fixed. The truthful
// ranking wins ties; otherwise longer lists first, then lexicographic by school index.
PreferenceRanking best_response_ranking(PreferenceRanking const &truth,
                                        std::span<PreferenceRanking const> others,
                                        std::span<SchoolSpec const> schools);

struct RunResult
{
  Settlement                  settlement;
  std::map<AgentId, Rational> utilities;  // every scenario agent
  Rational                    seller_revenue;
  std::vector<Rejection>      rejections;
  std::vector<Rebid>          rebids;  // attempted by the adversary

  bool operator==(RunResult const &) const = default;
};

// Utilities under the agents' true valuations or rankings.
RunResult evaluate(Scenario const &scenario, Settlement settlement);

struct ManipulationReport
{
  ExecutionMode               mode = ExecutionMode::CentralizedSequential;
  std::optional<LeakStrategy> strategy;
  RunResult                   honest;
  RunResult                   manipulated;
  std::vector<AgentId>        coalition;       // colluding agents
  std::map<std::string, Rational> gain_per_party;  // "seller", "coalition", "agent:<id>"
  std::vector<std::string>    notes;

  Rational coalition_gain() const;
  bool     all_deltas_zero() const;
  bool     outcome_changed() const { return !(honest.settlement == manipulated.settlement); }
};

// One execution of a scenario: centrally by an operator that sees every report on
// arrival, or through commit-reveal on the simulated chain.
RunResult run_centralized(Scenario const &scenario, LeakStrategy const *strategy);
RunResult run_decentralized(Scenario const &scenario, LeakStrategy const *strategy,
                            MinerPolicy const &miner);

ManipulationReport run_with_adversary(Scenario const &scenario,
                                      std::optional<LeakStrategy> const &strategy,
                                      ExecutionMode mode);

}  // namespace tmech
