#pragma once

#include "tmech/chain.hpp"
#include "tmech/commitment.hpp"
#include "tmech/mechanism.hpp"

#include <map>
#include <set>
#include <utility>

namespace tmech {

// Commit deadline T and reveal deadline T', both inclusive, with 0 < T < T'.
class PhaseSchedule
{
public:
  PhaseSchedule(Height commit_deadline, Height reveal_deadline);

  Height commit_deadline() const noexcept { return commit_deadline_; }
  Height reveal_deadline() const noexcept { return reveal_deadline_; }

  bool operator==(PhaseSchedule const &) const = default;

private:
  Height commit_deadline_;
  Height reveal_deadline_;
};

enum class Phase : std::uint8_t
{
  CommitPhase,
  RevealPhase,
  Settled
};

enum class RejectReason : std::uint8_t
{
  LateCommit,
  DuplicateCommit,
  UnknownAgent,
  OutsideRevealWindow,
  DuplicateReveal,
  ExcludedAgent,
  AlreadySettled,
  MalformedMessage,
  PrematureFinalize
};

char const *to_string(RejectReason reason) noexcept;

class ContractError : public std::runtime_error
{
public:
  ContractError(RejectReason reason, AgentId agent, std::string const &detail);

  RejectReason   reason() const noexcept { return reason_; }
  AgentId const &agent() const noexcept { return agent_; }

private:
  RejectReason reason_;
  AgentId      agent_;
};

struct Rejection
{
  Height       height = 0;
  AgentId      agent;
  MessageKind  kind = MessageKind::Commit;
  RejectReason reason = RejectReason::MalformedMessage;

  bool operator==(Rejection const &) const = default;
};

struct ContractState
{
  ContractState(ContractId id, PhaseSchedule schedule, MechanismKind mechanism);

  ContractId    id;
  PhaseSchedule schedule;
  MechanismKind mechanism;

  std::map<AgentId, Commitment>    commitments;
  std::map<AgentId, CommitOpening> reveals;  // verified openings only
  std::set<AgentId>                excluded;
  std::vector<Rejection>           rejections;  // recorded by drive()
  bool                             settled          = false;
  Height                           replayed_through = 0;

  Phase phase(Height height) const noexcept;

  bool operator==(ContractState const &) const = default;
};

[[nodiscard]] ContractState accept_commit(ContractState state, Height height, AgentId const &agent,
                                          Commitment const &c);

// A failed verification excludes the agent; it is not an error.
[[nodiscard]] ContractState accept_reveal(ContractState state, Height height, AgentId const &agent,
                                          CommitOpening const &opening);

// Excludes every committed agent without a verified reveal and hands the verified
// reports to the mechanism.
[[nodiscard]] std::pair<ContractState, SettlementInput> finalize(ContractState state, Height height);

// Rebuilds the settlement input of a settled contract.
SettlementInput settlement_input(ContractState const &state);

// Replays every not-yet-replayed block of `chain` addressed to this contract, recording
// rejections, and finalizes once the reveal deadline has passed.
[[nodiscard]] ContractState drive(ChainState const &chain, ContractState contract);

// What the contract exposes publicly at a given height: digests always, report payloads
// only once verified in the reveal phase.
struct PublicView
{
  Height                        height = 0;
  std::map<AgentId, Commitment> commitments;
  std::map<AgentId, Bytes>      disclosed;

  bool operator==(PublicView const &) const = default;
};

PublicView observe(ContractState const &state, Height height);

}  // namespace tmech
