#include "tmech/contract.hpp"

#include <algorithm>

namespace tmech {

PhaseSchedule::PhaseSchedule(Height commit_deadline, Height reveal_deadline)
  : commit_deadline_{commit_deadline}
  , reveal_deadline_{reveal_deadline}
{
  if (!(0 < commit_deadline_ && commit_deadline_ < reveal_deadline_))
  {
    throw ValidationError{"phase schedule needs 0 < T < T' (got T = " +
                          std::to_string(commit_deadline_) +
                          ", T' = " + std::to_string(reveal_deadline_) + ")"};
  }
}

char const *to_string(RejectReason reason) noexcept
{
  switch (reason)
  {
  case RejectReason::LateCommit:
    return "late-commit";
  case RejectReason::DuplicateCommit:
    return "duplicate-commit";
  case RejectReason::UnknownAgent:
    return "unknown-agent";
  case RejectReason::OutsideRevealWindow:
    return "outside-reveal-window";
  case RejectReason::DuplicateReveal:
    return "duplicate-reveal";
  case RejectReason::ExcludedAgent:
    return "excluded-agent";
  case RejectReason::AlreadySettled:
    return "already-settled";
  case RejectReason::MalformedMessage:
    return "malformed-message";
  case RejectReason::PrematureFinalize:
    return "premature-finalize";
  }
  return "unknown";
}

ContractError::ContractError(RejectReason reason, AgentId agent, std::string const &detail)
  : std::runtime_error{std::string{to_string(reason)} + (agent.empty() ? "" : " (" + agent + ")") +
                       ": " + detail}
  , reason_{reason}
  , agent_{std::move(agent)}
{}

ContractState::ContractState(ContractId id_, PhaseSchedule schedule_, MechanismKind mechanism_)
  : id{std::move(id_)}
  , schedule{schedule_}
  , mechanism{std::move(mechanism_)}
{
  mechanism.validate();
}

Phase ContractState::phase(Height height) const noexcept
{
  if (settled)
  {
    return Phase::Settled;
  }
  return height <= schedule.commit_deadline() ? Phase::CommitPhase : Phase::RevealPhase;
}

ContractState accept_commit(ContractState state, Height height, AgentId const &agent,
                            Commitment const &c)
{
  if (state.settled)
  {
    throw ContractError{RejectReason::AlreadySettled, agent, "contract is settled"};
  }
  if (height > state.schedule.commit_deadline())
  {
    throw ContractError{RejectReason::LateCommit, agent,
                        "commit at height " + std::to_string(height) + " after T = " +
                            std::to_string(state.schedule.commit_deadline())};
  }
  if (!state.commitments.emplace(agent, c).second)
  {
    throw ContractError{RejectReason::DuplicateCommit, agent, "first commitment stands"};
  }
  return state;
}

ContractState accept_reveal(ContractState state, Height height, AgentId const &agent,
                            CommitOpening const &opening)
{
  if (state.settled)
  {
    throw ContractError{RejectReason::AlreadySettled, agent, "contract is settled"};
  }
  auto const committed = state.commitments.find(agent);
  if (committed == state.commitments.end())
  {
    throw ContractError{RejectReason::UnknownAgent, agent, "no prior commitment"};
  }
  if (height <= state.schedule.commit_deadline() || height > state.schedule.reveal_deadline())
  {
    throw ContractError{RejectReason::OutsideRevealWindow, agent,
                        "reveal at height " + std::to_string(height) + " outside (T, T']"};
  }
  if (state.excluded.count(agent) != 0)
  {
    throw ContractError{RejectReason::ExcludedAgent, agent, "agent already excluded"};
  }
  if (state.reveals.count(agent) != 0)
  {
    throw ContractError{RejectReason::DuplicateReveal, agent, "first verified reveal stands"};
  }

  bool valid = verify_opening(committed->second, agent, state.id, opening);
  if (valid)
  {
    try
    {
      (void)decode_report(state.mechanism, opening.payload());
    }
    catch (ValidationError const &)
    {
      valid = false;
    }
  }
  if (valid)
  {
    state.reveals.emplace(agent, opening);
  }
  else
  {
    state.excluded.insert(agent);
  }
  return state;
}

SettlementInput settlement_input(ContractState const &state)
{
  SettlementInput in;
  for (auto const &[agent, opening] : state.reveals)
  {
    in.payloads.emplace(agent, opening.payload());
  }
  for (auto const &[agent, c] : state.commitments)
  {
    in.roster.push_back(agent);
  }
  in.excluded.assign(state.excluded.begin(), state.excluded.end());
  return in;
}

std::pair<ContractState, SettlementInput> finalize(ContractState state, Height height)
{
  if (state.settled)
  {
    throw ContractError{RejectReason::AlreadySettled, {}, "finalize called twice"};
  }
  if (height < state.schedule.reveal_deadline())
  {
    throw ContractError{RejectReason::PrematureFinalize, {},
                        "finalize at height " + std::to_string(height) + " before T' = " +
                            std::to_string(state.schedule.reveal_deadline())};
  }
  for (auto const &[agent, c] : state.commitments)
  {
    if (state.reveals.count(agent) == 0)
    {
      state.excluded.insert(agent);
    }
  }
  state.settled = true;
  auto input    = settlement_input(state);
  return {std::move(state), std::move(input)};
}

namespace {

ContractState apply(ContractState state, Height height, Message const &msg)
{
  if (msg.kind == MessageKind::Commit)
  {
    return accept_commit(std::move(state), height, msg.sender, from_commit_payload(msg.payload));
  }
  return accept_reveal(std::move(state), height, msg.sender,
                       CommitOpening::from_reveal_payload(msg.payload));
}

}  // namespace

ContractState drive(ChainState const &chain, ContractState contract)
{
  Height const deadline = contract.schedule.reveal_deadline();
  for (Height h = contract.replayed_through + 1; h <= chain.height(); ++h)
  {
    if (h > deadline && !contract.settled)
    {
      contract = finalize(std::move(contract), deadline).first;
    }
    for (auto const &msg : chain.blocks()[h - 1])
    {
      if (msg.contract_id != contract.id)
      {
        continue;
      }
      RejectReason reason{};
      try
      {
        contract = apply(contract, h, msg);
        continue;
      }
      catch (ContractError const &e)
      {
        reason = e.reason();
      }
      catch (ValidationError const &)
      {
        reason = RejectReason::MalformedMessage;
      }
      contract.rejections.push_back({h, msg.sender, msg.kind, reason});
    }
    contract.replayed_through = h;
  }
  if (chain.height() >= deadline && !contract.settled)
  {
    contract = finalize(std::move(contract), chain.height()).first;
  }
  return contract;
}

PublicView observe(ContractState const &state, Height height)
{
  PublicView v;
  v.height      = height;
  v.commitments = state.commitments;
  if (height > state.schedule.commit_deadline())
  {
    for (auto const &[agent, opening] : state.reveals)
    {
      v.disclosed.emplace(agent, opening.payload());
    }
  }
  return v;
}

}  // namespace tmech
