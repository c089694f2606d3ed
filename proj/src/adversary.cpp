#include "tmech/adversary.hpp"

#include <algorithm>
#include <functional>

namespace tmech {

char const *to_string(ExecutionMode mode) noexcept
{
  return mode == ExecutionMode::CentralizedSequential ? "centralized" : "decentralized";
}

PrivateKnowledge PrivateKnowledge::from(Scenario const &scenario)
{
  PrivateKnowledge k;
  for (auto const &a : scenario.agents)
  {
    if (scenario.mechanism.is_auction())
    {
      k.valuations[a.id] = Money{a.valuation_or_bid()};
    }
    if (scenario.mechanism.tag == MechanismTag::Boston)
    {
      k.true_rankings[a.id] = PreferenceRanking{a.id, a.ranking};
    }
  }
  return k;
}

namespace {

std::optional<SchoolId> assigned_under(PreferenceRanking const &candidate,
                                       std::span<PreferenceRanking const> others,
                                       std::span<SchoolSpec const> schools)
{
  std::vector<PreferenceRanking> prefs(others.begin(), others.end());
  prefs.push_back(candidate);
  return boston(prefs, schools).school_of(candidate.student);
}

}  // namespace

PreferenceRanking best_response_ranking(PreferenceRanking const &truth,
                                        std::span<PreferenceRanking const> others,
                                        std::span<SchoolSpec const> schools)
{
  std::size_t const m = schools.size();
  if (m > 6)
  {
    throw ValidationError{"best response search is bounded to 6 schools, got " + std::to_string(m)};
  }

  PreferenceRanking best   = truth;
  std::int64_t     best_u = rank_utility(truth, assigned_under(truth, others, schools), m);

  PreferenceRanking      candidate{truth.student, {}};
  std::vector<bool>      used(m, false);
  std::function<void(std::size_t)> extend = [&](std::size_t remaining) {
    if (remaining == 0)
    {
      auto const u = rank_utility(truth, assigned_under(candidate, others, schools), m);
      if (u > best_u)
      {
        best   = candidate;
        best_u = u;
      }
      return;
    }
    for (std::size_t i = 0; i < m; ++i)
    {
      if (used[i])
      {
        continue;
      }
      used[i] = true;
      candidate.ranking.push_back(schools[i].school);
      extend(remaining - 1);
      candidate.ranking.pop_back();
      used[i] = false;
    }
  };
  for (std::size_t length = m + 1; length-- > 0;)
  {
    extend(length);
  }
  return best;
}

std::vector<Rebid> respond(LeakStrategy const &strategy, MechanismKind const &mechanism,
                           PublicView const &view, PrivateKnowledge const &knowledge)
{
  if (view.disclosed.empty() || strategy.kind == LeakKind::MinerCensorReveals)
  {
    return {};
  }

  SettlementInput input;
  input.payloads = view.disclosed;
  std::map<AgentId, Report> reports;
  for (auto const &[agent, payload] : view.disclosed)
  {
    input.roster.push_back(agent);
    reports.emplace(agent, decode_report(mechanism, payload));
  }
  Settlement const current = settle(mechanism, input);
  auto const      &order   = current.bid_order;

  auto const bid_at = [&](std::size_t rank) { return reports.at(order[rank]).bid->ticks; };
  auto const rebid  = [&](AgentId const &agent, std::uint64_t amount) {
    Report r = reports.at(agent);
    r.bid    = Money{amount};
    return Rebid{agent, encode_report(mechanism, r)};
  };

  switch (strategy.kind)
  {
  case LeakKind::FPATellTopTheSecond:
    // top bidder learns b2 and bids b2 + 1 tick
    if (order.size() >= 2 && bid_at(0) > bid_at(1) + 1)
    {
      return {rebid(order[0], bid_at(1) + 1)};
    }
    break;

  case LeakKind::SPARaiseSecondBelowTop:
    if (order.size() >= 2 && bid_at(0) > bid_at(1) + 1)
    {
      return {rebid(order[1], bid_at(0) - 1)};
    }
    break;

  case LeakKind::GSPRaiseKPlusOne:
  {
    std::size_t const k = mechanism.ctrs.size();
    if (order.size() > k && bid_at(k - 1) > bid_at(k) + 1)
    {
      return {rebid(order[k], bid_at(k - 1) - 1)};
    }
    break;
  }

  case LeakKind::GSPDemoteTopBidder:
  {
    if (order.size() < 3 || !current.auction)
    {
      break;
    }
    AgentId const &top       = order[0];
    auto const     deviation = bid_at(2) + 1;
    auto const     valuation = knowledge.valuations.find(top);
    if (deviation >= bid_at(1) || valuation == knowledge.valuations.end())
    {
      break;
    }
    Rebid const candidate = rebid(top, deviation);
    auto        deviated  = input;
    deviated.payloads[top] = candidate.report;
    Settlement const after = settle(mechanism, deviated);

    auto const before_u = gsp_utility(valuation->second, current.auction->slot_of(top),
                                      *current.auction, mechanism.ctrs);
    auto const after_u =
        gsp_utility(valuation->second, after.auction->slot_of(top), *after.auction, mechanism.ctrs);
    if (after_u > before_u)
    {
      return {candidate};
    }
    break;
  }

  case LeakKind::BostonSellRankings:
  {
    AgentId const &student = strategy.targets.at(0);
    auto const     own     = reports.find(student);
    auto const     truth   = knowledge.true_rankings.find(student);
    if (own == reports.end() || truth == knowledge.true_rankings.end())
    {
      break;
    }
    std::vector<PreferenceRanking> others;
    for (auto const &[agent, report] : reports)
    {
      if (agent != student)
      {
        others.push_back({agent, *report.ranking});
      }
    }
    auto const best = best_response_ranking(truth->second, others, current.schools);
    if (best.ranking != *own->second.ranking)
    {
      Report r  = own->second;
      r.ranking = best.ranking;
      return {Rebid{student, encode_report(mechanism, r)}};
    }
    break;
  }

  case LeakKind::MinerCensorReveals:
    break;
  }
  return {};
}

RunResult evaluate(Scenario const &scenario, Settlement settlement)
{
  RunResult r;
  r.seller_revenue = 0;
  for (auto const &a : scenario.agents)
  {
    r.utilities[a.id] = 0;
  }

  auto const &kind = scenario.mechanism;
  if (kind.is_auction() && settlement.auction)
  {
    auto const &outcome = *settlement.auction;
    for (std::size_t slot = 0; slot < outcome.allocation.size(); ++slot)
    {
      auto const &agent = outcome.allocation[slot];
      Money const value{scenario.agent(agent).valuation_or_bid()};
      if (kind.tag == MechanismTag::Gsp)
      {
        r.utilities[agent] = gsp_utility(value, slot, outcome, kind.ctrs);
      }
      else
      {
        auto const price = outcome.payments.at(agent).ticks;
        r.utilities[agent] =
            static_cast<std::int64_t>(value.ticks) - static_cast<std::int64_t>(price);
        r.seller_revenue += static_cast<std::int64_t>(price);
      }
    }
    if (kind.tag == MechanismTag::Gsp)
    {
      r.seller_revenue = gsp_revenue(outcome, kind.ctrs);
    }
  }
  if (kind.tag == MechanismTag::Boston && settlement.matching)
  {
    for (auto const &a : scenario.agents)
    {
      r.utilities[a.id] = rank_utility({a.id, a.ranking}, settlement.matching->school_of(a.id),
                                       kind.schools.size());
    }
  }
  r.settlement = std::move(settlement);
  return r;
}

RunResult run_centralized(Scenario const &scenario, LeakStrategy const *strategy)
{
  auto const &kind = scenario.mechanism;

  std::map<AgentId, Bytes> reports;
  for (auto const &in : honest_inputs(scenario))
  {
    reports[in.agent] = encode_report(kind, in.report);
  }

  // the operator holds every report as it arrives and may leak all of it
  std::vector<Rebid> rebids;
  if (strategy != nullptr)
  {
    PublicView const leaked{0, {}, reports};
    rebids = respond(*strategy, kind, leaked, PrivateKnowledge::from(scenario));
    for (auto const &rb : rebids)
    {
      reports[rb.agent] = rb.report;
    }
  }

  SettlementInput input;
  input.payloads = reports;
  for (auto const &[agent, payload] : reports)
  {
    input.roster.push_back(agent);
  }
  RunResult r = evaluate(scenario, settle(kind, input));
  r.rebids    = std::move(rebids);
  return r;
}

RunResult run_decentralized(Scenario const &scenario, LeakStrategy const *strategy,
                            MinerPolicy const &miner)
{
  auto const &kind     = scenario.mechanism;
  auto const &schedule = scenario.schedule;
  Height const commit_deadline = schedule.commit_deadline();
  Height const reveal_deadline = schedule.reveal_deadline();

  bool const censoring = strategy != nullptr && strategy->kind == LeakKind::MinerCensorReveals;
  MinerPolicy const reveal_censor =
      censoring ? MinerPolicy::censor({strategy->targets.begin(), strategy->targets.end()},
                                      strategy->censor_until)
                : miner;
  auto const policy_for = [&](Height new_height) -> MinerPolicy const & {
    return censoring && new_height > commit_deadline ? reveal_censor : miner;
  };

  ChainState    chain;
  ContractState contract{scenario.contract_id, schedule, kind};
  std::size_t   submitted = 0;

  auto const post = [&](AgentId const &agent, MessageKind type, Bytes payload) {
    chain = submit(std::move(chain), Message{agent, scenario.contract_id, type, std::move(payload), 0});
    ++submitted;
  };
  auto const mine_to = [&](Height target) {
    while (chain.height() < target)
    {
      chain = advance_block(std::move(chain), policy_for(chain.height() + 1));
    }
    contract = drive(chain, std::move(contract));
  };

  std::map<AgentId, CommitOpening> openings;
  for (auto const &in : honest_inputs(scenario))
  {
    CommitOpening opening{encode_report(kind, in.report), in.salt};
    post(in.agent, MessageKind::Commit,
         to_commit_payload(make_commitment(in.agent, scenario.contract_id, opening)));
    openings.emplace(in.agent, std::move(opening));
  }

  RunResult  r;
  HashStream rebid_salts{scenario.seed, kRebidStreamDomain};
  auto const attempt = [&](Height height) {
    if (strategy == nullptr)
    {
      return;
    }
    auto const rebids =
        respond(*strategy, kind, observe(contract, height), PrivateKnowledge::from(scenario));
    for (auto const &rb : rebids)
    {
      Salt salt;
      rebid_salts.fill(salt.bytes);
      CommitOpening const opening{rb.report, salt};
      post(rb.agent, MessageKind::Commit,
           to_commit_payload(make_commitment(rb.agent, scenario.contract_id, opening)));
      if (height > commit_deadline)
      {
        post(rb.agent, MessageKind::Reveal, opening.to_reveal_payload());
      }
      r.rebids.push_back(rb);
    }
  };

  mine_to(commit_deadline);
  attempt(commit_deadline);

  for (auto const &[agent, opening] : openings)
  {
    post(agent, MessageKind::Reveal, opening.to_reveal_payload());
  }
  mine_to(commit_deadline + 1);
  attempt(commit_deadline + 1);

  Height last = reveal_deadline;
  if (censoring)
  {
    last = std::max(last, strategy->censor_until + 1);
  }
  if (miner.mode == MinerPolicy::Mode::Censor)
  {
    last = std::max(last, miner.censor_until + 1);
  }
  mine_to(std::max(reveal_deadline, chain.height()));
  while (!chain.mempool().empty() && chain.height() < last)
  {
    mine_to(chain.height() + 1);
  }

  if (submitted != chain.included_count() + chain.mempool().size())
  {
    throw InvariantViolation{"ledger lost or duplicated a message"};
  }
  if (!contract.settled)
  {
    throw InvariantViolation{"contract not settled after the reveal deadline"};
  }
  for (auto const &[agent, c] : contract.commitments)
  {
    bool const revealed = contract.reveals.count(agent) != 0;
    bool const excluded = contract.excluded.count(agent) != 0;
    if (revealed == excluded)
    {
      throw InvariantViolation{"agent '" + agent + "' is not exactly one of revealed or excluded"};
    }
  }

  auto rebids  = std::move(r.rebids);
  r            = evaluate(scenario, settle(kind, settlement_input(contract)));
  r.rebids     = std::move(rebids);
  r.rejections = contract.rejections;
  return r;
}

Rational ManipulationReport::coalition_gain() const
{
  auto const it = gain_per_party.find("coalition");
  return it == gain_per_party.end() ? Rational{0} : it->second;
}

bool ManipulationReport::all_deltas_zero() const
{
  return std::all_of(gain_per_party.begin(), gain_per_party.end(),
                     [](auto const &kv) { return kv.second == Rational{0}; });
}

ManipulationReport run_with_adversary(Scenario const &scenario,
                                      std::optional<LeakStrategy> const &strategy,
                                      ExecutionMode mode)
{
  if (strategy)
  {
    auto copy      = scenario;
    copy.adversary = strategy;
    copy.validate();
  }
  else
  {
    scenario.validate();
  }

  ManipulationReport rep;
  rep.mode     = mode;
  rep.strategy = strategy;
  LeakStrategy const *s = strategy ? &*strategy : nullptr;

  if (mode == ExecutionMode::CentralizedSequential)
  {
    rep.honest      = run_centralized(scenario, nullptr);
    rep.manipulated = run_centralized(scenario, s);
    if (s != nullptr && s->kind == LeakKind::MinerCensorReveals)
    {
      rep.notes.emplace_back("centralized execution has no miner; censorship does not apply");
    }
  }
  else
  {
    rep.honest = run_decentralized(scenario, nullptr, MinerPolicy::honest());
    if (!rep.honest.settlement.excluded.empty())
    {
      throw InvariantViolation{"honest agents were excluded under an honest miner"};
    }
    rep.manipulated = run_decentralized(scenario, s, scenario.miner);
  }

  std::map<AgentId, Rational> delta;
  for (auto const &a : scenario.agents)
  {
    delta[a.id] = rep.manipulated.utilities.at(a.id) - rep.honest.utilities.at(a.id);
    rep.gain_per_party["agent:" + a.id] = delta[a.id];
  }
  Rational const seller_delta = rep.manipulated.seller_revenue - rep.honest.seller_revenue;
  rep.gain_per_party["seller"] = seller_delta;

  auto const &order   = rep.honest.settlement.bid_order;
  Rational    members = 0;
  bool        seller_side = false;
  if (s != nullptr)
  {
    switch (s->kind)
    {
    case LeakKind::FPATellTopTheSecond:
    case LeakKind::GSPDemoteTopBidder:
      if (!order.empty())
        rep.coalition = {order[0]};
      break;
    case LeakKind::SPARaiseSecondBelowTop:
      if (order.size() >= 2)
        rep.coalition = {order[1]};
      seller_side = true;
      break;
    case LeakKind::GSPRaiseKPlusOne:
      if (order.size() > scenario.mechanism.ctrs.size())
        rep.coalition = {order[scenario.mechanism.ctrs.size()]};
      seller_side = true;
      break;
    case LeakKind::BostonSellRankings:
      rep.coalition = s->targets;
      break;
    case LeakKind::MinerCensorReveals:
      // the miner works for everyone it does not censor
      for (auto const &a : scenario.agents)
      {
        if (std::find(s->targets.begin(), s->targets.end(), a.id) == s->targets.end())
          rep.coalition.push_back(a.id);
      }
      break;
    }
  }
  for (auto const &member : rep.coalition)
  {
    members += delta.at(member);
  }
  rep.gain_per_party["coalition"] = members + (seller_side ? seller_delta : Rational{0});

  if (scenario.mechanism.tag == MechanismTag::Boston)
  {
    rep.notes.emplace_back(
        "student utility is minus the true rank of the assigned school; unassigned scores -(schools + 1)");
  }
  if (rep.honest.settlement.degenerate_beacon || rep.manipulated.settlement.degenerate_beacon)
  {
    rep.notes.emplace_back("beacon had no contributors; identifier order used for ties");
  }
  return rep;
}

}  // namespace tmech
