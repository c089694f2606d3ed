#include "tmech/contract.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tmech;

namespace {

MechanismKind first_price_kind()
{
  MechanismKind k;
  k.tag = MechanismTag::FirstPrice;
  return k;
}

ContractState fresh(Height t = 2, Height t_prime = 5)
{
  return ContractState{"C1", PhaseSchedule{t, t_prime}, first_price_kind()};
}

CommitOpening opening(std::uint64_t bid, std::uint8_t salt_byte)
{
  Salt s;
  s.bytes.fill(salt_byte);
  return CommitOpening{encode_report(first_price_kind(), Report{Money{bid}, {}, {}}), s};
}

Commitment commit_of(AgentId const &agent, CommitOpening const &o)
{
  return make_commitment(agent, "C1", o);
}

Message commit_msg(AgentId const &agent, CommitOpening const &o)
{
  return {agent, "C1", MessageKind::Commit, to_commit_payload(commit_of(agent, o)), 0};
}

Message reveal_msg(AgentId const &agent, CommitOpening const &o)
{
  return {agent, "C1", MessageKind::Reveal, o.to_reveal_payload(), 0};
}

RejectReason reason_of(auto &&fn)
{
  try
  {
    fn();
  }
  catch (ContractError const &e)
  {
    return e.reason();
  }
  ADD_FAILURE() << "expected a ContractError";
  return RejectReason::MalformedMessage;
}

}  // namespace

TEST(schedule, requires_ordered_positive_deadlines)
{
  EXPECT_NO_THROW(PhaseSchedule(1, 2));
  EXPECT_THROW(PhaseSchedule(0, 2), ValidationError);
  EXPECT_THROW(PhaseSchedule(3, 3), ValidationError);
  EXPECT_THROW(PhaseSchedule(4, 3), ValidationError);
}

TEST(contract, phases)
{
  auto s = fresh();
  EXPECT_EQ(s.phase(0), Phase::CommitPhase);
  EXPECT_EQ(s.phase(2), Phase::CommitPhase);
  EXPECT_EQ(s.phase(3), Phase::RevealPhase);
  s.settled = true;
  EXPECT_EQ(s.phase(3), Phase::Settled);
}

TEST(contract, commit_window_is_inclusive)
{
  auto const o = opening(10, 1);
  auto       s = accept_commit(fresh(), 2, "A", commit_of("A", o));
  EXPECT_EQ(s.commitments.size(), 1u);
  EXPECT_EQ(reason_of([&] { (void)accept_commit(s, 3, "B", commit_of("B", o)); }), RejectReason::LateCommit);
}

TEST(contract, first_commit_stands)
{
  auto const first  = opening(10, 1);
  auto const second = opening(11, 2);
  auto       s      = accept_commit(fresh(), 1, "A", commit_of("A", first));
  EXPECT_EQ(reason_of([&] { (void)accept_commit(s, 2, "A", commit_of("A", second)); }),
            RejectReason::DuplicateCommit);
  EXPECT_EQ(s.commitments.at("A"), commit_of("A", first));
}

TEST(contract, reveal_window_boundaries)
{
  auto const o = opening(10, 1);
  auto const s = accept_commit(fresh(2, 5), 1, "A", commit_of("A", o));
  EXPECT_EQ(reason_of([&] { (void)accept_reveal(s, 2, "A", o); }), RejectReason::OutsideRevealWindow);
  EXPECT_EQ(reason_of([&] { (void)accept_reveal(s, 6, "A", o); }), RejectReason::OutsideRevealWindow);
  EXPECT_EQ(accept_reveal(s, 3, "A", o).reveals.count("A"), 1u);
  EXPECT_EQ(accept_reveal(s, 5, "A", o).reveals.count("A"), 1u);
}

TEST(contract, reveal_rejections)
{
  auto const o = opening(10, 1);
  auto       s = accept_commit(fresh(), 1, "A", commit_of("A", o));
  EXPECT_EQ(reason_of([&] { (void)accept_reveal(s, 3, "Z", o); }), RejectReason::UnknownAgent);

  auto const revealed = accept_reveal(s, 3, "A", o);
  EXPECT_EQ(reason_of([&] { (void)accept_reveal(revealed, 4, "A", opening(11, 1)); }),
            RejectReason::DuplicateReveal);

  auto const excluded = accept_reveal(s, 3, "A", opening(11, 1));
  EXPECT_EQ(excluded.excluded.count("A"), 1u);
  EXPECT_EQ(reason_of([&] { (void)accept_reveal(excluded, 4, "A", o); }), RejectReason::ExcludedAgent);
}

TEST(contract, failed_verification_excludes)
{
  auto const o = opening(10, 1);
  auto const s = accept_commit(fresh(), 1, "A", commit_of("A", o));
  auto const wrong_salt = accept_reveal(s, 3, "A", opening(10, 2));
  EXPECT_TRUE(wrong_salt.reveals.empty());
  EXPECT_EQ(wrong_salt.excluded.count("A"), 1u);
}

TEST(contract, verified_but_undecodable_payload_excludes)
{
  Salt          salt{};
  CommitOpening junk{Bytes{1, 2, 3}, salt};
  auto const    s = accept_commit(fresh(), 1, "A", commit_of("A", junk));
  auto const    after = accept_reveal(s, 3, "A", junk);
  EXPECT_EQ(after.excluded.count("A"), 1u);
}

TEST(contract, finalize_excludes_silent_agents)
{
  auto const a = opening(10, 1);
  auto const b = opening(5, 2);
  auto       s = accept_commit(fresh(), 1, "A", commit_of("A", a));
  s            = accept_commit(std::move(s), 1, "B", commit_of("B", b));
  s            = accept_reveal(std::move(s), 3, "A", a);

  EXPECT_EQ(reason_of([&] { (void)finalize(s, 4); }), RejectReason::PrematureFinalize);
  auto [done, input] = finalize(s, 5);
  EXPECT_TRUE(done.settled);
  EXPECT_EQ(input.roster, (std::vector<AgentId>{"A", "B"}));
  EXPECT_EQ(input.excluded, (std::vector<AgentId>{"B"}));
  EXPECT_EQ(input.payloads.size(), 1u);
  EXPECT_EQ(input.payloads.at("A"), a.payload());
  EXPECT_EQ(settlement_input(done), input);

  EXPECT_EQ(reason_of([&] { (void)finalize(done, 6); }), RejectReason::AlreadySettled);
  EXPECT_EQ(reason_of([&] { (void)accept_commit(done, 1, "C", commit_of("C", a)); }),
            RejectReason::AlreadySettled);
}

TEST(contract, sealed_until_commit_deadline)
{
  auto const o = opening(10, 1);
  auto       s = accept_commit(fresh(), 1, "A", commit_of("A", o));
  auto const sealed = observe(s, 2);
  EXPECT_EQ(sealed.commitments.size(), 1u);
  EXPECT_TRUE(sealed.disclosed.empty());
  s = accept_reveal(std::move(s), 3, "A", o);
  EXPECT_TRUE(observe(s, 2).disclosed.empty());
  EXPECT_EQ(observe(s, 3).disclosed.at("A"), o.payload());
}

namespace {

ChainState scripted_chain(MinerPolicy const &policy, Height commit_deadline, Height until)
{
  auto const a = opening(10, 1);
  auto const b = opening(5, 2);
  ChainState chain;
  chain = submit(std::move(chain), commit_msg("A", a));
  chain = submit(std::move(chain), commit_msg("B", b));
  while (chain.height() < commit_deadline)
    chain = advance_block(std::move(chain), MinerPolicy::honest());
  chain = submit(std::move(chain), reveal_msg("A", a));
  chain = submit(std::move(chain), reveal_msg("B", b));
  while (chain.height() < until)
    chain = advance_block(std::move(chain), policy);
  return chain;
}

}  // namespace

TEST(drive, honest_run_settles_both)
{
  auto const chain = scripted_chain(MinerPolicy::honest(), 2, 5);
  auto const s     = drive(chain, fresh(2, 5));
  EXPECT_TRUE(s.settled);
  EXPECT_EQ(s.reveals.size(), 2u);
  EXPECT_TRUE(s.excluded.empty());
  EXPECT_TRUE(s.rejections.empty());
}

TEST(drive, incremental_replay_matches_single_pass)
{
  auto const a = opening(10, 1);
  ChainState chain;
  auto       incremental = fresh(2, 5);
  chain = submit(std::move(chain), commit_msg("A", a));
  chain = submit(std::move(chain), commit_msg("A", opening(12, 3)));
  for (int i = 0; i < 2; ++i)
  {
    chain       = advance_block(std::move(chain), MinerPolicy::honest());
    incremental = drive(chain, std::move(incremental));
  }
  chain = submit(std::move(chain), reveal_msg("A", a));
  chain = submit(std::move(chain), Message{"A", "C1", MessageKind::Reveal, Bytes{1, 2}, 0});
  chain = submit(std::move(chain), Message{"A", "other", MessageKind::Reveal, Bytes{1, 2}, 0});
  for (int i = 0; i < 5; ++i)
  {
    chain       = advance_block(std::move(chain), MinerPolicy::honest());
    incremental = drive(chain, std::move(incremental));
  }
  auto const single = drive(chain, fresh(2, 5));
  EXPECT_EQ(incremental, single);
  EXPECT_EQ(drive(chain, single), single);

  ASSERT_EQ(single.rejections.size(), 2u);
  EXPECT_EQ(single.rejections[0], (Rejection{1, "A", MessageKind::Commit, RejectReason::DuplicateCommit}));
  EXPECT_EQ(single.rejections[1], (Rejection{3, "A", MessageKind::Reveal, RejectReason::MalformedMessage}));
  EXPECT_TRUE(single.settled);
}

TEST(drive, messages_after_deadline_are_rejected_as_settled)
{
  auto const a     = opening(10, 1);
  auto       chain = scripted_chain(MinerPolicy::honest(), 2, 5);
  chain            = submit(std::move(chain), reveal_msg("A", a));
  chain            = advance_block(std::move(chain), MinerPolicy::honest());
  auto const s     = drive(chain, fresh(2, 5));
  ASSERT_EQ(s.rejections.size(), 1u);
  EXPECT_EQ(s.rejections[0].reason, RejectReason::AlreadySettled);
  EXPECT_EQ(s.rejections[0].height, 6u);
}

TEST(drive, censorship_past_deadline_excludes)
{
  // Reveal posted at T = 2; censoring A through height c delays it to c + 1.
  for (Height c = 2; c <= 7; ++c)
  {
    auto const chain = scripted_chain(MinerPolicy::censor({"A"}, c), 2, 8);
    auto const s     = drive(chain, fresh(2, 5));
    EXPECT_EQ(s.excluded.count("A") == 1, c >= 5) << "censor_until = " << c;
    EXPECT_EQ(s.reveals.count("B"), 1u);
  }
}

TEST(drive, random_traces_respect_the_protocol)
{
  std::mt19937_64 rng{13};
  for (int trial = 0; trial < 200; ++trial)
  {
    ChainState chain;
    auto       s = fresh(3, 6);
    std::vector<CommitOpening> openings;
    for (int i = 0; i < 4; ++i)
      openings.push_back(opening(rng() % 20, static_cast<std::uint8_t>(rng())));
    for (Height h = 0; h < 9; ++h)
    {
      for (int k = 0; k < 3; ++k)
      {
        auto const i     = rng() % 4;
        AgentId    agent = std::string(1, static_cast<char>('A' + i));
        auto const msg   = rng() % 2 ? commit_msg(agent, openings[i]) : reveal_msg(agent, openings[i]);
        chain            = submit(std::move(chain), msg);
      }
      chain = advance_block(std::move(chain), MinerPolicy::honest());
      s     = drive(chain, std::move(s));
    }
    EXPECT_TRUE(s.settled);
    for (auto const &[agent, c] : s.commitments)
      EXPECT_NE(s.reveals.count(agent) == 1, s.excluded.count(agent) == 1);
    for (auto const &r : s.rejections)
    {
      if (r.kind == MessageKind::Commit && r.height > 3 && r.height <= 6)
      {
        EXPECT_EQ(r.reason, RejectReason::LateCommit);
      }
    }
    EXPECT_EQ(s, drive(chain, fresh(3, 6)));
  }
}
