#include "tmech/chain.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tmech;

namespace {

Message msg(AgentId sender, MessageKind kind = MessageKind::Reveal, std::size_t size = 8)
{
  return Message{std::move(sender), "C1", kind, Bytes(size, 0xAB), 999};
}

ChainState advance_to(ChainState chain, Height target, MinerPolicy const &policy)
{
  while (chain.height() < target)
  {
    chain = advance_block(std::move(chain), policy);
  }
  return chain;
}

}  // namespace

TEST(chain, submit_appends_to_mempool_at_current_height)
{
  auto const chain = submit(ChainState{}, msg("A", MessageKind::Commit));
  EXPECT_EQ(chain.height(), 0u);
  ASSERT_EQ(chain.mempool().size(), 1u);
  EXPECT_TRUE(chain.blocks().empty());
  EXPECT_EQ(chain.mempool()[0].submitted_at, 0u);  // sender's 999 is overwritten
}

TEST(chain, submit_preserves_order)
{
  auto chain = submit(ChainState{}, msg("A", MessageKind::Commit));
  chain      = submit(std::move(chain), msg("A", MessageKind::Reveal));
  ASSERT_EQ(chain.mempool().size(), 2u);
  EXPECT_EQ(chain.mempool()[0].kind, MessageKind::Commit);
  EXPECT_EQ(chain.mempool()[1].kind, MessageKind::Reveal);
}

TEST(chain, oversized_payload_is_rejected_with_sender)
{
  try
  {
    (void)submit(ChainState{}, msg("mallory", MessageKind::Commit, 2000));
    FAIL() << "expected PayloadTooLarge";
  }
  catch (PayloadTooLarge const &e)
  {
    EXPECT_EQ(e.sender(), "mallory");
  }
  EXPECT_NO_THROW((void)submit(ChainState{}, msg("A", MessageKind::Commit, 1024)));
}

TEST(chain, honest_block_takes_whole_mempool)
{
  auto chain = submit(submit(ChainState{}, msg("m1")), msg("m2"));
  chain      = advance_block(std::move(chain), MinerPolicy::honest());
  EXPECT_EQ(chain.height(), 1u);
  ASSERT_EQ(chain.blocks()[0].size(), 2u);
  EXPECT_EQ(chain.blocks()[0][0].sender, "m1");
  EXPECT_EQ(chain.blocks()[0][1].sender, "m2");
  EXPECT_TRUE(chain.mempool().empty());
}

TEST(chain, honest_mode_ignores_censor_fields)
{
  MinerPolicy p = MinerPolicy::honest();
  p.censor_targets = {"A"};
  p.censor_until   = 100;
  auto chain       = advance_block(submit(ChainState{}, msg("A")), p);
  EXPECT_EQ(chain.blocks()[0].size(), 1u);
}

TEST(chain, censor_holds_target_until_window_ends)
{
  auto const policy = MinerPolicy::censor({"A"}, 5);
  auto       chain  = advance_to(ChainState{}, 3, MinerPolicy::honest());
  chain             = submit(submit(std::move(chain), msg("A")), msg("B"));

  chain = advance_block(std::move(chain), policy);  // height 4
  ASSERT_EQ(chain.blocks()[3].size(), 1u);
  EXPECT_EQ(chain.blocks()[3][0].sender, "B");
  ASSERT_EQ(chain.mempool().size(), 1u);

  chain = advance_block(std::move(chain), policy);  // height 5, still censored
  EXPECT_TRUE(chain.blocks()[4].empty());

  chain = advance_block(std::move(chain), policy);  // height 6
  ASSERT_EQ(chain.blocks()[5].size(), 1u);
  EXPECT_EQ(chain.blocks()[5][0].sender, "A");
  EXPECT_TRUE(chain.mempool().empty());
}

TEST(chain, messages_through_is_a_prefix)
{
  auto chain = advance_to(ChainState{}, 3, MinerPolicy::honest());
  chain      = submit(std::move(chain), msg("A"));
  chain      = advance_block(std::move(chain), MinerPolicy::honest());  // included at 4

  EXPECT_TRUE(messages_through(chain, 0).empty());
  EXPECT_TRUE(messages_through(chain, 3).empty());
  ASSERT_EQ(messages_through(chain, 4).size(), 1u);
  EXPECT_THROW((void)messages_through(chain, 5), std::out_of_range);
}

TEST(chain, conservation_and_determinism_under_random_policies)
{
  std::mt19937_64 rng{17};
  for (int trial = 0; trial < 200; ++trial)
  {
    auto const                           seed = rng();
    auto const run = [&] {
      std::mt19937_64 local{seed};
      ChainState      chain;
      std::size_t     submitted = 0;
      auto const      policy    = MinerPolicy::censor({"A", "C"}, local() % 10);
      for (int step = 0; step < 30; ++step)
      {
        if (local() % 3 == 0)
        {
          chain = advance_block(std::move(chain), policy);
        }
        else
        {
          chain = submit(std::move(chain), msg(std::string(1, char('A' + local() % 4))));
          ++submitted;
        }
      }
      EXPECT_EQ(submitted, chain.included_count() + chain.mempool().size());
      EXPECT_EQ(chain.blocks().size(), chain.height());
      return chain;
    };
    auto const a = run();
    auto const b = run();
    EXPECT_EQ(encode(a), encode(b));
  }
}

TEST(chain, censorship_bound_holds_for_long_reveal_windows)
{
  // reveals submitted at T are included by T' whenever T' - T >= censor_until - T + 1
  for (Height t = 1; t < 6; ++t)
  {
    for (Height until = t; until < t + 8; ++until)
    {
      Height const reveal_deadline = until + 1;
      auto chain = advance_to(ChainState{}, t, MinerPolicy::honest());
      chain      = submit(std::move(chain), msg("A"));
      chain      = advance_to(std::move(chain), reveal_deadline, MinerPolicy::censor({"A"}, until));
      EXPECT_EQ(messages_through(chain, reveal_deadline).size(), 1u);
      EXPECT_TRUE(messages_through(chain, until).empty());
    }
  }
}
