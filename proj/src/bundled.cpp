#include "tmech/scenario.hpp"

namespace tmech {

namespace {

AgentSpec bidder(AgentId id, std::uint64_t bid, std::optional<std::uint64_t> valuation = {})
{
  AgentSpec a;
  a.id        = std::move(id);
  a.bid       = bid;
  a.valuation = valuation;
  return a;
}

AgentSpec student(AgentId id, std::vector<SchoolId> ranking)
{
  AgentSpec a;
  a.id      = std::move(id);
  a.ranking = std::move(ranking);
  return a;
}

Scenario auction(std::string name, MechanismTag tag, std::vector<AgentSpec> agents)
{
  Scenario s;
  s.name          = std::move(name);
  s.mechanism.tag = tag;
  s.schedule      = PhaseSchedule{3, 6};
  s.agents        = std::move(agents);
  s.seed          = 1;
  return s;
}

}  // namespace

std::vector<Scenario> bundled_scenarios()
{
  std::vector<Scenario> out;

  {
    auto s = auction("fpa_leak", MechanismTag::FirstPrice,
                     {bidder("A", 10), bidder("B", 5), bidder("C", 3)});
    s.adversary = LeakStrategy{LeakKind::FPATellTopTheSecond, {}, 0};
    out.push_back(std::move(s));
  }
  {
    auto s = auction("spa_leak", MechanismTag::SecondPrice,
                     {bidder("A", 10), bidder("B", 6), bidder("C", 2)});
    s.adversary = LeakStrategy{LeakKind::SPARaiseSecondBelowTop, {}, 0};
    out.push_back(std::move(s));
  }
  {
    auto s = auction("gsp_raise_k_plus_one", MechanismTag::Gsp,
                     {bidder("1", 10), bidder("2", 9), bidder("3", 4)});
    s.mechanism.ctrs = SlotCTRs{{Rational{1}, Rational{4, 5}}};
    s.adversary      = LeakStrategy{LeakKind::GSPRaiseKPlusOne, {}, 0};
    out.push_back(std::move(s));
  }
  {
    auto s = auction("gsp_demote_top", MechanismTag::Gsp,
                     {bidder("1", 10), bidder("2", 9), bidder("3", 1)});
    s.mechanism.ctrs = SlotCTRs{{Rational{1}, Rational{4, 5}}};
    s.adversary      = LeakStrategy{LeakKind::GSPDemoteTopBidder, {}, 0};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.name               = "boston_oxbridge";
    s.mechanism.tag      = MechanismTag::Boston;
    s.mechanism.schools  = {{"Oxford", 1, {"Alice", "Bob", "Carol"}},
                            {"Cambridge", 1, {"Alice", "Bob", "Carol"}}};
    s.schedule           = PhaseSchedule{3, 6};
    s.agents             = {student("Alice", {"Oxford", "Cambridge"}),
                            student("Bob", {"Oxford", "Cambridge"}),
                            student("Carol", {"Cambridge", "Oxford"})};
    s.adversary          = LeakStrategy{LeakKind::BostonSellRankings, {"Bob"}, 0};
    s.seed               = 1;
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.name                 = "boston_lottery";
    s.mechanism.tag        = MechanismTag::Boston;
    s.mechanism.priorities = PriorityMode::PerSchoolLottery;
    s.mechanism.schools    = {{"North", 1, {}}, {"South", 1, {}}, {"West", 2, {}}};
    s.schedule             = PhaseSchedule{2, 5};
    s.agents               = {student("s1", {"North", "South", "West"}),
                              student("s2", {"North", "West", "South"}),
                              student("s3", {"South", "North"}),
                              student("s4", {"North", "South", "West"}),
                              student("s5", {"West", "North"})};
    s.adversary            = LeakStrategy{LeakKind::BostonSellRankings, {"s4"}, 0};
    s.seed                 = 7;
    out.push_back(std::move(s));
  }
  {
    auto s = auction("miner_censor_within_window", MechanismTag::FirstPrice,
                     {bidder("A", 12), bidder("B", 12), bidder("C", 7)});
    s.mechanism.tie_break = TieBreakMode::Beacon;
    s.schedule            = PhaseSchedule{3, 8};
    // reveal window of 5 blocks outlasts a censor ending at height 7
    s.adversary = LeakStrategy{LeakKind::MinerCensorReveals, {"A"}, 7};
    out.push_back(std::move(s));
  }
  {
    Scenario s;
    s.name          = "beacon_basic";
    s.mechanism.tag = MechanismTag::Beacon;
    s.schedule      = PhaseSchedule{2, 4};
    s.agents        = {AgentSpec{"A", {}, {}, {}, 3}, AgentSpec{"B", {}, {}, {}, 5},
                       AgentSpec{"C", {}, {}, {}, {}}};
    s.seed          = 42;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace tmech
