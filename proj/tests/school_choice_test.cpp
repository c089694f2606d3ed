#include "tmech/adversary.hpp"
#include "tmech/school_choice.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace tmech;

namespace {

std::vector<SchoolSpec> oxbridge()
{
  return {{"Oxford", 1, {"Alice", "Bob", "Carol"}}, {"Cambridge", 1, {"Alice", "Bob", "Carol"}}};
}

std::vector<PreferenceRanking> oxbridge_truth()
{
  return {{"Alice", {"Oxford", "Cambridge"}},
          {"Bob", {"Oxford", "Cambridge"}},
          {"Carol", {"Cambridge", "Oxford"}}};
}

// Straightforward immediate-acceptance reference: per round, walk the priority list of
// each school and admit unassigned applicants whose r-th choice it is.
std::map<AgentId, std::optional<SchoolId>> reference_boston(std::vector<PreferenceRanking> const &prefs,
                                                            std::vector<SchoolSpec> const &schools)
{
  std::map<AgentId, std::optional<SchoolId>> result;
  std::map<SchoolId, std::uint32_t>          seats;
  for (auto const &s : schools)
    seats[s.school] = s.capacity;
  for (auto const &p : prefs)
    result[p.student] = std::nullopt;
  std::size_t longest = 0;
  for (auto const &p : prefs)
    longest = std::max(longest, p.ranking.size());
  for (std::size_t r = 0; r < longest; ++r)
  {
    std::map<AgentId, SchoolId> applying;
    for (auto const &p : prefs)
    {
      if (!result[p.student] && r < p.ranking.size())
        applying[p.student] = p.ranking[r];
    }
    for (auto const &s : schools)
    {
      for (auto const &student : s.priority)
      {
        auto const it = applying.find(student);
        if (it != applying.end() && it->second == s.school && seats[s.school] > 0)
        {
          result[student] = s.school;
          --seats[s.school];
        }
      }
    }
  }
  return result;
}

std::vector<SchoolSpec> random_schools(std::mt19937_64 &rng, std::vector<AgentId> const &students,
                                       std::size_t count)
{
  std::vector<SchoolSpec> schools;
  for (std::size_t s = 0; s < count; ++s)
  {
    auto priority = students;
    std::shuffle(priority.begin(), priority.end(), rng);
    schools.push_back({"S" + std::to_string(s), static_cast<std::uint32_t>(rng() % 3), priority});
  }
  return schools;
}

std::vector<PreferenceRanking> random_prefs(std::mt19937_64 &rng, std::vector<AgentId> const &students,
                                            std::vector<SchoolSpec> const &schools)
{
  std::vector<PreferenceRanking> prefs;
  for (auto const &student : students)
  {
    std::vector<SchoolId> all;
    for (auto const &s : schools)
      all.push_back(s.school);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(rng() % (all.size() + 1));
    prefs.push_back({student, all});
  }
  return prefs;
}

}  // namespace

TEST(boston, oxbridge_truthful_outcome)
{
  auto const prefs = oxbridge_truth();
  auto const m     = boston(prefs, oxbridge());
  EXPECT_EQ(m.school_of("Alice"), "Oxford");
  EXPECT_EQ(m.school_of("Bob"), std::nullopt);
  EXPECT_EQ(m.school_of("Carol"), "Cambridge");
  EXPECT_EQ(m.round_assigned.at("Alice"), 1u);
  EXPECT_EQ(m.round_assigned.at("Carol"), 1u);
  EXPECT_EQ(m.round_assigned.count("Bob"), 0u);
}

TEST(boston, oxbridge_informed_misreport)
{
  auto prefs       = oxbridge_truth();
  prefs[1].ranking = {"Cambridge", "Oxford"};
  auto const m     = boston(prefs, oxbridge());
  EXPECT_EQ(m.school_of("Alice"), "Oxford");
  EXPECT_EQ(m.school_of("Bob"), "Cambridge");
  EXPECT_EQ(m.school_of("Carol"), std::nullopt);

  auto const truth = oxbridge_truth()[1];
  EXPECT_EQ(rank_utility(truth, std::nullopt, 2), -3);
  EXPECT_EQ(rank_utility(truth, "Cambridge", 2), -2);
  EXPECT_EQ(rank_utility(truth, "Oxford", 2), -1);
}

TEST(boston, single_student_gets_first_choice)
{
  std::vector<PreferenceRanking> const prefs{{"x", {"B", "A"}}};
  std::vector<SchoolSpec> const        schools{{"A", 1, {"x"}}, {"B", 1, {"x"}}};
  EXPECT_EQ(boston(prefs, schools).school_of("x"), "B");
}

TEST(boston, rejects_malformed_inputs)
{
  auto schools = oxbridge();
  EXPECT_THROW((void)boston(std::vector<PreferenceRanking>{{"Alice", {"Harvard"}}}, schools),
               ValidationError);
  EXPECT_THROW((void)boston(std::vector<PreferenceRanking>{{"Alice", {"Oxford", "Oxford"}}}, schools),
               ValidationError);
  EXPECT_THROW((void)boston(std::vector<PreferenceRanking>{{"Dave", {"Oxford"}}}, schools),
               ValidationError);
}

TEST(boston, matches_reference_and_basic_properties)
{
  std::mt19937_64 rng{31};
  for (int trial = 0; trial < 500; ++trial)
  {
    std::vector<AgentId> students;
    for (std::size_t i = 0; i < 1 + rng() % 7; ++i)
      students.push_back("st" + std::to_string(i));
    auto const schools = random_schools(rng, students, 1 + rng() % 4);
    auto const prefs   = random_prefs(rng, students, schools);
    auto const m       = boston(prefs, schools);

    EXPECT_EQ(m.assignment, reference_boston(prefs, schools));

    std::map<SchoolId, std::uint32_t> filled;
    for (auto const &p : prefs)
    {
      auto const school = m.school_of(p.student);
      if (!school)
        continue;
      ++filled[*school];
      // individually rational: only listed schools, at the round of their rank
      auto const pos = std::find(p.ranking.begin(), p.ranking.end(), *school);
      ASSERT_NE(pos, p.ranking.end());
      EXPECT_EQ(m.round_assigned.at(p.student), static_cast<std::uint32_t>(pos - p.ranking.begin() + 1));
    }
    for (auto const &s : schools)
      EXPECT_LE(filled[s.school], s.capacity);

    // a student whose first choice has room for every first-round applicant gets it
    for (auto const &p : prefs)
    {
      if (p.ranking.empty())
        continue;
      auto const cap = std::find_if(schools.begin(), schools.end(),
                                    [&](SchoolSpec const &s) { return s.school == p.ranking[0]; })
                           ->capacity;
      auto const demand = std::count_if(prefs.begin(), prefs.end(), [&](PreferenceRanking const &q) {
        return !q.ranking.empty() && q.ranking[0] == p.ranking[0];
      });
      if (static_cast<std::uint32_t>(demand) <= cap)
      {
        EXPECT_EQ(m.school_of(p.student), p.ranking[0]);
      }
    }
  }
}

TEST(lottery, priorities_follow_beacon_permutations)
{
  std::vector<SchoolSpec> const schools{{"N", 1, {}}, {"S", 1, {}}};
  BeaconOutput const            out{12345, {"a"}};

  auto const per = lottery_priorities({"c", "a", "b"}, schools, out, LotteryMode::PerSchoolLottery);
  EXPECT_EQ(per[0].priority, (std::vector<AgentId>{"a", "c", "b"}));
  EXPECT_EQ(per[1].priority, (std::vector<AgentId>{"b", "c", "a"}));

  auto const single = lottery_priorities({"a", "b", "c"}, schools, out, LotteryMode::SingleLottery);
  EXPECT_EQ(single[0].priority, (std::vector<AgentId>{"a", "c", "b"}));
  EXPECT_EQ(single[1].priority, single[0].priority);
}

TEST(ranking_codec, round_trip_and_errors)
{
  auto const schools = oxbridge();
  std::vector<SchoolId> const ranking{"Cambridge", "Oxford"};
  auto const bytes = encode_ranking(ranking, schools);
  EXPECT_EQ(bytes, (Bytes{2, 1, 0}));
  EXPECT_EQ(decode_ranking(bytes, schools), ranking);
  EXPECT_EQ(decode_ranking(Bytes{0}, schools), std::vector<SchoolId>{});
  EXPECT_THROW((void)decode_ranking(Bytes{1, 5}, schools), ValidationError);
  EXPECT_THROW((void)decode_ranking(Bytes{2, 0}, schools), ValidationError);
  EXPECT_THROW((void)decode_ranking(Bytes{2, 0, 0}, schools), ValidationError);
}

namespace {

void all_lists(std::vector<SchoolId> const &pool, std::vector<SchoolId> &current,
               std::vector<std::vector<SchoolId>> &out)
{
  out.push_back(current);
  for (auto const &s : pool)
  {
    if (std::find(current.begin(), current.end(), s) != current.end())
      continue;
    current.push_back(s);
    all_lists(pool, current, out);
    current.pop_back();
  }
}

}  // namespace

TEST(best_response, matches_brute_force_optimum)
{
  std::mt19937_64 rng{64};
  for (int trial = 0; trial < 150; ++trial)
  {
    std::vector<AgentId> students;
    for (std::size_t i = 0; i < 2 + rng() % 4; ++i)
      students.push_back("st" + std::to_string(i));
    auto const schools = random_schools(rng, students, 1 + rng() % 3);
    auto       prefs   = random_prefs(rng, students, schools);
    auto const truth   = prefs[0];
    std::vector<PreferenceRanking> const others(prefs.begin() + 1, prefs.end());

    std::vector<SchoolId> pool;
    for (auto const &s : schools)
      pool.push_back(s.school);
    std::vector<std::vector<SchoolId>> lists;
    std::vector<SchoolId>              scratch;
    all_lists(pool, scratch, lists);

    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for (auto const &list : lists)
    {
      prefs[0].ranking = list;
      auto const got   = reference_boston(prefs, schools)[truth.student];
      best             = std::max(best, rank_utility(truth, got, schools.size()));
    }
    prefs[0] = truth;
    auto const truthful = rank_utility(truth, reference_boston(prefs, schools)[truth.student], schools.size());

    auto const response = best_response_ranking(truth, others, schools);
    prefs[0]            = response;
    auto const achieved = rank_utility(truth, reference_boston(prefs, schools)[truth.student], schools.size());
    prefs[0]            = truth;

    EXPECT_EQ(achieved, best);
    if (truthful == best)
    {
      EXPECT_EQ(response.ranking, truth.ranking);
    }
  }
}
