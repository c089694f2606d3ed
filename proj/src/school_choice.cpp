#include "tmech/school_choice.hpp"

#include <algorithm>
#include <set>

namespace tmech {

std::optional<SchoolId> Matching::school_of(AgentId const &student) const
{
  auto const it = assignment.find(student);
  return it == assignment.end() ? std::nullopt : it->second;
}

namespace {

void validate(std::span<PreferenceRanking const> prefs, std::span<SchoolSpec const> schools)
{
  std::set<SchoolId> known;
  for (auto const &s : schools)
  {
    if (!known.insert(s.school).second)
    {
      throw ValidationError{"school '" + s.school + "' is listed twice"};
    }
  }
  std::set<AgentId> students;
  for (auto const &p : prefs)
  {
    if (!students.insert(p.student).second)
    {
      throw ValidationError{"student '" + p.student + "' submitted more than one ranking"};
    }
    std::set<SchoolId> seen;
    for (auto const &school : p.ranking)
    {
      if (known.count(school) == 0)
      {
        throw ValidationError{"student '" + p.student + "' ranks unknown school '" + school + "'"};
      }
      if (!seen.insert(school).second)
      {
        throw ValidationError{"student '" + p.student + "' ranks school '" + school + "' twice"};
      }
    }
  }
  for (auto const &s : schools)
  {
    for (auto const &student : students)
    {
      if (std::find(s.priority.begin(), s.priority.end(), student) == s.priority.end())
      {
        throw ValidationError{"school '" + s.school + "' has no priority for student '" + student +
                              "'"};
      }
    }
  }
}

}  // namespace

Matching boston(std::span<PreferenceRanking const> prefs, std::span<SchoolSpec const> schools)
{
  validate(prefs, schools);

  Matching m;
  for (auto const &p : prefs)
  {
    m.assignment[p.student] = std::nullopt;
  }

  std::map<SchoolId, std::uint32_t> seats;
  for (auto const &s : schools)
  {
    seats[s.school] = s.capacity;
  }

  std::size_t rounds = 0;
  for (auto const &p : prefs)
  {
    rounds = std::max(rounds, p.ranking.size());
  }

  for (std::size_t r = 0; r < rounds; ++r)
  {
    for (auto const &s : schools)
    {
      // applicants in priority order
      for (auto const &student : s.priority)
      {
        if (seats[s.school] == 0)
        {
          break;
        }
        auto const it = std::find_if(prefs.begin(), prefs.end(),
                                     [&](auto const &p) { return p.student == student; });
        if (it == prefs.end() || m.assignment[student].has_value() || it->ranking.size() <= r ||
            it->ranking[r] != s.school)
        {
          continue;
        }
        m.assignment[student]     = s.school;
        m.round_assigned[student] = static_cast<std::uint32_t>(r + 1);
        --seats[s.school];
      }
    }
  }
  return m;
}

std::vector<SchoolSpec> lottery_priorities(std::vector<AgentId> students,
                                           std::vector<SchoolSpec> schools,
                                           BeaconOutput const &output, LotteryMode mode)
{
  std::sort(students.begin(), students.end());
  if (students.empty())
  {
    for (auto &s : schools)
    {
      s.priority.clear();
    }
    return schools;
  }

  auto const order = [&](std::uint64_t domain) {
    auto const           perm = derive_permutation(output, students.size(), domain);
    std::vector<AgentId> priority;
    priority.reserve(perm.size());
    for (auto idx : perm)
    {
      priority.push_back(students[idx]);
    }
    return priority;
  };

  for (std::size_t i = 0; i < schools.size(); ++i)
  {
    schools[i].priority = order(mode == LotteryMode::SingleLottery ? 0 : i);
  }
  return schools;
}

std::int64_t rank_utility(PreferenceRanking const &truth, std::optional<SchoolId> const &assigned,
                          std::size_t school_count)
{
  auto const worst = -static_cast<std::int64_t>(school_count) - 1;
  if (!assigned)
  {
    return worst;
  }
  auto const it = std::find(truth.ranking.begin(), truth.ranking.end(), *assigned);
  if (it == truth.ranking.end())
  {
    return worst;
  }
  return -static_cast<std::int64_t>(it - truth.ranking.begin()) - 1;
}

Bytes encode_ranking(std::span<SchoolId const> ranking, std::span<SchoolSpec const> schools)
{
  if (ranking.size() > 255 || schools.size() > 256)
  {
    throw ValidationError{"ranking too long for the one-byte encoding"};
  }
  Bytes out{static_cast<std::uint8_t>(ranking.size())};
  for (auto const &school : ranking)
  {
    auto const it = std::find_if(schools.begin(), schools.end(),
                                 [&](auto const &s) { return s.school == school; });
    if (it == schools.end())
    {
      throw ValidationError{"unknown school '" + school + "' in ranking"};
    }
    out.push_back(static_cast<std::uint8_t>(it - schools.begin()));
  }
  return out;
}

std::vector<SchoolId> decode_ranking(std::span<std::uint8_t const> bytes,
                                     std::span<SchoolSpec const> schools)
{
  if (bytes.empty() || bytes.size() != std::size_t{bytes[0]} + 1)
  {
    throw ValidationError{"ranking payload length does not match its length byte"};
  }
  std::vector<SchoolId> ranking;
  std::set<std::uint8_t> seen;
  for (std::size_t i = 1; i < bytes.size(); ++i)
  {
    if (bytes[i] >= schools.size())
    {
      throw ValidationError{"ranking references school index " + std::to_string(bytes[i]) +
                            " but only " + std::to_string(schools.size()) + " schools exist"};
    }
    if (!seen.insert(bytes[i]).second)
    {
      throw ValidationError{"ranking lists school index " + std::to_string(bytes[i]) + " twice"};
    }
    ranking.push_back(schools[bytes[i]].school);
  }
  return ranking;
}

}  // namespace tmech
