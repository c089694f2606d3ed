#pragma once

#include "tmech/beacon.hpp"
#include "tmech/types.hpp"

#include <map>
#include <optional>
#include <span>

namespace tmech {

struct PreferenceRanking
{
  AgentId               student;
  std::vector<SchoolId> ranking;  // most preferred first; unlisted schools are unacceptable

  bool operator==(PreferenceRanking const &) const = default;
};

struct SchoolSpec
{
  SchoolId             school;
  std::uint32_t        capacity = 0;
  std::vector<AgentId> priority;  // highest priority first

  bool operator==(SchoolSpec const &) const = default;
};

struct Matching
{
  std::map<AgentId, std::optional<SchoolId>> assignment;
  std::map<AgentId, std::uint32_t>           round_assigned;  // assigned students only, 1-based

  std::optional<SchoolId> school_of(AgentId const &student) const;

  bool operator==(Matching const &) const = default;
};

// Immediate acceptance: in round r every unassigned student applies to her r-th choice and
// each school admits applicants by priority up to its remaining seats. Seats are final.
Matching boston(std::span<PreferenceRanking const> prefs, std::span<SchoolSpec const> schools);

enum class LotteryMode : std::uint8_t
{
  SingleLottery,
  PerSchoolLottery
};

// Replaces every school's priority with a beacon-derived lottery over `students`
// (taken in identifier order). Single lottery uses permutation domain 0 for all schools;
// per-school lotteries use the school's index as the domain.
std::vector<SchoolSpec> lottery_priorities(std::vector<AgentId> students,
                                           std::vector<SchoolSpec> schools,
                                           BeaconOutput const &output, LotteryMode mode);

// Ordinal utility: -r for the school at true rank r (1-based); unassigned or an unlisted
// school scores -(school_count + 1).
std::int64_t rank_utility(PreferenceRanking const &truth, std::optional<SchoolId> const &assigned,
                          std::size_t school_count);

// Ranking payload: one length byte followed by school indices in rank order.
Bytes             encode_ranking(std::span<SchoolId const> ranking,
                                 std::span<SchoolSpec const> schools);
std::vector<SchoolId> decode_ranking(std::span<std::uint8_t const> bytes,
                                     std::span<SchoolSpec const> schools);

}  // namespace tmech
