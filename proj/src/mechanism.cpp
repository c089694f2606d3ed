#include "tmech/mechanism.hpp"

#include <algorithm>

namespace tmech {

bool MechanismKind::is_auction() const noexcept
{
  return tag == MechanismTag::FirstPrice || tag == MechanismTag::SecondPrice ||
         tag == MechanismTag::Gsp;
}

bool MechanismKind::carries_contribution() const noexcept
{
  if (is_auction())
  {
    return tie_break == TieBreakMode::Beacon;
  }
  if (tag == MechanismTag::Boston)
  {
    return priorities != PriorityMode::Fixed;
  }
  return false;
}

void MechanismKind::validate() const
{
  if (tag == MechanismTag::Gsp)
  {
    // re-run the SlotCTRs checks on whatever was stored
    SlotCTRs{ctrs.rates()};
  }
  if (tag == MechanismTag::Boston)
  {
    if (schools.empty())
    {
      throw ValidationError{"school choice needs at least one school"};
    }
    if (schools.size() > 255)
    {
      throw ValidationError{"at most 255 schools fit the ranking encoding"};
    }
    for (std::size_t i = 0; i < schools.size(); ++i)
    {
      for (std::size_t j = 0; j < i; ++j)
      {
        if (schools[i].school == schools[j].school)
        {
          throw ValidationError{"school '" + schools[i].school + "' is listed twice"};
        }
      }
    }
  }
}

Bytes encode_report(MechanismKind const &kind, Report const &report)
{
  Bytes out;
  switch (kind.tag)
  {
  case MechanismTag::Beacon:
    if (!report.contribution)
    {
      throw ValidationError{"beacon report needs a contribution"};
    }
    return encode_contribution(*report.contribution);
  case MechanismTag::FirstPrice:
  case MechanismTag::SecondPrice:
  case MechanismTag::Gsp:
    if (!report.bid)
    {
      throw ValidationError{"auction report needs a bid"};
    }
    out = encode_bid(*report.bid);
    break;
  case MechanismTag::Boston:
    if (!report.ranking)
    {
      throw ValidationError{"school choice report needs a ranking"};
    }
    out = encode_ranking(*report.ranking, kind.schools);
    break;
  }
  if (kind.carries_contribution())
  {
    if (!report.contribution)
    {
      throw ValidationError{"this mechanism's reports carry a beacon contribution"};
    }
    auto const c = encode_contribution(*report.contribution);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

Report decode_report(MechanismKind const &kind, std::span<std::uint8_t const> bytes)
{
  Report r;
  if (kind.tag == MechanismTag::Beacon)
  {
    r.contribution = decode_contribution(bytes);
    return r;
  }
  std::size_t const trailer = kind.carries_contribution() ? 8 : 0;
  if (bytes.size() < trailer)
  {
    throw ValidationError{"report payload too short"};
  }
  auto const body = bytes.first(bytes.size() - trailer);
  if (kind.is_auction())
  {
    r.bid = decode_bid(body);
  }
  else
  {
    r.ranking = decode_ranking(body, kind.schools);
  }
  if (trailer != 0)
  {
    r.contribution = decode_contribution(bytes.last(trailer));
  }
  return r;
}

namespace {

std::vector<SchoolSpec> identifier_priorities(std::vector<AgentId> students,
                                              std::vector<SchoolSpec> schools)
{
  std::sort(students.begin(), students.end());
  for (auto &s : schools)
  {
    s.priority = students;
  }
  return schools;
}

}  // namespace

Settlement settle(MechanismKind const &kind, SettlementInput const &input)
{
  Settlement out;
  out.tag      = kind.tag;
  out.excluded = input.excluded;

  std::map<AgentId, Report> reports;
  for (auto const &[agent, payload] : input.payloads)
  {
    reports.emplace(agent, decode_report(kind, payload));
    out.participants.push_back(agent);
  }

  if (kind.tag == MechanismTag::Beacon || kind.carries_contribution())
  {
    std::map<AgentId, BeaconContribution> contributions;
    for (auto const &[agent, report] : reports)
    {
      contributions[agent] = *report.contribution;
    }
    out.beacon            = aggregate(contributions);
    out.degenerate_beacon = out.beacon->degenerate();
  }

  if (kind.is_auction())
  {
    if (reports.empty())
    {
      return out;
    }
    std::vector<Bid> bids;
    for (auto const &[agent, report] : reports)
    {
      bids.push_back({agent, *report.bid});
    }
    TieBreak tie_break = TieBreak::identifier_order();
    if (kind.tie_break == TieBreakMode::Beacon && out.beacon && !out.beacon->degenerate())
    {
      auto const perm = derive_permutation(*out.beacon, out.participants.size());
      tie_break       = TieBreak::from_permutation(out.participants, perm);
    }
    for (auto const &b : rank_bids(bids, tie_break))
    {
      out.bid_order.push_back(b.agent);
    }

    switch (kind.tag)
    {
    case MechanismTag::FirstPrice:
      out.auction = first_price(bids, tie_break);
      break;
    case MechanismTag::SecondPrice:
      out.auction = second_price(bids, tie_break);
      break;
    default:
      if (bids.size() > kind.ctrs.size())
      {
        out.auction = gsp(bids, kind.ctrs, tie_break);
      }
      else if (bids.size() == 1)
      {
        // sole bidder takes the top slot at price 0, as in the single-item rule
        out.auction = second_price(bids, tie_break);
        out.auction->basis = PaymentBasis::PerClick;
      }
      else
      {
        // fewer bidders than slots after exclusion: fill the top n-1 slots
        std::vector<Rational> rates(kind.ctrs.rates().begin(),
                                    kind.ctrs.rates().begin() +
                                        static_cast<std::ptrdiff_t>(bids.size() - 1));
        out.auction = gsp(bids, SlotCTRs{std::move(rates)}, tie_break);
      }
      break;
    }
    return out;
  }

  if (kind.tag == MechanismTag::Boston)
  {
    switch (kind.priorities)
    {
    case PriorityMode::Fixed:
      out.schools = kind.schools;
      break;
    case PriorityMode::SingleLottery:
    case PriorityMode::PerSchoolLottery:
      if (out.degenerate_beacon)
      {
        out.schools = identifier_priorities(input.roster, kind.schools);
      }
      else
      {
        out.schools = lottery_priorities(input.roster, kind.schools, *out.beacon,
                                         kind.priorities == PriorityMode::SingleLottery
                                             ? LotteryMode::SingleLottery
                                             : LotteryMode::PerSchoolLottery);
      }
      break;
    }
    std::vector<PreferenceRanking> prefs;
    for (auto const &[agent, report] : reports)
    {
      prefs.push_back({agent, *report.ranking});
    }
    out.matching = boston(prefs, out.schools);
  }
  return out;
}

}  // namespace tmech
