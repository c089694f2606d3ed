#include "tmech/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace tmech {

using nlohmann::json;

namespace {

json rational_json(Rational const &r)
{
  return to_string(r);
}

char const *mechanism_name(MechanismTag tag)
{
  switch (tag)
  {
  case MechanismTag::Beacon:
    return "beacon";
  case MechanismTag::FirstPrice:
    return "first-price";
  case MechanismTag::SecondPrice:
    return "second-price";
  case MechanismTag::Gsp:
    return "gsp";
  case MechanismTag::Boston:
    return "boston";
  }
  return "?";
}

json run_json(RunResult const &r)
{
  json j;
  j["settlement"] = to_json(r.settlement);
  json u          = json::object();
  for (auto const &[agent, value] : r.utilities)
  {
    u[agent] = rational_json(value);
  }
  j["utilities"]      = u;
  j["seller_revenue"] = rational_json(r.seller_revenue);

  json rejections = json::array();
  for (auto const &rej : r.rejections)
  {
    rejections.push_back({{"height", rej.height},
                          {"agent", rej.agent},
                          {"kind", rej.kind == MessageKind::Commit ? "commit" : "reveal"},
                          {"reason", to_string(rej.reason)}});
  }
  j["rejections"] = rejections;

  json rebids = json::array();
  for (auto const &rb : r.rebids)
  {
    rebids.push_back({{"agent", rb.agent}, {"report_hex", to_hex(rb.report)}});
  }
  j["attempted_rebids"] = rebids;
  return j;
}

// Left-aligned text table.
class Table
{
public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string str() const
  {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (auto const &row : rows_)
    {
      for (std::size_t c = 0; c < row.size(); ++c)
      {
        width[c] = std::max(width[c], row[c].size());
      }
    }
    std::ostringstream out;
    for (std::size_t r = 0; r < rows_.size(); ++r)
    {
      for (std::size_t c = 0; c < rows_[r].size(); ++c)
      {
        out << (c == 0 ? "" : "  ") << std::left
            << std::setw(c + 1 == rows_[r].size() ? 0 : static_cast<int>(width[c])) << rows_[r][c];
      }
      out << '\n';
      if (r == 0)
      {
        std::size_t total = 0;
        for (auto w : width)
        {
          total += w + 2;
        }
        out << std::string(total - 2, '-') << '\n';
      }
    }
    return out.str();
  }

private:
  std::vector<std::vector<std::string>> rows_;
};

std::string allocation_summary(RunResult const &r)
{
  auto const &s = r.settlement;
  std::ostringstream out;
  if (s.auction)
  {
    for (std::size_t i = 0; i < s.auction->allocation.size(); ++i)
    {
      auto const &agent = s.auction->allocation[i];
      out << (i == 0 ? "" : ", ") << "slot" << i + 1 << "->" << agent << " @"
          << s.auction->payments.at(agent).ticks
          << (s.auction->basis == PaymentBasis::PerClick ? "/click" : "");
    }
  }
  else if (s.matching)
  {
    bool first = true;
    for (auto const &[student, school] : s.matching->assignment)
    {
      out << (first ? "" : ", ") << student << "->" << school.value_or("unassigned");
      first = false;
    }
  }
  else if (s.beacon)
  {
    out << "beacon=" << s.beacon->value;
  }
  else
  {
    out << "no allocation";
  }
  if (!s.excluded.empty())
  {
    out << " | excluded:";
    for (auto const &a : s.excluded)
    {
      out << ' ' << a;
    }
  }
  return out.str();
}

}  // namespace

json to_json(Settlement const &s)
{
  json j;
  j["mechanism"]    = mechanism_name(s.tag);
  j["participants"] = s.participants;
  j["excluded"]     = s.excluded;
  if (s.beacon)
  {
    j["beacon"] = {{"value", s.beacon->value}, {"contributors", s.beacon->contributors}};
  }
  j["degenerate_beacon"] = s.degenerate_beacon;
  if (!s.bid_order.empty())
  {
    j["bid_order"] = s.bid_order;
  }
  if (s.auction)
  {
    json slots = json::array();
    for (std::size_t i = 0; i < s.auction->allocation.size(); ++i)
    {
      auto const &agent = s.auction->allocation[i];
      slots.push_back({{"slot", i + 1}, {"agent", agent}, {"price", s.auction->payments.at(agent).ticks}});
    }
    j["allocation"]    = slots;
    j["payment_basis"] = s.auction->basis == PaymentBasis::PerClick ? "per-click" : "per-item";
  }
  if (s.matching)
  {
    json m = json::object();
    for (auto const &[student, school] : s.matching->assignment)
    {
      json entry{{"school", school ? json(*school) : json(nullptr)}};
      if (auto it = s.matching->round_assigned.find(student); it != s.matching->round_assigned.end())
      {
        entry["round"] = it->second;
      }
      m[student] = entry;
    }
    j["matching"] = m;
    json prio     = json::object();
    for (auto const &school : s.schools)
    {
      prio[school.school] = school.priority;
    }
    j["priorities"] = prio;
  }
  return j;
}

json to_json(ManipulationReport const &report)
{
  json j;
  j["mode"]     = to_string(report.mode);
  j["strategy"] = report.strategy ? json(to_string(report.strategy->kind)) : json(nullptr);
  j["honest"]   = run_json(report.honest);
  j["manipulated"] = run_json(report.manipulated);
  j["coalition"]   = report.coalition;
  json gains       = json::object();
  for (auto const &[party, value] : report.gain_per_party)
  {
    gains[party] = rational_json(value);
  }
  j["gain_per_party"]  = gains;
  j["coalition_gain"]  = rational_json(report.coalition_gain());
  j["outcome_changed"] = report.outcome_changed();
  j["notes"]           = report.notes;
  return j;
}

ScenarioReport run_scenario(Scenario const &scenario, std::vector<ExecutionMode> const &modes)
{
  ScenarioReport out;
  out.scenario = scenario.name;
  for (auto mode : modes)
  {
    out.runs.push_back(run_with_adversary(scenario, scenario.adversary, mode));
  }
  return out;
}

json to_json(ScenarioReport const &report)
{
  json runs = json::array();
  for (auto const &r : report.runs)
  {
    runs.push_back(to_json(r));
  }
  return {{"scenario", report.scenario}, {"runs", runs}};
}

std::string render_text(ScenarioReport const &report)
{
  std::ostringstream out;
  out << "scenario: " << report.scenario << '\n';
  for (auto const &run : report.runs)
  {
    out << '\n'
        << "mode: " << to_string(run.mode)
        << "  strategy: " << (run.strategy ? to_string(run.strategy->kind) : "none") << '\n';
    out << "honest:      " << allocation_summary(run.honest) << '\n';
    out << "manipulated: " << allocation_summary(run.manipulated) << '\n';

    Table t{{"party", "honest", "manipulated", "delta"}};
    for (auto const &[agent, u] : run.honest.utilities)
    {
      t.add({"agent:" + agent, to_string(u), to_string(run.manipulated.utilities.at(agent)),
             to_string(run.gain_per_party.at("agent:" + agent))});
    }
    t.add({"seller", to_string(run.honest.seller_revenue), to_string(run.manipulated.seller_revenue),
           to_string(run.gain_per_party.at("seller"))});
    std::string members;
    for (auto const &m : run.coalition)
    {
      members += (members.empty() ? "" : "+") + m;
    }
    t.add({"coalition" + (members.empty() ? std::string{} : "(" + members + ")"), "", "",
           to_string(run.coalition_gain())});
    out << t.str();
    if (!run.manipulated.rejections.empty())
    {
      out << "rejected messages:";
      for (auto const &rej : run.manipulated.rejections)
      {
        out << ' ' << rej.agent << '@' << rej.height << '(' << to_string(rej.reason) << ')';
      }
      out << '\n';
    }
    for (auto const &note : run.notes)
    {
      out << "note: " << note << '\n';
    }
  }
  return out.str();
}

void write_report(ScenarioReport const &report, std::filesystem::path const &dir)
{
  std::filesystem::create_directories(dir);
  auto const stem = dir / report.scenario;
  {
    std::ofstream js{stem.string() + ".report.json", std::ios::binary};
    js << to_json(report).dump(2) << '\n';
  }
  {
    std::ofstream txt{stem.string() + ".report.txt", std::ios::binary};
    txt << render_text(report);
  }
}

std::vector<SuiteRow> run_attack_suite()
{
  std::vector<SuiteRow> rows;
  for (auto const &scenario : bundled_scenarios())
  {
    if (!scenario.adversary)
    {
      continue;
    }
    for (auto mode : {ExecutionMode::CentralizedSequential, ExecutionMode::DecentralizedCommitReveal})
    {
      auto const rep = run_with_adversary(scenario, scenario.adversary, mode);
      rows.push_back({scenario.name, scenario.adversary->kind, mode, rep.coalition_gain(),
                      rep.gain_per_party.at("seller"), rep.outcome_changed()});
    }
  }
  return rows;
}

json to_json(std::vector<SuiteRow> const &rows)
{
  json out = json::array();
  for (auto const &r : rows)
  {
    out.push_back({{"scenario", r.scenario},
                   {"strategy", to_string(r.strategy)},
                   {"mode", to_string(r.mode)},
                   {"coalition_gain", rational_json(r.coalition_gain)},
                   {"seller_delta", rational_json(r.seller_delta)},
                   {"outcome_changed", r.outcome_changed}});
  }
  return out;
}

std::string render_text(std::vector<SuiteRow> const &rows)
{
  // one line per strategy, modes side by side
  Table t{{"scenario", "strategy", "centralized gain", "decentralized gain"}};
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2)
  {
    t.add({rows[i].scenario, to_string(rows[i].strategy), to_string(rows[i].coalition_gain),
           to_string(rows[i + 1].coalition_gain)});
  }
  return t.str();
}

}  // namespace tmech
