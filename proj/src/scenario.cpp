#include "tmech/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace tmech {

using nlohmann::json;

namespace {

struct LeakName
{
  LeakKind    kind;
  char const *name;
};

constexpr LeakName kLeakNames[] = {
    {LeakKind::FPATellTopTheSecond, "fpa-tell-top-the-second"},
    {LeakKind::SPARaiseSecondBelowTop, "spa-raise-second-below-top"},
    {LeakKind::GSPRaiseKPlusOne, "gsp-raise-k-plus-one"},
    {LeakKind::GSPDemoteTopBidder, "gsp-demote-top-bidder"},
    {LeakKind::BostonSellRankings, "boston-sell-rankings"},
    {LeakKind::MinerCensorReveals, "miner-censor-reveals"},
};

template <typename Enum>
struct EnumName
{
  Enum        value;
  char const *name;
};

constexpr EnumName<MechanismTag> kMechanismNames[] = {
    {MechanismTag::Beacon, "beacon"},
    {MechanismTag::FirstPrice, "first-price"},
    {MechanismTag::SecondPrice, "second-price"},
    {MechanismTag::Gsp, "gsp"},
    {MechanismTag::Boston, "boston"},
};

constexpr EnumName<TieBreakMode> kTieBreakNames[] = {
    {TieBreakMode::Identifier, "identifier"},
    {TieBreakMode::Beacon, "beacon"},
};

constexpr EnumName<PriorityMode> kPriorityNames[] = {
    {PriorityMode::Fixed, "fixed"},
    {PriorityMode::SingleLottery, "single-lottery"},
    {PriorityMode::PerSchoolLottery, "per-school-lottery"},
};

template <typename Enum, std::size_t N>
char const *name_of(EnumName<Enum> const (&table)[N], Enum value)
{
  for (auto const &e : table)
  {
    if (e.value == value)
    {
      return e.name;
    }
  }
  return "?";
}

// Field access with the JSON path carried into every error message.
class Field
{
public:
  Field(json const &node, std::string path)
    : node_{node}
    , path_{std::move(path)}
  {}

  [[noreturn]] void fail(std::string const &what) const
  {
    throw ValidationError{"scenario field '" + path_ + "': " + what};
  }

  bool has(char const *key) const { return node_.is_object() && node_.contains(key); }

  Field operator[](char const *key) const
  {
    if (!node_.is_object())
    {
      fail("expected an object");
    }
    if (!node_.contains(key))
    {
      throw ValidationError{"scenario field '" + child_path(key) + "': missing"};
    }
    return {node_.at(key), child_path(key)};
  }

  std::vector<Field> items() const
  {
    if (!node_.is_array())
    {
      fail("expected an array");
    }
    std::vector<Field> out;
    for (std::size_t i = 0; i < node_.size(); ++i)
    {
      out.emplace_back(node_[i], path_ + "[" + std::to_string(i) + "]");
    }
    return out;
  }

  std::string str() const
  {
    if (!node_.is_string())
    {
      fail("expected a string");
    }
    return node_.get<std::string>();
  }

  std::uint64_t u64() const
  {
    if (!node_.is_number_unsigned() && !(node_.is_number_integer() && node_.get<std::int64_t>() >= 0))
    {
      fail("expected a non-negative integer");
    }
    return node_.get<std::uint64_t>();
  }

  Rational rational() const
  {
    try
    {
      if (node_.is_number_integer())
      {
        return node_.get<std::int64_t>();
      }
      return parse_rational(str());
    }
    catch (ValidationError const &e)
    {
      fail(e.what());
    }
  }

  std::vector<std::string> strings() const
  {
    std::vector<std::string> out;
    for (auto const &item : items())
    {
      out.push_back(item.str());
    }
    return out;
  }

  template <typename Enum, std::size_t N>
  Enum choice(EnumName<Enum> const (&table)[N]) const
  {
    auto const s = str();
    for (auto const &e : table)
    {
      if (s == e.name)
      {
        return e.value;
      }
    }
    std::string options;
    for (auto const &e : table)
    {
      options += (options.empty() ? "" : ", ") + std::string{e.name};
    }
    fail("unknown value '" + s + "' (expected one of: " + options + ")");
  }

private:
  std::string child_path(char const *key) const
  {
    return path_.empty() ? std::string{key} : path_ + "." + key;
  }

  json const &node_;
  std::string path_;
};

MechanismKind mechanism_from_json(Field const &f)
{
  MechanismKind k;
  k.tag = f["kind"].choice(kMechanismNames);
  if (k.tag == MechanismTag::Gsp)
  {
    std::vector<Rational> rates;
    for (auto const &item : f["ctrs"].items())
    {
      rates.push_back(item.rational());
    }
    try
    {
      k.ctrs = SlotCTRs{std::move(rates)};
    }
    catch (ValidationError const &e)
    {
      f["ctrs"].fail(e.what());
    }
  }
  if (k.is_auction() && f.has("tie_break"))
  {
    k.tie_break = f["tie_break"].choice(kTieBreakNames);
  }
  if (k.tag == MechanismTag::Boston)
  {
    if (f.has("priorities"))
    {
      k.priorities = f["priorities"].choice(kPriorityNames);
    }
    for (auto const &s : f["schools"].items())
    {
      SchoolSpec spec;
      spec.school   = s["name"].str();
      auto capacity = s["capacity"].u64();
      if (capacity > 1'000'000)
      {
        s["capacity"].fail("capacity too large");
      }
      spec.capacity = static_cast<std::uint32_t>(capacity);
      if (s.has("priority"))
      {
        spec.priority = s["priority"].strings();
      }
      k.schools.push_back(std::move(spec));
    }
  }
  return k;
}

json mechanism_to_json(MechanismKind const &k)
{
  json j;
  j["kind"] = name_of(kMechanismNames, k.tag);
  if (k.tag == MechanismTag::Gsp)
  {
    json rates = json::array();
    for (auto const &r : k.ctrs.rates())
    {
      rates.push_back(to_string(r));
    }
    j["ctrs"] = rates;
  }
  if (k.is_auction())
  {
    j["tie_break"] = name_of(kTieBreakNames, k.tie_break);
  }
  if (k.tag == MechanismTag::Boston)
  {
    j["priorities"] = name_of(kPriorityNames, k.priorities);
    json schools    = json::array();
    for (auto const &s : k.schools)
    {
      json js{{"name", s.school}, {"capacity", s.capacity}};
      if (k.priorities == PriorityMode::Fixed)
      {
        js["priority"] = s.priority;
      }
      schools.push_back(js);
    }
    j["schools"] = schools;
  }
  return j;
}

}  // namespace

char const *to_string(LeakKind kind) noexcept
{
  for (auto const &e : kLeakNames)
  {
    if (e.kind == kind)
    {
      return e.name;
    }
  }
  return "?";
}

LeakKind parse_leak_kind(std::string const &name)
{
  for (auto const &e : kLeakNames)
  {
    if (name == e.name)
    {
      return e.kind;
    }
  }
  throw ValidationError{"unknown adversary strategy '" + name + "'"};
}

void check_compatible(LeakStrategy const &strategy, MechanismKind const &mechanism)
{
  auto const mismatch = [&](char const *needs) {
    throw ValidationError{std::string{"strategy "} + to_string(strategy.kind) + " requires " +
                          needs + " mechanism, scenario uses " +
                          name_of(kMechanismNames, mechanism.tag)};
  };
  switch (strategy.kind)
  {
  case LeakKind::FPATellTopTheSecond:
    if (mechanism.tag != MechanismTag::FirstPrice)
      mismatch("a first-price");
    break;
  case LeakKind::SPARaiseSecondBelowTop:
    if (mechanism.tag != MechanismTag::SecondPrice)
      mismatch("a second-price");
    break;
  case LeakKind::GSPRaiseKPlusOne:
    if (mechanism.tag != MechanismTag::Gsp)
      mismatch("a GSP");
    break;
  case LeakKind::GSPDemoteTopBidder:
    if (mechanism.tag != MechanismTag::Gsp)
      mismatch("a GSP");
    if (mechanism.ctrs.size() < 2)
    {
      throw ValidationError{"gsp-demote-top-bidder needs at least two slots"};
    }
    break;
  case LeakKind::BostonSellRankings:
    if (mechanism.tag != MechanismTag::Boston)
      mismatch("a school choice");
    if (strategy.targets.size() != 1)
    {
      throw ValidationError{"boston-sell-rankings needs exactly one target student"};
    }
    if (mechanism.schools.size() > 6)
    {
      throw ValidationError{"boston-sell-rankings searches at most 6 schools"};
    }
    break;
  case LeakKind::MinerCensorReveals:
    if (strategy.targets.empty())
    {
      throw ValidationError{"miner-censor-reveals needs at least one target"};
    }
    break;
  }
}

AgentSpec const &Scenario::agent(AgentId const &id) const
{
  auto const it = std::find_if(agents.begin(), agents.end(), [&](auto const &a) { return a.id == id; });
  if (it == agents.end())
  {
    throw ValidationError{"unknown agent '" + id + "'"};
  }
  return *it;
}

void Scenario::validate() const
{
  if (name.empty())
  {
    throw ValidationError{"scenario needs a name"};
  }
  if (contract_id.empty() || contract_id.size() > 255)
  {
    throw ValidationError{"contract id must be 1..255 bytes"};
  }
  mechanism.validate();

  std::set<AgentId> ids;
  for (auto const &a : agents)
  {
    if (a.id.empty() || a.id.size() > 255)
    {
      throw ValidationError{"agent ids must be 1..255 bytes"};
    }
    if (!ids.insert(a.id).second)
    {
      throw ValidationError{"agent id '" + a.id + "' is not unique"};
    }
    if (mechanism.is_auction())
    {
      if (!a.bid)
      {
        throw ValidationError{"agent '" + a.id + "' needs a bid"};
      }
      if (*a.bid > kMaxTicks || a.valuation_or_bid() > kMaxTicks)
      {
        throw ValidationError{"agent '" + a.id + "' bid or valuation exceeds " +
                              std::to_string(kMaxTicks) + " ticks"};
      }
    }
    if (mechanism.tag == MechanismTag::Boston)
    {
      encode_ranking(a.ranking, mechanism.schools);  // unknown schools throw
      std::set<SchoolId> seen(a.ranking.begin(), a.ranking.end());
      if (seen.size() != a.ranking.size())
      {
        throw ValidationError{"agent '" + a.id + "' ranks a school twice"};
      }
    }
  }

  if (mechanism.tag == MechanismTag::Gsp && agents.size() <= mechanism.ctrs.size())
  {
    throw ValidationError{"GSP scenario needs more agents than slots"};
  }
  if (mechanism.tag == MechanismTag::Boston && mechanism.priorities == PriorityMode::Fixed)
  {
    for (auto const &s : mechanism.schools)
    {
      std::set<AgentId> prio(s.priority.begin(), s.priority.end());
      if (prio != ids || s.priority.size() != ids.size())
      {
        throw ValidationError{"school '" + s.school +
                              "' priority must list every student exactly once"};
      }
    }
  }

  if (adversary)
  {
    check_compatible(*adversary, mechanism);
    for (auto const &t : adversary->targets)
    {
      if (ids.count(t) == 0)
      {
        throw ValidationError{"adversary target '" + t + "' is not an agent"};
      }
    }
    if (adversary->kind == LeakKind::MinerCensorReveals && miner.mode != MinerPolicy::Mode::Honest)
    {
      throw ValidationError{"miner-censor-reveals brings its own miner; scenario miner must be honest"};
    }
  }
}

std::vector<HonestInput> honest_inputs(Scenario const &scenario)
{
  std::vector<AgentSpec> agents = scenario.agents;
  std::sort(agents.begin(), agents.end(), [](auto const &a, auto const &b) { return a.id < b.id; });

  HashStream               stream{scenario.seed, kSeedStreamDomain};
  std::vector<HonestInput> out;
  for (auto const &a : agents)
  {
    HonestInput in;
    in.agent = a.id;
    stream.fill(in.salt.bytes);
    std::uint64_t const drawn = stream.next_u64();

    auto const &kind = scenario.mechanism;
    if (kind.tag == MechanismTag::Beacon || kind.carries_contribution())
    {
      in.report.contribution = BeaconContribution{a.contribution.value_or(drawn)};
    }
    if (kind.is_auction())
    {
      in.report.bid = Money{*a.bid};
    }
    if (kind.tag == MechanismTag::Boston)
    {
      in.report.ranking = a.ranking;
    }
    out.push_back(std::move(in));
  }
  return out;
}

json to_json(Scenario const &s)
{
  json j;
  j["name"]        = s.name;
  j["contract_id"] = s.contract_id;
  j["seed"]        = s.seed;
  j["schedule"]    = {{"commit_deadline", s.schedule.commit_deadline()},
                      {"reveal_deadline", s.schedule.reveal_deadline()}};
  j["mechanism"]   = mechanism_to_json(s.mechanism);

  json agents = json::array();
  for (auto const &a : s.agents)
  {
    json ja{{"id", a.id}};
    if (a.bid)
      ja["bid"] = *a.bid;
    if (a.valuation)
      ja["valuation"] = *a.valuation;
    if (!a.ranking.empty())
      ja["ranking"] = a.ranking;
    if (a.contribution)
      ja["contribution"] = *a.contribution;
    agents.push_back(ja);
  }
  j["agents"] = agents;

  if (s.adversary)
  {
    json ja{{"kind", to_string(s.adversary->kind)}};
    if (!s.adversary->targets.empty())
      ja["targets"] = s.adversary->targets;
    if (s.adversary->kind == LeakKind::MinerCensorReveals)
      ja["censor_until"] = s.adversary->censor_until;
    j["adversary"] = ja;
  }

  if (s.miner.mode == MinerPolicy::Mode::Honest)
  {
    j["miner"] = {{"mode", "honest"}};
  }
  else
  {
    j["miner"] = {{"mode", "censor"},
                  {"targets", std::vector<AgentId>(s.miner.censor_targets.begin(),
                                                   s.miner.censor_targets.end())},
                  {"censor_until", s.miner.censor_until}};
  }
  return j;
}

Scenario scenario_from_json(json const &j)
{
  Field const root{j, ""};
  if (!j.is_object())
  {
    root.fail("scenario must be a JSON object");
  }

  Scenario s;
  s.name = root["name"].str();
  if (root.has("contract_id"))
  {
    s.contract_id = root["contract_id"].str();
  }
  if (root.has("seed"))
  {
    s.seed = root["seed"].u64();
  }
  try
  {
    s.schedule = PhaseSchedule{root["schedule"]["commit_deadline"].u64(),
                               root["schedule"]["reveal_deadline"].u64()};
  }
  catch (ValidationError const &e)
  {
    if (std::string{e.what()}.rfind("scenario field", 0) == 0)
    {
      throw;
    }
    root["schedule"].fail(e.what());
  }
  s.mechanism = mechanism_from_json(root["mechanism"]);

  for (auto const &f : root["agents"].items())
  {
    AgentSpec a;
    a.id = f["id"].str();
    if (f.has("bid"))
      a.bid = f["bid"].u64();
    if (f.has("valuation"))
      a.valuation = f["valuation"].u64();
    if (f.has("ranking"))
      a.ranking = f["ranking"].strings();
    if (f.has("contribution"))
      a.contribution = f["contribution"].u64();
    s.agents.push_back(std::move(a));
  }

  if (root.has("adversary") && !j.at("adversary").is_null())
  {
    auto const   f = root["adversary"];
    LeakStrategy st;
    try
    {
      st.kind = parse_leak_kind(f["kind"].str());
    }
    catch (ValidationError const &e)
    {
      f["kind"].fail(e.what());
    }
    if (f.has("targets"))
      st.targets = f["targets"].strings();
    if (f.has("censor_until"))
      st.censor_until = f["censor_until"].u64();
    s.adversary = st;
  }

  if (root.has("miner"))
  {
    auto const f    = root["miner"];
    auto const mode = f["mode"].str();
    if (mode == "censor")
    {
      auto const targets = f["targets"].strings();
      s.miner = MinerPolicy::censor({targets.begin(), targets.end()}, f["censor_until"].u64());
    }
    else if (mode != "honest")
    {
      f["mode"].fail("unknown value '" + mode + "' (expected honest or censor)");
    }
  }

  s.validate();
  return s;
}

Scenario parse_scenario(std::string const &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (json::parse_error const &e)
  {
    // locate the failing byte as line:column
    std::size_t line = 1;
    std::size_t col  = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
    {
      if (text[i] == '\n')
      {
        ++line;
        col = 1;
      }
      else
      {
        ++col;
      }
    }
    throw ValidationError{"scenario syntax error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what()};
  }
  return scenario_from_json(j);
}

Scenario load_scenario(std::filesystem::path const &path)
{
  std::ifstream in{path};
  if (!in)
  {
    throw ValidationError{"cannot open scenario file '" + path.string() + "'"};
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string dump_scenario(Scenario const &scenario)
{
  return to_json(scenario).dump(2) + "\n";
}

}  // namespace tmech
