#pragma once

#include "tmech/adversary.hpp"

#include <filesystem>

namespace tmech {

nlohmann::json to_json(Settlement const &s);
nlohmann::json to_json(ManipulationReport const &report);

// Full report of a scenario across the requested execution modes.
struct ScenarioReport
{
  std::string                     scenario;
  std::vector<ManipulationReport> runs;
};

ScenarioReport run_scenario(Scenario const &scenario, std::vector<ExecutionMode> const &modes);

nlohmann::json to_json(ScenarioReport const &report);
std::string    render_text(ScenarioReport const &report);

// Writes <dir>/<scenario>.report.json and <dir>/<scenario>.report.txt.
void write_report(ScenarioReport const &report, std::filesystem::path const &dir);

struct SuiteRow
{
  std::string   scenario;
  LeakKind      strategy = LeakKind::FPATellTopTheSecond;
  ExecutionMode mode     = ExecutionMode::CentralizedSequential;
  Rational      coalition_gain;
  Rational      seller_delta;
  bool          outcome_changed = false;
};

// Every bundled scenario carrying an adversary, run in both modes.
std::vector<SuiteRow> run_attack_suite();

nlohmann::json to_json(std::vector<SuiteRow> const &rows);
std::string    render_text(std::vector<SuiteRow> const &rows);

}  // namespace tmech
