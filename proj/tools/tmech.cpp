// Scenario runner for the commit-reveal mechanism simulator.

#include "tmech/report.hpp"
#include "tmech/uniformity.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iomanip>
#include <iostream>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitInvariant  = 2;

std::filesystem::path default_out_dir()
{
  if (char const *env = std::getenv("TMECH_OUT_DIR"); env != nullptr && *env != '\0')
  {
    return env;
  }
  return "reports";
}

int cmd_run(std::string const &file, std::string const &mode, std::filesystem::path const &out)
{
  auto const scenario = tmech::load_scenario(file);

  std::vector<tmech::ExecutionMode> modes;
  if (mode.empty() || mode == "centralized")
  {
    modes.push_back(tmech::ExecutionMode::CentralizedSequential);
  }
  if (mode.empty() || mode == "decentralized")
  {
    modes.push_back(tmech::ExecutionMode::DecentralizedCommitReveal);
  }

  auto const report = tmech::run_scenario(scenario, modes);
  tmech::write_report(report, out);
  std::cout << tmech::render_text(report);
  std::cout << "\nreport written to " << (out / (report.scenario + ".report.json")).string() << '\n';
  return 0;
}

int cmd_attack_suite(std::filesystem::path const &out)
{
  auto const rows = tmech::run_attack_suite();
  std::filesystem::create_directories(out);
  {
    std::ofstream js{out / "attack-suite.json", std::ios::binary};
    js << tmech::to_json(rows).dump(2) << '\n';
  }
  auto const text = tmech::render_text(rows);
  {
    std::ofstream txt{out / "attack-suite.txt", std::ios::binary};
    txt << text;
  }
  std::cout << text;

  for (auto const &row : rows)
  {
    if (row.mode == tmech::ExecutionMode::DecentralizedCommitReveal && row.coalition_gain != tmech::Rational{0})
    {
      std::cerr << "invariant violated: decentralized gain for " << row.scenario << " is "
                << tmech::to_string(row.coalition_gain) << '\n';
      return kExitInvariant;
    }
  }
  return 0;
}

int cmd_uniformity(std::size_t trials, std::uint64_t seed)
{
  std::array<std::uint64_t, 4> const constants{0, 1, 0xDEADBEEF, ~std::uint64_t{0}};
  auto const r = tmech::beacon_uniformity(trials, seed, constants);
  std::cout << "trials:         " << r.trials << '\n'
            << "chi-square:     " << std::fixed << std::setprecision(3) << r.chi_square << " (63 df)\n"
            << "critical value: " << r.critical_value << " at significance " << r.significance << '\n'
            << "p-value:        " << std::setprecision(6) << r.p_value << '\n'
            << "result:         " << (r.passes() ? "uniform" : "NOT uniform") << '\n';
  return r.passes() ? 0 : kExitInvariant;
}

int cmd_export(std::filesystem::path const &dir)
{
  std::filesystem::create_directories(dir);
  for (auto const &s : tmech::bundled_scenarios())
  {
    std::ofstream f{dir / (s.name + ".json"), std::ios::binary};
    f << tmech::dump_scenario(s);
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Commit-reveal mechanism simulator"};
  app.require_subcommand(1);

  std::string           scenario_file;
  std::string           mode;
  std::filesystem::path out = default_out_dir();
  auto *run = app.add_subcommand("run", "Run a scenario and write its report");
  run->add_option("scenario", scenario_file, "Scenario file (JSON)")->required();
  run->add_option("--mode", mode, "Execution mode (default: both)")
      ->check(CLI::IsMember({"centralized", "decentralized"}));
  run->add_option("--out", out, "Output directory (default: $TMECH_OUT_DIR or ./reports)");

  auto *suite = app.add_subcommand("attack-suite", "Run every bundled strategy in both modes");
  suite->add_option("--out", out, "Output directory (default: $TMECH_OUT_DIR or ./reports)");

  std::size_t   trials = 100'000;
  std::uint64_t seed   = 1;
  auto *uniformity = app.add_subcommand("beacon-uniformity", "Chi-square test of beacon output");
  uniformity->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
  uniformity->add_option("--seed", seed, "Seed of the honest contributor");

  std::filesystem::path export_dir = "scenarios";
  auto *exporter = app.add_subcommand("export-scenarios", "Write the bundled scenarios as files");
  exporter->add_option("dir", export_dir, "Target directory");

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  try
  {
    if (*run)
      return cmd_run(scenario_file, mode, out);
    if (*suite)
      return cmd_attack_suite(out);
    if (*uniformity)
      return cmd_uniformity(trials, seed);
    if (*exporter)
      return cmd_export(export_dir);
  }
  catch (tmech::ValidationError const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  catch (tmech::InvariantViolation const &e)
  {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  }
  catch (std::exception const &e)
  {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return 0;
}
