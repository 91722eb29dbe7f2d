// Command-line front end: validate, analyze, plan, simulate, compare.

#include "ptampc/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace ptampc;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUnsat = 2;

int write_output(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write '" << output << "'\n";
    return kExitUsage;
  }
  out << text;
  return kExitOk;
}

std::set<StateId> as_set(const Path& p) { return {p.begin(), p.end()}; }

int cmd_validate(const std::string& fixture) {
  auto a = io::load_fixture(fixture);
  auto layout = partition(a);
  std::cout << "valid: " << a.states().size() << " states, " << a.edges().size() << " edges, " << layout.k()
            << " redundant paths\n";
  return kExitOk;
}

int cmd_analyze(const std::string& fixture, const std::string& path_text, const std::string& failed, bool as_json) {
  auto a = io::load_fixture(fixture).with_failed(as_set(parse_path(failed)));
  auto profile = risk_profile(a, partition(a), parse_path(path_text));
  std::cout << (as_json ? io::profile_to_json(profile).dump(2) + "\n" : io::format_profile(profile));
  return kExitOk;
}

int cmd_plan(const std::string& fixture, const std::string& start, const std::string& controller, double beta,
             const std::string& failed) {
  auto a = io::load_fixture(fixture);
  auto kind = parse_controller(controller);
  if (!kind) {
    std::cerr << "unknown controller '" << controller << "'\n";
    return kExitUsage;
  }
  auto objective = make_objective(*kind, beta);
  auto layout = update_operator(WorkingLayout(a), as_set(parse_path(failed)));

  ControllerMemory memory = initial_memory(a);
  memory.current = start.empty() ? a.initial() : StateId(start);
  memory.executed = {memory.current};
  auto [outcome, next] = mpc_step(memory, layout, objective);
  if (outcome.kind == StepKind::Unsat) {
    std::cout << "UNSAT (" << to_string(*outcome.cause) << ") at " << memory.current << "\n";
    return kExitUnsat;
  }
  if (!outcome.planned_path) {
    std::cout << "already at the last desired state " << memory.current << "\n";
    return kExitOk;
  }
  std::cout << io::format_plan(*outcome.planned_path);
  return kExitOk;
}

int cmd_simulate(const std::string& scenario_name, bool all_controllers, const std::string& format,
                 const std::string& output) {
  auto scenario = io::load_scenario(scenario_name);
  if (all_controllers) scenario.controllers = {ControllerKind::Plain, ControllerKind::CB, ControllerKind::PCM};
  auto report = simulate(scenario);
  auto fmt = format == "csv" ? io::ReportFormat::Csv : io::ReportFormat::Text;
  if (int rc = write_output(io::emit_comparison(report, fmt), output); rc != kExitOk) return rc;
  if (all_controllers) return kExitOk;
  for (const auto& r : report.runs) {
    if (r.status == RunStatus::Unsat) return kExitUnsat;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-averse MPC over priced timed automata of manufacturing layouts"};
  app.require_subcommand(1);

  std::string fixture, path_text, failed, start, controller = "pcm", scenario, format = "text", output;
  double beta = 1.0;
  bool as_json = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check a fixture against the model invariants");
  validate_cmd->add_option("fixture", fixture, "Fixture file or bundled name")->required();

  auto* analyze_cmd = app.add_subcommand("analyze", "Print the risk profile of a path");
  analyze_cmd->add_option("fixture", fixture, "Fixture file or bundled name")->required();
  analyze_cmd->add_option("--path", path_text, "Comma-separated state ids")->required();
  analyze_cmd->add_option("--failed", failed, "Comma-separated failed states");
  analyze_cmd->add_flag("--json", as_json, "Emit JSON instead of aligned text");

  auto* plan_cmd = app.add_subcommand("plan", "Compute one controller plan");
  plan_cmd->add_option("fixture", fixture, "Fixture file or bundled name")->required();
  plan_cmd->add_option("--start", start, "Start state (default: fixture initial state)");
  plan_cmd->add_option("--controller", controller, "plain | cb | pcm")
      ->check(CLI::IsMember({"plain", "cb", "pcm"}));
  plan_cmd->add_option("--beta", beta, "Risk significance factor (>= 0)");
  plan_cmd->add_option("--failed", failed, "Comma-separated failed states (enables redundant paths)");

  auto* simulate_cmd = app.add_subcommand("simulate", "Run the controllers listed in a scenario");
  auto* compare_cmd = app.add_subcommand("compare", "Run plain, cb and pcm on a scenario");
  for (auto* cmd : {simulate_cmd, compare_cmd}) {
    cmd->add_option("scenario", scenario, "Scenario file or bundled name")->required();
    cmd->add_option("--format", format, "text | csv")->check(CLI::IsMember({"text", "csv"}));
    cmd->add_option("-o,--output", output, "Write to a file instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(fixture);
    if (*analyze_cmd) return cmd_analyze(fixture, path_text, failed, as_json);
    if (*plan_cmd) return cmd_plan(fixture, start, controller, beta, failed);
    if (*simulate_cmd) return cmd_simulate(scenario, false, format, output);
    if (*compare_cmd) return cmd_simulate(scenario, true, format, output);
  } catch (const io::LoadError& e) {
    std::cerr << e.what() << "\n";
    return e.exit_code();
  } catch (const PtaError& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidScenario ? 5 : kExitUsage;
  }
  return kExitUsage;
}
