// Licensed to the Apache Software Foundation (ASF) under one
// or more contributor license agreements.  See the NOTICE file
// distributed with this work for additional information
// regarding copyright ownership.  The ASF licenses this file
// to you under the Apache License, Version 2.0 (the
// "License"); you may not use this file except in compliance
// with the License.  You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <CLI11.hpp>

#include "psdsf/baselines.hpp"
#include "psdsf/kernel.hpp"
#include "psdsf/model.hpp"
#include "psdsf/properties.hpp"
#include "psdsf/scenario_io.hpp"
#include "psdsf/sim.hpp"
#include "psdsf/solver.hpp"

namespace psdsf {
namespace cli {

namespace {

// Raised for bad option values that CLI11 itself cannot catch.
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};


Mechanism mechanismOption(const std::string& value)
{
  const std::optional<Mechanism> mechanism = parseMechanism(value);
  if (!mechanism.has_value()) {
    throw UsageError("unknown mechanism '" + value + "'");
  }
  return *mechanism;
}


// Writes to the file when one is named, otherwise to `out`.
void emit(
    const std::string& path,
    const std::string& text,
    std::ostream& out)
{
  if (path.empty()) {
    out << text;
  } else {
    writeFile(path, text);
  }
}


void printVerdict(
    const std::string& label,
    const Verdict& verdict,
    std::ostream& out)
{
  out << label << ": " << (verdict.passed() ? "PASS" : "FAIL") << "\n";
  for (const Violation& violation : verdict.violations) {
    out << "  " << violation.subject << ": " << violation.description
        << " (measured " << formatNumber(violation.measured)
        << ", threshold " << formatNumber(violation.threshold) << ")\n";
  }
}


void printReport(const PropertyReport& report, std::ostream& out)
{
  const char* status = !report.passed()
    ? "FAIL"
    : (report.applicable ? "PASS" : "N/A");

  out << report.property << ": " << status;
  if (!report.note.empty()) {
    out << " (" << report.note << ")";
  }
  out << "\n";

  for (const Violation& violation : report.verdict.violations) {
    out << "  " << violation.subject << ": " << violation.description
        << " (measured " << formatNumber(violation.measured)
        << ", threshold " << formatNumber(violation.threshold) << ")\n";
  }
}


struct AllocateArgs
{
  std::string scenario;
  std::string mechanism;
  std::string out;
};


int allocate(const AllocateArgs& args, std::ostream& out)
{
  const Scenario scenario = loadScenario(args.scenario);
  const Mechanism mechanism = mechanismOption(args.mechanism);

  const MechanismResult result = runMechanism(scenario.spec, mechanism);
  emit(args.out, allocationCsv(scenario, result), out);
  return kExitSuccess;
}


struct VerifyArgs
{
  std::string scenario;
  std::string alloc;
  int theorem = 1;
};


int verify(const VerifyArgs& args, std::ostream& out)
{
  const Scenario scenario = loadScenario(args.scenario);
  const AllocationFile file = loadAllocationCsv(args.alloc, scenario);
  const GammaMatrix gamma = gammaMatrix(scenario.spec);

  Verdict feasibility;
  Verdict fixedPoint;
  if (args.theorem == 1) {
    feasibility = rdmFeasible(scenario.spec, file.allocation).verdict;
    fixedPoint = verifyPsdsfRdm(scenario.spec, gamma, file.allocation);
  } else {
    feasibility = tdmFeasible(scenario.spec, gamma, file.allocation).verdict;
    fixedPoint = verifyPsdsfTdm(scenario.spec, gamma, file.allocation);
  }

  printVerdict("feasible", feasibility, out);
  printVerdict("psdsf", fixedPoint, out);

  return feasibility.passed() && fixedPoint.passed()
    ? kExitSuccess
    : kExitFailure;
}


struct PropertiesArgs
{
  std::string scenario;
  std::string alloc;
  std::string mechanism;
  std::string mode;
  size_t trials = 100;
  uint64_t seed = 0;
};


int properties(const PropertiesArgs& args, std::ostream& out)
{
  const Scenario scenario = loadScenario(args.scenario);
  const AllocationFile file = loadAllocationCsv(args.alloc, scenario);
  const ClusterSpec& spec = scenario.spec;
  const GammaMatrix gamma = gammaMatrix(spec);

  std::optional<Mechanism> mechanism;
  if (!args.mechanism.empty()) {
    mechanism = mechanismOption(args.mechanism);
  }

  Multiplexing mode = overrideMatchesDemands(spec)
    ? Multiplexing::RDM
    : Multiplexing::TDM;
  if (mechanism == Mechanism::PSDSF_TDM) {
    mode = Multiplexing::TDM;
  }
  if (args.mode == "rdm") {
    mode = Multiplexing::RDM;
  } else if (args.mode == "tdm") {
    mode = Multiplexing::TDM;
  }

  std::vector<PropertyReport> reports;
  reports.push_back(checkSharingIncentive(spec, gamma, file.totals));
  reports.push_back(checkEnvyFreeness(spec, file.allocation));
  reports.push_back(checkPareto(spec, gamma, file.allocation, mode));
  reports.push_back(checkBottleneckFairness(spec, gamma, file.allocation));
  if (spec.numResources() == 1) {
    reports.push_back(
        checkSingleResourceFairness(spec, gamma, file.allocation));
  }

  if (mechanism.has_value()) {
    for (size_t n = 0; n < spec.numUsers(); n++) {
      PropertyReport report =
        strategyHarness(spec, *mechanism, n, args.trials, args.seed);
      report.property += " user=" + scenario.userNames[n];
      reports.push_back(std::move(report));
    }
  }

  bool passed = true;
  for (const PropertyReport& report : reports) {
    printReport(report, out);
    passed = passed && report.passed();
  }

  return passed ? kExitSuccess : kExitFailure;
}


struct SimulateArgs
{
  std::string scenario;
  std::string config;
  std::string out;
};


int simulate(const SimulateArgs& args, std::ostream& out)
{
  const Scenario scenario = loadScenario(args.scenario);
  const SimConfig config = loadSimConfig(args.config);

  const SimTrace trace =
    runSimulation(scenario.spec, scenario.events, config);
  emit(args.out, traceCsv(scenario, trace), out);
  return kExitSuccess;
}


struct CompareArgs
{
  std::string scenario;
  std::vector<std::string> mechanisms;
  std::string out;
};


int compare(const CompareArgs& args, std::ostream& out)
{
  const Scenario scenario = loadScenario(args.scenario);

  std::vector<Mechanism> mechanisms;
  for (const std::string& name : args.mechanisms) {
    mechanisms.push_back(mechanismOption(name));
  }

  std::vector<std::pair<std::string, MechanismResult>> results;
  for (Mechanism mechanism : mechanisms) {
    results.emplace_back(
        mechanismName(mechanism), runMechanism(scenario.spec, mechanism));
  }

  emit(args.out, comparisonCsv(scenario, results), out);
  return kExitSuccess;
}

} // namespace {


int execute(
    const std::vector<std::string>& args,
    std::ostream& out,
    std::ostream& err)
{
  CLI::App app{"Per-server dominant-share fair allocation", "psdsf"};
  app.require_subcommand(1);

  AllocateArgs allocateArgs;
  CLI::App* allocateCommand =
    app.add_subcommand("allocate", "Compute an allocation");
  allocateCommand->add_option("--scenario", allocateArgs.scenario)
    ->required();
  allocateCommand->add_option("--mechanism", allocateArgs.mechanism)
    ->default_val("psdsf-rdm");
  allocateCommand->add_option("--out", allocateArgs.out);

  VerifyArgs verifyArgs;
  CLI::App* verifyCommand =
    app.add_subcommand("verify", "Check an allocation is a PS-DSF fixed point");
  verifyCommand->add_option("--scenario", verifyArgs.scenario)->required();
  verifyCommand->add_option("--alloc", verifyArgs.alloc)->required();
  verifyCommand->add_option("--theorem", verifyArgs.theorem)
    ->check(CLI::IsMember({1, 2}))
    ->default_val(1);

  PropertiesArgs propertiesArgs;
  CLI::App* propertiesCommand =
    app.add_subcommand("properties", "Run the fairness property checks");
  propertiesCommand->add_option("--scenario", propertiesArgs.scenario)
    ->required();
  propertiesCommand->add_option("--alloc", propertiesArgs.alloc)->required();
  propertiesCommand->add_option("--mechanism", propertiesArgs.mechanism);
  propertiesCommand->add_option("--mode", propertiesArgs.mode)
    ->check(CLI::IsMember({"rdm", "tdm"}));
  propertiesCommand->add_option("--trials", propertiesArgs.trials)
    ->default_val(100);
  propertiesCommand->add_option("--seed", propertiesArgs.seed)
    ->default_val(0);

  SimulateArgs simulateArgs;
  CLI::App* simulateCommand =
    app.add_subcommand("simulate", "Replay scenario events over time");
  simulateCommand->add_option("--scenario", simulateArgs.scenario)
    ->required();
  simulateCommand->add_option("--config", simulateArgs.config)->required();
  simulateCommand->add_option("--out", simulateArgs.out);

  CompareArgs compareArgs;
  CLI::App* compareCommand =
    app.add_subcommand("compare", "Tabulate totals across mechanisms");
  compareCommand->add_option("--scenario", compareArgs.scenario)->required();
  compareCommand->add_option("--mechanisms", compareArgs.mechanisms)
    ->delimiter(',')
    ->default_val(std::vector<std::string>{
        "psdsf-rdm", "psdsf-tdm", "drf-pool", "cdrfh", "tsf", "uniform"});
  compareCommand->add_option("--out", compareArgs.out);

  // CLI11 consumes the vector from the back.
  std::vector<std::string> reversed(args.rbegin(), args.rend());

  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // Help requests come through here with a zero status.
    return app.exit(e, out, err) == 0 ? kExitSuccess : kExitInputError;
  }

  try {
    if (*allocateCommand) {
      return allocate(allocateArgs, out);
    }
    if (*verifyCommand) {
      return verify(verifyArgs, out);
    }
    if (*propertiesCommand) {
      return properties(propertiesArgs, out);
    }
    if (*simulateCommand) {
      return simulate(simulateArgs, out);
    }
    return compare(compareArgs, out);
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    // InvalidScenario and bad simulation inputs.
    err << "error: " << e.what() << "\n";
  }

  return kExitInputError;
}

} // namespace cli {
} // namespace psdsf {
