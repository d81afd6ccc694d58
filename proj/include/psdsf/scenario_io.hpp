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

#ifndef __PSDSF_SCENARIO_IO_HPP__
#define __PSDSF_SCENARIO_IO_HPP__

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "psdsf/baselines.hpp"
#include "psdsf/model.hpp"
#include "psdsf/sim.hpp"

namespace psdsf {

// Largest cluster a scenario may expand to through server counts.
constexpr size_t kMaxServers = 10000;


// Malformed or invalid input. The message names the offending field.
struct ScenarioError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};


struct Scenario
{
  ClusterSpec spec;
  std::vector<std::string> serverNames;
  std::vector<std::string> userNames;
  std::vector<Event> events;

  bool operator==(const Scenario& that) const = default;
};


// JSON with keys "resources", "servers", "users" and optionally
// "gamma_override", "events" and "description". A server entry with
// "count": k expands into servers "<id>-1" .. "<id>-k"; eligibility lists
// may name either form.
Scenario parseScenario(const std::string& text);
Scenario loadScenario(const std::filesystem::path& path);

// Inverse of parseScenario for expanded scenarios. Numbers are written
// with enough digits to read back identically.
std::string writeScenario(const Scenario& scenario);


SimConfig parseSimConfig(const std::string& text);
SimConfig loadSimConfig(const std::filesystem::path& path);


// printf("%.9g").
std::string formatNumber(double value);


struct AllocationFile
{
  // Empty (zero) when the file carries totals only.
  Allocation allocation;
  std::vector<double> totals;
  bool converged = true;
  size_t iterations = 0;
};


// Header "user,server,tasks", one row per nonzero entry, then
// "#totals,<user>,<tasks>" rows and a "#status" row.
std::string allocationCsv(
    const Scenario& scenario,
    const MechanismResult& result);

AllocationFile parseAllocationCsv(
    const std::string& text,
    const Scenario& scenario);

AllocationFile loadAllocationCsv(
    const std::filesystem::path& path,
    const Scenario& scenario);

// Header "time,server,resource,utilization"; the per-server time share is
// written under the resource name "time".
std::string traceCsv(const Scenario& scenario, const SimTrace& trace);

// Header "mechanism,user,tasks,converged".
std::string comparisonCsv(
    const Scenario& scenario,
    const std::vector<std::pair<std::string, MechanismResult>>& results);

std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, const std::string& text);

} // namespace psdsf {

#endif // __PSDSF_SCENARIO_IO_HPP__
