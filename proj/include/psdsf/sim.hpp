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

#ifndef __PSDSF_SIM_HPP__
#define __PSDSF_SIM_HPP__

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psdsf/model.hpp"
#include "psdsf/solver.hpp"

namespace psdsf {

// Declaration order is the tie-break for events sharing a timestamp.
enum class EventKind
{
  ACTIVATE,
  DEACTIVATE,
};


struct Event
{
  double time = 0.0;
  EventKind kind = EventKind::ACTIVATE;
  size_t user = 0;

  bool operator==(const Event& that) const = default;
};


// Orders by (time, kind, user).
bool operator<(const Event& left, const Event& right);


enum class SimMechanism
{
  PSDSF_DISTRIBUTED,
  PSDSF_RDM,
  PSDSF_TDM,
  TSF,
  CDRFH,
};


std::optional<SimMechanism> parseSimMechanism(const std::string& name);
std::string simMechanismName(SimMechanism mechanism);


struct SimConfig
{
  double horizon = 300.0;

  // Each server runs its procedure every `period` seconds, starting at its
  // offset. Empty offsets select i * period / K.
  double period = 1.0;
  std::vector<double> offsets;

  SimMechanism mechanism = SimMechanism::PSDSF_DISTRIBUTED;

  // Centralized mechanisms recompute from scratch this often.
  double recomputePeriod = 1.0;

  // Recorded with the run; the event loop itself draws no random numbers.
  uint64_t seed = 0;

  // Sharing model of the distributed procedure. Unset selects TDM when the
  // scenario carries a gamma override and RDM otherwise.
  std::optional<Multiplexing> mode;
};


struct SimSample
{
  double time = 0.0;
  Allocation allocation;

  // K x M: sum_n x(n, i) d(n, r) / c(i, r); zero where c(i, r) = 0.
  Matrix utilization;

  // Per server: sum_n x(n, i) / gamma(n, i).
  std::vector<double> timeUtilization;

  std::vector<bool> active;

  // False when a centralized solve behind this sample ran out of budget.
  bool converged = true;
};


struct SimTrace
{
  std::vector<SimSample> samples;

  // Number of server procedure invocations up to and including each
  // sample (distributed mode only).
  std::vector<size_t> firings;
};


// Users whose first event activates them start inactive.
std::vector<bool> initialActivity(
    size_t users,
    const std::vector<Event>& events);

// The cluster with inactive users barred from every server.
ClusterSpec withActiveUsers(
    const ClusterSpec& spec,
    const std::vector<bool>& active);

SimTrace runSimulation(
    const ClusterSpec& spec,
    std::vector<Event> events,
    const SimConfig& config);


struct UtilizationSummary
{
  Matrix resources; // K x M
  std::vector<double> time;
};


// Time-weighted means over [begin, end), treating the trace as piecewise
// constant and the final sample as holding until `end`.
// Throws std::invalid_argument on an empty window.
UtilizationSummary utilizationSummary(
    const SimTrace& trace,
    double begin,
    double end);

} // namespace psdsf {

#endif // __PSDSF_SIM_HPP__
