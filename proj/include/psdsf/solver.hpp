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

#ifndef __PSDSF_SOLVER_HPP__
#define __PSDSF_SOLVER_HPP__

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "psdsf/kernel.hpp"
#include "psdsf/model.hpp"

namespace psdsf {

// Relative change below which a sweep is considered to have made no update.
constexpr double kConvergenceTolerance = 1e-9;


enum class Multiplexing
{
  RDM, // Resources on a server are divided among users.
  TDM, // Servers are time-shared among users.
};


struct InvalidScenario : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};


// What a server procedure sees: per-server capacities, per-user demands and
// the monopoly task counts. Under TDM each server exposes a single "time"
// resource of capacity 1 and user n demands 1 / gamma(n, i) of it per task.
class SharingModel
{
public:
  // Throws InvalidScenario if a gamma override disagrees with the demands.
  static SharingModel rdm(const ClusterSpec& spec);

  static SharingModel tdm(const ClusterSpec& spec);

  // Same model with inactive users made ineligible everywhere.
  SharingModel withActiveUsers(const std::vector<bool>& active) const;

  Multiplexing mode() const { return multiplexing; }

  size_t numUsers() const { return gamma.numUsers(); }
  size_t numServers() const { return gamma.numServers(); }
  size_t numResources() const { return capacities.cols(); }

  double capacity(size_t server, size_t resource) const
  {
    return capacities(server, resource);
  }

  double demand(size_t user, size_t server, size_t resource) const
  {
    if (multiplexing == Multiplexing::TDM) {
      return gamma.eligible(user, server) ? 1.0 / gamma(user, server) : 0.0;
    }
    return demands(user, resource);
  }

  double weight(size_t user) const { return weights[user]; }

  const GammaMatrix& monopolyTasks() const { return gamma; }

private:
  SharingModel(
      Multiplexing _multiplexing,
      GammaMatrix _gamma,
      std::vector<double> _weights,
      Matrix _capacities,
      Matrix _demands)
    : multiplexing(_multiplexing),
      gamma(std::move(_gamma)),
      weights(std::move(_weights)),
      capacities(std::move(_capacities)),
      demands(std::move(_demands)) {}

  Multiplexing multiplexing;
  GammaMatrix gamma;
  std::vector<double> weights;
  Matrix capacities; // K x R
  Matrix demands;    // N x M, RDM only
};


// Scratch state of one server while its procedure runs.
struct ServerWorkState
{
  // Users still lacking an identified bottleneck at this server.
  std::vector<size_t> activeUsers;

  // Minimum normalized share over activeUsers, and the users attaining it.
  double minVds = 0.0;
  std::vector<size_t> minSet;

  // Saturated resources demanded by some member of minSet.
  std::vector<size_t> candidateResources;

  // Filled in by updateAllocation.
  std::vector<size_t> releasing;
  std::vector<double> free;
  std::vector<double> demandMass;
  double headroom = 0.0;
  double step = 1.0;
};


struct StepEvent
{
  size_t server;
  const Allocation& allocation;
  const ServerWorkState& state;
};

using StepObserver = std::function<void(const StepEvent&)>;


struct SolveOptions
{
  // Zero selects the default budget of 10 * K * N sweeps.
  size_t maxSweeps = 0;

  size_t maxUpdatesPerProcedure = 10000;

  // Invoked after every allocation update.
  StepObserver observer;
};


struct UpdateResult
{
  Allocation allocation;
  bool progressed = false;
};


struct ProcedureResult
{
  Allocation allocation;
  size_t updates = 0;

  // Largest change of any x(n, i) at this server.
  double change = 0.0;

  // An update could not make progress, or the update budget ran out.
  bool stalled = false;
};


struct SolveReport
{
  Allocation allocation;
  size_t iterations = 0;
  bool converged = false;

  // Largest change of any x(n, i) during the final sweep.
  double residual = 0.0;
};


// Weighted progressive filling on each server in isolation.
// Parallel over servers; the serial variant is the reference.
Allocation initPerServerDrf(const SharingModel& model);
Allocation initPerServerDrfSerial(const SharingModel& model);

// Fills minVds, minSet and candidateResources for state.activeUsers.
void assessServer(
    const SharingModel& model,
    const Allocation& allocation,
    size_t server,
    ServerWorkState& state);

// A candidate resource on which every holder sits at or below minVds; such
// a resource is a bottleneck for every active user that demands it.
std::optional<size_t> settledResource(
    const SharingModel& model,
    const Allocation& allocation,
    size_t server,
    const ServerWorkState& state);

// Releases the highest-share holder of each candidate resource and raises
// the minimum set. Expects an assessed state with no settled resource.
UpdateResult updateAllocation(
    const SharingModel& model,
    const Allocation& allocation,
    size_t server,
    ServerWorkState& state);

ProcedureResult serverProcedure(
    const SharingModel& model,
    const Allocation& allocation,
    size_t server,
    const SolveOptions& options = {});

// Sweeps the server procedure over all servers until a sweep changes
// nothing.
SolveReport solve(
    const SharingModel& model,
    Allocation initial,
    const SolveOptions& options = {});

SolveReport solveRdm(const ClusterSpec& spec, const SolveOptions& options = {});
SolveReport solveTdm(const ClusterSpec& spec, const SolveOptions& options = {});

} // namespace psdsf {

#endif // __PSDSF_SOLVER_HPP__
