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

#include "psdsf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace psdsf {

namespace {

// Holdings smaller than this fraction of a monopoly are released outright
// so that floating-point residue never masquerades as a holder.
constexpr double kDustFraction = 1e-12;


double level(
    const SharingModel& model,
    const std::vector<double>& totals,
    size_t user,
    size_t server)
{
  return totals[user] /
    (model.weight(user) * model.monopolyTasks()(user, server));
}


std::vector<double> serverUsage(
    const SharingModel& model,
    const Allocation& allocation,
    size_t server)
{
  std::vector<double> usage(model.numResources(), 0.0);
  for (size_t n = 0; n < model.numUsers(); n++) {
    const double tasks = allocation.tasks(n, server);
    if (tasks == 0.0) {
      continue;
    }
    for (size_t r = 0; r < model.numResources(); r++) {
      usage[r] += tasks * model.demand(n, server, r);
    }
  }
  return usage;
}


bool saturated(double usage, double capacity)
{
  return capacity > 0.0 && usage >= capacity * (1.0 - kSaturationTolerance);
}


double largestEntry(const Allocation& allocation)
{
  double largest = 0.0;
  for (double value : allocation.tasks.values()) {
    largest = std::max(largest, std::abs(value));
  }
  return largest;
}


double columnChange(
    const Allocation& before,
    const Allocation& after,
    size_t server)
{
  double change = 0.0;
  for (size_t n = 0; n < before.numUsers(); n++) {
    change = std::max(
        change,
        std::abs(after.tasks(n, server) - before.tasks(n, server)));
  }
  return change;
}


// Progressive filling at one server, writing into column `server`.
void fillServer(const SharingModel& model, size_t server, Matrix& tasks)
{
  const size_t N = model.numUsers();
  const size_t R = model.numResources();
  const GammaMatrix& gamma = model.monopolyTasks();

  std::vector<size_t> active;
  for (size_t n = 0; n < N; n++) {
    if (gamma.eligible(n, server)) {
      active.push_back(n);
    }
  }

  std::vector<double> usage(R, 0.0);

  while (!active.empty()) {
    double step = std::numeric_limits<double>::infinity();
    size_t binding = R;

    for (size_t r = 0; r < R; r++) {
      double load = 0.0;
      for (size_t n : active) {
        load += model.weight(n) * gamma(n, server) * model.demand(n, server, r);
      }
      if (load <= 0.0) {
        continue;
      }
      const double room =
        std::max(0.0, model.capacity(server, r) - usage[r]) / load;
      if (room < step) {
        step = room;
        binding = r;
      }
    }

    if (binding == R) {
      break;
    }

    for (size_t n : active) {
      tasks(n, server) += model.weight(n) * gamma(n, server) * step;
    }

    std::fill(usage.begin(), usage.end(), 0.0);
    for (size_t n = 0; n < N; n++) {
      for (size_t r = 0; r < R; r++) {
        usage[r] += tasks(n, server) * model.demand(n, server, r);
      }
    }

    std::vector<bool> full(R, false);
    for (size_t r = 0; r < R; r++) {
      full[r] = r == binding || saturated(usage[r], model.capacity(server, r));
    }

    std::erase_if(active, [&](size_t n) {
      for (size_t r = 0; r < R; r++) {
        if (full[r] && model.demand(n, server, r) > 0.0) {
          return true;
        }
      }
      return false;
    });
  }
}

} // namespace {


SharingModel SharingModel::rdm(const ClusterSpec& spec)
{
  if (!overrideMatchesDemands(spec)) {
    throw InvalidScenario(
        "RDM requires monopoly task counts consistent with the demand "
        "vectors; the gamma override contradicts them");
  }

  const size_t N = spec.numUsers();
  const size_t K = spec.numServers();
  const size_t M = spec.numResources();

  Matrix capacities(K, M);
  for (size_t i = 0; i < K; i++) {
    for (size_t r = 0; r < M; r++) {
      capacities(i, r) = spec.servers[i].capacities[r];
    }
  }

  Matrix demands(N, M);
  std::vector<double> weights(N);
  for (size_t n = 0; n < N; n++) {
    weights[n] = spec.users[n].weight;
    for (size_t r = 0; r < M; r++) {
      demands(n, r) = spec.users[n].demand[r];
    }
  }

  return SharingModel(
      Multiplexing::RDM,
      gammaMatrix(spec),
      std::move(weights),
      std::move(capacities),
      std::move(demands));
}


SharingModel SharingModel::tdm(const ClusterSpec& spec)
{
  std::vector<double> weights(spec.numUsers());
  for (size_t n = 0; n < spec.numUsers(); n++) {
    weights[n] = spec.users[n].weight;
  }

  return SharingModel(
      Multiplexing::TDM,
      gammaMatrix(spec),
      std::move(weights),
      Matrix(spec.numServers(), 1, 1.0),
      Matrix());
}


SharingModel SharingModel::withActiveUsers(
    const std::vector<bool>& active) const
{
  Matrix values = gamma.matrix();
  for (size_t n = 0; n < numUsers(); n++) {
    if (n < active.size() && active[n]) {
      continue;
    }
    for (size_t i = 0; i < numServers(); i++) {
      values(n, i) = 0.0;
    }
  }

  SharingModel masked = *this;
  masked.gamma = GammaMatrix(std::move(values));
  return masked;
}


Allocation initPerServerDrfSerial(const SharingModel& model)
{
  Allocation allocation =
    Allocation::zeros(model.numUsers(), model.numServers());

  for (size_t i = 0; i < model.numServers(); i++) {
    fillServer(model, i, allocation.tasks);
  }

  return allocation;
}


Allocation initPerServerDrf(const SharingModel& model)
{
  Allocation allocation =
    Allocation::zeros(model.numUsers(), model.numServers());

  const long K = static_cast<long>(model.numServers());

  // Each iteration writes a distinct column of the allocation.
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < K; i++) {
    fillServer(model, static_cast<size_t>(i), allocation.tasks);
  }

  return allocation;
}


void assessServer(
    const SharingModel& model,
    const Allocation& allocation,
    size_t server,
    ServerWorkState& state)
{
  const std::vector<double> totals = taskTotals(allocation);

  state.minVds = std::numeric_limits<double>::infinity();
  for (size_t n : state.activeUsers) {
    state.minVds = std::min(state.minVds, level(model, totals, n, server));
  }

  state.minSet.clear();
  for (size_t n : state.activeUsers) {
    if (level(model, totals, n, server) <= state.minVds + kTieTolerance) {
      state.minSet.push_back(n);
    }
  }

  const std::vector<double> usage = serverUsage(model, allocation, server);

  state.candidateResources.clear();
  for (size_t r = 0; r < model.numResources(); r++) {
    if (!saturated(usage[r], model.capacity(server, r))) {
      continue;
    }
    for (size_t n : state.minSet) {
      if (model.demand(n, server, r) > 0.0) {
        state.candidateResources.push_back(r);
        break;
      }
    }
  }
}


std::optional<size_t> settledResource(
    const SharingModel& model,
    const Allocation& allocation,
    size_t server,
    const ServerWorkState& state)
{
  const std::vector<double> totals = taskTotals(allocation);
  const GammaMatrix& gamma = model.monopolyTasks();

  for (size_t r : state.candidateResources) {
    bool settled = true;
    for (size_t m = 0; m < model.numUsers() && settled; m++) {
      if (allocation.tasks(m, server) * model.demand(m, server, r) <= 0.0 ||
          !gamma.eligible(m, server)) {
        continue;
      }
      settled = level(model, totals, m, server) <= state.minVds + kTieTolerance;
    }
    if (settled) {
      return r;
    }
  }

  return std::nullopt;
}


UpdateResult updateAllocation(
    const SharingModel& model,
    const Allocation& allocation,
    size_t server,
    ServerWorkState& state)
{
  const size_t N = model.numUsers();
  const size_t R = model.numResources();
  const GammaMatrix& gamma = model.monopolyTasks();

  const std::vector<double> totals = taskTotals(allocation);
  const std::vector<double> usage = serverUsage(model, allocation, server);

  state.free.assign(R, 0.0);
  for (size_t r = 0; r < R; r++) {
    state.free[r] = std::max(0.0, model.capacity(server, r) - usage[r]);
  }

  // The highest-share holder of each candidate resource gives its whole
  // bundle at this server back to the pool. A user chosen for several
  // resources is counted once.
  state.releasing.clear();
  for (size_t r : state.candidateResources) {
    std::optional<size_t> holder;
    double highest = -1.0;
    for (size_t m = 0; m < N; m++) {
      if (allocation.tasks(m, server) * model.demand(m, server, r) <= 0.0 ||
          !gamma.eligible(m, server)) {
        continue;
      }
      const double value = level(model, totals, m, server);
      if (value > highest) {
        highest = value;
        holder = m;
      }
    }
    if (holder.has_value() &&
        std::find(state.releasing.begin(), state.releasing.end(), *holder) ==
          state.releasing.end()) {
      state.releasing.push_back(*holder);
    }
  }

  for (size_t h : state.releasing) {
    for (size_t r = 0; r < R; r++) {
      state.free[r] += allocation.tasks(h, server) * model.demand(h, server, r);
    }
  }

  state.demandMass.assign(R, 0.0);
  for (size_t n : state.minSet) {
    const double rate = model.weight(n) * gamma(n, server);
    for (size_t r = 0; r < R; r++) {
      state.demandMass[r] += rate * model.demand(n, server, r);
    }
  }

  state.headroom = std::numeric_limits<double>::infinity();
  for (size_t r = 0; r < R; r++) {
    if (state.demandMass[r] > 0.0) {
      state.headroom =
        std::min(state.headroom, state.free[r] / state.demandMass[r]);
    }
  }

  UpdateResult result{allocation, false};

  if (!std::isfinite(state.headroom) ||
      state.headroom <= kConvergenceTolerance) {
    return result;
  }

  // Largest step keeping every releasing user at or above the raised
  // minimum level.
  state.step = 1.0;
  for (size_t h : state.releasing) {
    const double gap = level(model, totals, h, server) - state.minVds;
    const double shrink = allocation.tasks(h, server) /
      (model.weight(h) * gamma(h, server));
    state.step = std::min(state.step, gap / (state.headroom + shrink));
  }

  if (!(state.step > 0.0)) {
    return result;
  }

  Matrix& tasks = result.allocation.tasks;

  for (size_t n : state.minSet) {
    tasks(n, server) +=
      state.step * model.weight(n) * gamma(n, server) * state.headroom;
  }

  for (size_t h : state.releasing) {
    tasks(h, server) *= 1.0 - state.step;
    if (tasks(h, server) < kDustFraction * gamma(h, server)) {
      tasks(h, server) = 0.0;
    }
  }

  result.progressed = true;
  return result;
}


ProcedureResult serverProcedure(
    const SharingModel& model,
    const Allocation& allocation,
    size_t server,
    const SolveOptions& options)
{
  const GammaMatrix& gamma = model.monopolyTasks();

  ProcedureResult result{allocation};

  ServerWorkState state;
  for (size_t n = 0; n < model.numUsers(); n++) {
    if (gamma.eligible(n, server)) {
      state.activeUsers.push_back(n);
    }
  }

  while (!state.activeUsers.empty()) {
    assessServer(model, result.allocation, server, state);

    std::optional<size_t> settled =
      settledResource(model, result.allocation, server, state);

    if (settled.has_value()) {
      std::erase_if(state.activeUsers, [&](size_t n) {
        return model.demand(n, server, *settled) > 0.0;
      });
      continue;
    }

    if (result.updates >= options.maxUpdatesPerProcedure) {
      result.stalled = true;
      break;
    }

    UpdateResult update =
      updateAllocation(model, result.allocation, server, state);

    if (!update.progressed) {
      result.stalled = true;
      break;
    }

    result.change = std::max(
        result.change,
        columnChange(result.allocation, update.allocation, server));
    result.allocation = std::move(update.allocation);
    result.updates++;

    if (options.observer) {
      options.observer(StepEvent{server, result.allocation, state});
    }
  }

  return result;
}


SolveReport solve(
    const SharingModel& model,
    Allocation initial,
    const SolveOptions& options)
{
  const size_t K = model.numServers();
  const size_t N = model.numUsers();

  const size_t maxSweeps =
    options.maxSweeps > 0 ? options.maxSweeps : std::max<size_t>(1, 10 * K * N);

  SolveReport report;
  report.allocation = std::move(initial);

  for (size_t sweep = 1; sweep <= maxSweeps; sweep++) {
    double change = 0.0;

    for (size_t i = 0; i < K; i++) {
      ProcedureResult result =
        serverProcedure(model, report.allocation, i, options);
      change = std::max(change, result.change);
      report.allocation = std::move(result.allocation);
    }

    report.iterations = sweep;
    report.residual = change;

    const double scale = std::max(1.0, largestEntry(report.allocation));
    if (change <= kConvergenceTolerance * scale) {
      report.converged = true;
      break;
    }
  }

  return report;
}


SolveReport solveRdm(const ClusterSpec& spec, const SolveOptions& options)
{
  const SharingModel model = SharingModel::rdm(spec);
  return solve(model, initPerServerDrf(model), options);
}


SolveReport solveTdm(const ClusterSpec& spec, const SolveOptions& options)
{
  const SharingModel model = SharingModel::tdm(spec);
  return solve(model, initPerServerDrf(model), options);
}

} // namespace psdsf {
