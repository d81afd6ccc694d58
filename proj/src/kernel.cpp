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

#include "psdsf/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace psdsf {

namespace {

bool declaredEligible(const UserSpec& user, size_t server)
{
  return server < user.eligibility.size() && user.eligibility[server];
}


double normalizedShare(
    double total,
    double weight,
    double gamma)
{
  return total / (weight * gamma);
}

} // namespace {


std::optional<double> VdsView::level(size_t server) const
{
  std::optional<double> result;
  for (size_t n = 0; n < normalized.rows(); n++) {
    std::optional<double> value = at(n, server);
    if (value.has_value() && (!result.has_value() || *value < *result)) {
      result = value;
    }
  }
  return result;
}


std::optional<size_t> dominantResource(
    const UserSpec& user,
    const ServerSpec& server)
{
  std::optional<size_t> best;
  double bestRatio = -1.0;

  const size_t M = std::min(user.demand.size(), server.capacities.size());
  for (size_t r = 0; r < M; r++) {
    const double demand = user.demand[r];
    if (demand <= 0.0) {
      continue;
    }

    const double capacity = server.capacities[r];
    const double ratio = capacity > 0.0
      ? demand / capacity
      : std::numeric_limits<double>::infinity();

    if (ratio > bestRatio) {
      best = r;
      bestRatio = ratio;
    }
  }

  return best;
}


double monopolyTasks(const UserSpec& user, const ServerSpec& server)
{
  if (!declaredEligible(user, server.id)) {
    return 0.0;
  }

  double tasks = std::numeric_limits<double>::infinity();

  const size_t M = std::min(user.demand.size(), server.capacities.size());
  for (size_t r = 0; r < M; r++) {
    if (user.demand[r] > 0.0) {
      tasks = std::min(tasks, server.capacities[r] / user.demand[r]);
    }
  }

  return std::isfinite(tasks) ? tasks : 0.0;
}


GammaMatrix gammaMatrixSerial(const ClusterSpec& spec)
{
  if (spec.gammaOverride.has_value()) {
    return GammaMatrix(*spec.gammaOverride);
  }

  const size_t N = spec.numUsers();
  const size_t K = spec.numServers();

  Matrix values(N, K);
  for (size_t n = 0; n < N; n++) {
    for (size_t i = 0; i < K; i++) {
      values(n, i) = monopolyTasks(spec.users[n], spec.servers[i]);
    }
  }

  return GammaMatrix(std::move(values));
}


GammaMatrix gammaMatrix(const ClusterSpec& spec)
{
  if (spec.gammaOverride.has_value()) {
    return GammaMatrix(*spec.gammaOverride);
  }

  const long N = static_cast<long>(spec.numUsers());
  const size_t K = spec.numServers();

  Matrix values(spec.numUsers(), K);

#pragma omp parallel for schedule(static)
  for (long n = 0; n < N; n++) {
    const UserSpec& user = spec.users[n];
    std::span<double> row = values.row(n);
    for (size_t i = 0; i < K; i++) {
      row[i] = monopolyTasks(user, spec.servers[i]);
    }
  }

  return GammaMatrix(std::move(values));
}


bool overrideMatchesDemands(const ClusterSpec& spec)
{
  if (!spec.gammaOverride.has_value()) {
    return true;
  }

  ClusterSpec plain = spec;
  plain.gammaOverride.reset();
  const GammaMatrix derived = gammaMatrixSerial(plain);
  const Matrix& given = *spec.gammaOverride;

  for (size_t n = 0; n < spec.numUsers(); n++) {
    for (size_t i = 0; i < spec.numServers(); i++) {
      const double scale = std::max(1.0, std::abs(derived(n, i)));
      if (std::abs(given(n, i) - derived(n, i)) >
          kFeasibilityTolerance * scale) {
        return false;
      }
    }
  }

  return true;
}


std::vector<double> taskTotals(const Allocation& allocation)
{
  std::vector<double> totals(allocation.numUsers(), 0.0);
  for (size_t n = 0; n < allocation.numUsers(); n++) {
    for (double tasks : allocation.tasks.row(n)) {
      totals[n] += tasks;
    }
  }
  return totals;
}


VdsView vdsView(
    const Allocation& allocation,
    const GammaMatrix& gamma,
    const std::vector<UserSpec>& users)
{
  const size_t N = gamma.numUsers();
  const size_t K = gamma.numServers();

  const std::vector<double> totals = taskTotals(allocation);

  Matrix normalized(N, K);
  std::vector<bool> defined(N * K, false);

  for (size_t n = 0; n < N; n++) {
    for (size_t i = 0; i < K; i++) {
      if (gamma.eligible(n, i)) {
        normalized(n, i) =
          normalizedShare(totals[n], users[n].weight, gamma(n, i));
        defined[n * K + i] = true;
      }
    }
  }

  return VdsView(std::move(normalized), std::move(defined));
}


Matrix resourceUsage(const ClusterSpec& spec, const Allocation& allocation)
{
  const size_t K = spec.numServers();
  const size_t M = spec.numResources();

  Matrix usage(K, M);
  for (size_t i = 0; i < K; i++) {
    for (size_t n = 0; n < spec.numUsers(); n++) {
      const double tasks = allocation.tasks(n, i);
      if (tasks == 0.0) {
        continue;
      }
      for (size_t r = 0; r < M; r++) {
        usage(i, r) += tasks * spec.users[n].demand[r];
      }
    }
  }

  return usage;
}


FeasibilityReport rdmFeasible(
    const ClusterSpec& spec,
    const Allocation& allocation)
{
  const size_t K = spec.numServers();
  const size_t M = spec.numResources();

  FeasibilityReport report;
  report.slack = Matrix(K, M);

  for (size_t n = 0; n < spec.numUsers(); n++) {
    for (size_t i = 0; i < K; i++) {
      if (allocation.tasks(n, i) < 0.0) {
        report.verdict.add(
            subject(n, i), allocation.tasks(n, i), 0.0,
            "task count must be non-negative");
      }
    }
  }

  const Matrix usage = resourceUsage(spec, allocation);

  for (size_t i = 0; i < K; i++) {
    for (size_t r = 0; r < M; r++) {
      const double capacity = spec.servers[i].capacities[r];
      const double slack = capacity - usage(i, r);
      report.slack(i, r) = slack;

      // A zero-capacity resource tolerates only floating-point dust.
      const double allowed =
        kFeasibilityTolerance * std::max(capacity, 1e-12);

      if (slack < -allowed) {
        report.verdict.add(
            subject(std::nullopt, i, r), usage(i, r), capacity,
            "resource usage exceeds capacity");
      }
    }
  }

  return report;
}


FeasibilityReport tdmFeasible(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation)
{
  const size_t N = spec.numUsers();
  const size_t K = spec.numServers();

  FeasibilityReport report;
  report.slack = Matrix(K, 1, 1.0);

  for (size_t i = 0; i < K; i++) {
    double share = 0.0;

    for (size_t n = 0; n < N; n++) {
      const double tasks = allocation.tasks(n, i);

      if (tasks < 0.0) {
        report.verdict.add(
            subject(n, i), tasks, 0.0, "task count must be non-negative");
        continue;
      }

      if (tasks == 0.0) {
        continue;
      }

      if (!gamma.eligible(n, i)) {
        report.verdict.add(
            subject(n, i), tasks, 0.0,
            "tasks allocated at an ineligible server");
        continue;
      }

      share += tasks / gamma(n, i);
    }

    report.slack(i, 0) = 1.0 - share;

    if (share > 1.0 + kFeasibilityTolerance) {
      report.verdict.add(
          subject(std::nullopt, i), share, 1.0,
          "time share exceeds one");
    }
  }

  return report;
}


std::vector<size_t> saturatedResources(
    const ClusterSpec& spec,
    const Allocation& allocation,
    size_t server)
{
  const size_t M = spec.numResources();

  std::vector<double> usage(M, 0.0);
  for (size_t n = 0; n < spec.numUsers(); n++) {
    const double tasks = allocation.tasks(n, server);
    for (size_t r = 0; r < M; r++) {
      usage[r] += tasks * spec.users[n].demand[r];
    }
  }

  std::vector<size_t> saturated;
  for (size_t r = 0; r < M; r++) {
    const double capacity = spec.servers[server].capacities[r];
    if (capacity > 0.0 &&
        usage[r] >= capacity * (1.0 - kSaturationTolerance)) {
      saturated.push_back(r);
    }
  }

  return saturated;
}


bool isBottleneck(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation,
    size_t user,
    size_t server,
    size_t resource)
{
  if (spec.users[user].demand[resource] <= 0.0 ||
      !gamma.eligible(user, server)) {
    return false;
  }

  const std::vector<size_t> saturated =
    saturatedResources(spec, allocation, server);

  if (std::find(saturated.begin(), saturated.end(), resource) ==
      saturated.end()) {
    return false;
  }

  const std::vector<double> totals = taskTotals(allocation);

  const double own = normalizedShare(
      totals[user], spec.users[user].weight, gamma(user, server));

  for (size_t m = 0; m < spec.numUsers(); m++) {
    if (allocation.tasks(m, server) * spec.users[m].demand[resource] <= 0.0) {
      continue;
    }

    // Holding tasks at an ineligible server never happens in a feasible
    // allocation, but such a holder must not pass for a lower share.
    if (!gamma.eligible(m, server)) {
      return false;
    }

    const double other = normalizedShare(
        totals[m], spec.users[m].weight, gamma(m, server));

    if (other > own + kTieTolerance) {
      return false;
    }
  }

  return true;
}


Verdict verifyPsdsfRdm(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation)
{
  Verdict verdict;

  const VdsView view = vdsView(allocation, gamma, spec.users);

  for (size_t n = 0; n < spec.numUsers(); n++) {
    for (size_t i = 0; i < spec.numServers(); i++) {
      if (!gamma.eligible(n, i)) {
        continue;
      }

      bool found = false;
      for (size_t r = 0; r < spec.numResources() && !found; r++) {
        found = isBottleneck(spec, gamma, allocation, n, i, r);
      }

      if (!found) {
        verdict.add(
            subject(n, i), view.at(n, i).value_or(0.0), 0.0,
            "no bottleneck resource for user at eligible server");
      }
    }
  }

  return verdict;
}


Verdict verifyPsdsfTdm(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation)
{
  const FeasibilityReport feasibility = tdmFeasible(spec, gamma, allocation);

  Verdict verdict = feasibility.verdict;

  const VdsView view = vdsView(allocation, gamma, spec.users);

  for (size_t i = 0; i < spec.numServers(); i++) {
    const std::optional<double> level = view.level(i);

    // Servers nobody can use are exempt from the equality clause.
    if (!level.has_value()) {
      continue;
    }

    const double share = 1.0 - feasibility.slack(i, 0);
    if (std::abs(share - 1.0) > kFeasibilityTolerance) {
      verdict.add(
          subject(std::nullopt, i), share, 1.0,
          "time share must equal one at a server with eligible users");
    }

    for (size_t m = 0; m < spec.numUsers(); m++) {
      if (allocation.tasks(m, i) <= 0.0 || !gamma.eligible(m, i)) {
        continue;
      }

      const double value = *view.at(m, i);
      if (value > *level + kTieTolerance) {
        verdict.add(
            subject(m, i), value, *level,
            "user holds tasks above the server's minimum normalized share");
      }
    }
  }

  return verdict;
}

} // namespace psdsf {
