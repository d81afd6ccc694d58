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

#include "psdsf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "psdsf/baselines.hpp"
#include "psdsf/kernel.hpp"

namespace psdsf {

namespace {

SimSample snapshot(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    double time,
    const Allocation& allocation,
    const std::vector<bool>& active,
    bool converged)
{
  const size_t K = spec.numServers();
  const size_t M = spec.numResources();

  SimSample sample;
  sample.time = time;
  sample.allocation = allocation;
  sample.active = active;
  sample.converged = converged;

  const Matrix usage = resourceUsage(spec, allocation);
  sample.utilization = Matrix(K, M);
  for (size_t i = 0; i < K; i++) {
    for (size_t r = 0; r < M; r++) {
      const double capacity = spec.servers[i].capacities[r];
      sample.utilization(i, r) = capacity > 0.0 ? usage(i, r) / capacity : 0.0;
    }
  }

  sample.timeUtilization.assign(K, 0.0);
  for (size_t i = 0; i < K; i++) {
    for (size_t n = 0; n < spec.numUsers(); n++) {
      if (gamma.eligible(n, i)) {
        sample.timeUtilization[i] += allocation.tasks(n, i) / gamma(n, i);
      }
    }
  }

  return sample;
}


Mechanism centralized(SimMechanism mechanism)
{
  switch (mechanism) {
    case SimMechanism::PSDSF_RDM: return Mechanism::PSDSF_RDM;
    case SimMechanism::PSDSF_TDM: return Mechanism::PSDSF_TDM;
    case SimMechanism::TSF: return Mechanism::TSF;
    case SimMechanism::CDRFH: return Mechanism::CDRFH;
    case SimMechanism::PSDSF_DISTRIBUTED: break;
  }
  throw std::logic_error("distributed mode has no centralized mechanism");
}

} // namespace {


bool operator<(const Event& left, const Event& right)
{
  if (left.time != right.time) {
    return left.time < right.time;
  }
  if (left.kind != right.kind) {
    return left.kind < right.kind;
  }
  return left.user < right.user;
}


std::optional<SimMechanism> parseSimMechanism(const std::string& name)
{
  for (SimMechanism mechanism : {
           SimMechanism::PSDSF_DISTRIBUTED,
           SimMechanism::PSDSF_RDM,
           SimMechanism::PSDSF_TDM,
           SimMechanism::TSF,
           SimMechanism::CDRFH}) {
    if (simMechanismName(mechanism) == name) {
      return mechanism;
    }
  }
  return std::nullopt;
}


std::string simMechanismName(SimMechanism mechanism)
{
  switch (mechanism) {
    case SimMechanism::PSDSF_DISTRIBUTED: return "psdsf-distributed";
    case SimMechanism::PSDSF_RDM: return "psdsf-rdm";
    case SimMechanism::PSDSF_TDM: return "psdsf-tdm";
    case SimMechanism::TSF: return "tsf";
    case SimMechanism::CDRFH: return "cdrfh";
  }
  return "unknown";
}


std::vector<bool> initialActivity(
    size_t users,
    const std::vector<Event>& events)
{
  std::vector<Event> sorted = events;
  std::sort(sorted.begin(), sorted.end());

  std::vector<bool> active(users, true);
  std::vector<bool> seen(users, false);
  for (const Event& event : sorted) {
    if (event.user < users && !seen[event.user]) {
      seen[event.user] = true;
      active[event.user] = event.kind != EventKind::ACTIVATE;
    }
  }
  return active;
}


ClusterSpec withActiveUsers(
    const ClusterSpec& spec,
    const std::vector<bool>& active)
{
  ClusterSpec masked = spec;
  for (size_t n = 0; n < spec.numUsers(); n++) {
    if (active[n]) {
      continue;
    }
    masked.users[n].eligibility.assign(spec.numServers(), false);
    if (masked.gammaOverride.has_value()) {
      for (size_t i = 0; i < spec.numServers(); i++) {
        (*masked.gammaOverride)(n, i) = 0.0;
      }
    }
  }
  return masked;
}


SimTrace runSimulation(
    const ClusterSpec& spec,
    std::vector<Event> events,
    const SimConfig& config)
{
  if (!(config.period > 0.0) || !(config.horizon > 0.0) ||
      !(config.recomputePeriod > 0.0)) {
    throw std::invalid_argument(
        "period, recompute period and horizon must be positive");
  }

  const size_t N = spec.numUsers();
  const size_t K = spec.numServers();

  for (const Event& event : events) {
    if (event.user >= N || !(event.time >= 0.0) ||
        event.time == std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("event refers to an unknown user or time");
    }
  }

  std::vector<double> offsets = config.offsets;
  if (offsets.empty()) {
    for (size_t i = 0; i < K; i++) {
      offsets.push_back(static_cast<double>(i) * config.period / K);
    }
  }
  if (offsets.size() != K) {
    throw std::invalid_argument("one phase offset per server is required");
  }
  for (double offset : offsets) {
    if (!(offset >= 0.0) || !std::isfinite(offset)) {
      throw std::invalid_argument("phase offsets must be finite and >= 0");
    }
  }

  std::sort(events.begin(), events.end());

  const bool distributed =
    config.mechanism == SimMechanism::PSDSF_DISTRIBUTED;

  const Multiplexing mode = config.mode.value_or(
      spec.gammaOverride.has_value() ? Multiplexing::TDM : Multiplexing::RDM);

  const SharingModel model = mode == Multiplexing::TDM
    ? SharingModel::tdm(spec)
    : SharingModel::rdm(spec);

  std::vector<bool> active = initialActivity(N, events);

  // Centralized results depend only on the active set.
  std::map<std::vector<bool>, MechanismResult> solved;

  auto recompute = [&]() -> const MechanismResult& {
    auto found = solved.find(active);
    if (found == solved.end()) {
      found = solved.emplace(
          active,
          runMechanism(
              withActiveUsers(spec, active),
              centralized(config.mechanism))).first;
    }
    return found->second;
  };

  SimTrace trace;
  Allocation allocation = Allocation::zeros(N, K);
  bool converged = true;
  size_t firings = 0;

  // Next firing index per server; firing k happens at offset + k * period.
  std::vector<size_t> nextFiring(K, 0);
  size_t nextRecompute = 0;
  size_t nextEvent = 0;

  auto firingTime = [&](size_t i) {
    return offsets[i] + static_cast<double>(nextFiring[i]) * config.period;
  };

  auto recomputeTime = [&]() {
    return static_cast<double>(nextRecompute) * config.recomputePeriod;
  };

  if (distributed) {
    allocation = initPerServerDrf(model.withActiveUsers(active));
  }

  double now = 0.0;
  while (now <= config.horizon) {
    while (nextEvent < events.size() && events[nextEvent].time == now) {
      const Event& event = events[nextEvent++];
      active[event.user] = event.kind == EventKind::ACTIVATE;
      if (!active[event.user]) {
        for (size_t i = 0; i < K; i++) {
          allocation.tasks(event.user, i) = 0.0;
        }
      }
    }

    if (distributed) {
      const SharingModel current = model.withActiveUsers(active);
      for (size_t i = 0; i < K; i++) {
        if (firingTime(i) == now) {
          allocation = serverProcedure(current, allocation, i).allocation;
          nextFiring[i]++;
          firings++;
        }
      }
    } else if (recomputeTime() == now) {
      const MechanismResult& result = recompute();
      allocation = *result.allocation;
      converged = result.converged;
      nextRecompute++;
    }

    trace.samples.push_back(snapshot(
        spec,
        model.withActiveUsers(active).monopolyTasks(),
        now,
        allocation,
        active,
        converged));
    trace.firings.push_back(firings);

    double next = std::numeric_limits<double>::infinity();
    if (nextEvent < events.size()) {
      next = std::min(next, events[nextEvent].time);
    }
    if (distributed) {
      for (size_t i = 0; i < K; i++) {
        next = std::min(next, firingTime(i));
      }
    } else {
      next = std::min(next, recomputeTime());
    }
    now = next;
  }

  return trace;
}


UtilizationSummary utilizationSummary(
    const SimTrace& trace,
    double begin,
    double end)
{
  if (!(end > begin) || trace.samples.empty()) {
    throw std::invalid_argument("utilization window is empty");
  }

  const size_t K = trace.samples.front().utilization.rows();
  const size_t M = trace.samples.front().utilization.cols();

  UtilizationSummary summary{Matrix(K, M), std::vector<double>(K, 0.0)};

  for (size_t s = 0; s < trace.samples.size(); s++) {
    const SimSample& sample = trace.samples[s];
    const double from = std::max(begin, sample.time);
    const double to = std::min(
        end,
        s + 1 < trace.samples.size() ? trace.samples[s + 1].time : end);
    if (!(to > from)) {
      continue;
    }
    const double weight = (to - from) / (end - begin);
    for (size_t i = 0; i < K; i++) {
      for (size_t r = 0; r < M; r++) {
        summary.resources(i, r) += weight * sample.utilization(i, r);
      }
      summary.time[i] += weight * sample.timeUtilization[i];
    }
  }

  return summary;
}

} // namespace psdsf {
