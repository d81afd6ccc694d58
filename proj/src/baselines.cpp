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

#include "psdsf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "psdsf/lp.hpp"

#include "split_program.hpp"

namespace psdsf {

namespace {

bool hasEligibleServer(const GammaMatrix& gamma, size_t user)
{
  for (size_t i = 0; i < gamma.numServers(); i++) {
    if (gamma.eligible(user, i)) {
      return true;
    }
  }
  return false;
}


std::vector<double> poolCapacities(const ClusterSpec& spec)
{
  std::vector<double> pool(spec.numResources(), 0.0);
  for (const ServerSpec& server : spec.servers) {
    for (size_t r = 0; r < spec.numResources(); r++) {
      pool[r] += server.capacities[r];
    }
  }
  return pool;
}


// weight / global dominant share per task; zero if some demanded resource
// is absent from the whole cluster.
std::vector<double> dominantShareScales(
    const ClusterSpec& spec,
    const std::vector<double>& pool)
{
  std::vector<double> scale(spec.numUsers(), 0.0);
  for (size_t n = 0; n < spec.numUsers(); n++) {
    double share = 0.0;
    for (size_t r = 0; r < spec.numResources(); r++) {
      const double demand = spec.users[n].demand[r];
      if (demand <= 0.0) {
        continue;
      }
      share = pool[r] > 0.0
        ? std::max(share, demand / pool[r])
        : std::numeric_limits<double>::infinity();
    }
    if (share > 0.0 && std::isfinite(share)) {
      scale[n] = spec.users[n].weight / share;
    }
  }
  return scale;
}


SolveReport reportFrom(MaxMinResult result)
{
  SolveReport report;
  report.allocation = std::move(result.witness);
  report.iterations = result.levels.size();
  report.converged = true;
  return report;
}

} // namespace {


bool linearFeasible(
    const ClusterSpec& spec,
    const std::vector<double>& targets,
    Multiplexing mode)
{
  const GammaMatrix gamma = gammaMatrix(spec);
  SplitProgram program = splitProgram(spec, gamma, mode);

  for (size_t n = 0; n < spec.numUsers(); n++) {
    if (targets[n] <= 0.0) {
      continue;
    }
    auto terms = program.total(n);
    if (terms.empty()) {
      return false;
    }
    program.problem.addConstraint(
        std::move(terms), lp::Sense::GREATER_EQUAL, targets[n]);
  }

  return lp::solve(program.problem).status == lp::Status::OPTIMAL;
}


MaxMinResult lexMaxMin(const ClusterSpec& spec, const MaxMinProblem& problem)
{
  const size_t N = spec.numUsers();
  const GammaMatrix gamma = gammaMatrix(spec);

  std::vector<std::optional<double>> fixed = problem.frozen;
  fixed.resize(N);

  for (size_t n = 0; n < N; n++) {
    if (!fixed[n].has_value() &&
        (problem.scale[n] <= 0.0 || !hasEligibleServer(gamma, n))) {
      fixed[n] = 0.0;
    }
  }

  MaxMinResult result;

  // Program with every user pinned at or above its current floor; the
  // floor of an unfrozen user is scale * level.
  auto floors = [&](std::optional<double> level, std::optional<size_t> skip) {
    SplitProgram program = splitProgram(spec, gamma, problem.mode);
    std::optional<size_t> t;
    if (!level.has_value()) {
      t = program.problem.addVariable(1.0);
    }
    for (size_t n = 0; n < N; n++) {
      if (skip == n) {
        continue;
      }
      auto terms = program.total(n);
      if (fixed[n].has_value()) {
        if (*fixed[n] > 0.0) {
          program.problem.addConstraint(
              std::move(terms), lp::Sense::GREATER_EQUAL, *fixed[n]);
        }
      } else if (t.has_value()) {
        terms.emplace_back(*t, -problem.scale[n]);
        program.problem.addConstraint(
            std::move(terms), lp::Sense::GREATER_EQUAL, 0.0);
      } else {
        program.problem.addConstraint(
            std::move(terms),
            lp::Sense::GREATER_EQUAL,
            problem.scale[n] * *level);
      }
    }
    return std::make_pair(std::move(program), t);
  };

  while (std::any_of(fixed.begin(), fixed.end(), [](const auto& f) {
      return !f.has_value();
    })) {
    auto [program, t] = floors(std::nullopt, std::nullopt);
    const lp::Solution common = lp::solve(program.problem);
    if (common.status != lp::Status::OPTIMAL) {
      throw std::logic_error("max-min level program is not solvable");
    }

    const double level = common.values[*t];
    result.levels.push_back(level);

    std::vector<size_t> freezing;
    std::optional<size_t> tightest;
    double tightestHeadroom = std::numeric_limits<double>::infinity();

    for (size_t n = 0; n < N; n++) {
      if (fixed[n].has_value()) {
        continue;
      }

      auto [own, unused] = floors(level, n);
      for (auto [x, coefficient] : own.total(n)) {
        own.problem.objective[x] = coefficient;
      }

      const lp::Solution best = lp::solve(own.problem);
      const double target = problem.scale[n] * level;
      const double headroom = best.status == lp::Status::OPTIMAL
        ? best.objective - target
        : 0.0;

      if (headroom <= 1e-9 * std::max(1.0, target)) {
        freezing.push_back(n);
      }
      if (headroom < tightestHeadroom) {
        tightestHeadroom = headroom;
        tightest = n;
      }
    }

    if (freezing.empty() && tightest.has_value()) {
      freezing.push_back(*tightest);
    }

    for (size_t n : freezing) {
      fixed[n] = problem.scale[n] * level;
    }
  }

  result.totals.resize(N);
  for (size_t n = 0; n < N; n++) {
    result.totals[n] = *fixed[n];
  }

  auto [program, unused] = floors(0.0, std::nullopt);
  for (double& cost : program.problem.objective) {
    cost = -1.0;
  }
  const lp::Solution witness = lp::solve(program.problem);
  if (witness.status != lp::Status::OPTIMAL) {
    throw std::logic_error("max-min totals admit no split");
  }
  result.witness = extractSplit(program, witness, N);

  return result;
}


std::vector<double> uniformAllocation(
    const ClusterSpec& spec,
    const GammaMatrix& gamma)
{
  const Allocation split = uniformSplit(spec, gamma);
  return taskTotals(split);
}


Allocation uniformSplit(const ClusterSpec& spec, const GammaMatrix& gamma)
{
  double weights = 0.0;
  for (const UserSpec& user : spec.users) {
    weights += user.weight;
  }

  Allocation allocation =
    Allocation::zeros(spec.numUsers(), spec.numServers());
  for (size_t n = 0; n < spec.numUsers(); n++) {
    const double fraction = spec.users[n].weight / weights;
    for (size_t i = 0; i < spec.numServers(); i++) {
      allocation.tasks(n, i) = fraction * gamma(n, i);
    }
  }
  return allocation;
}


std::vector<double> solveDrfPool(const ClusterSpec& spec)
{
  ClusterSpec pooled;
  pooled.resources = spec.resources;
  pooled.servers.push_back(ServerSpec{0, poolCapacities(spec)});
  for (const UserSpec& user : spec.users) {
    UserSpec copy = user;
    copy.eligibility.assign(1, true);
    pooled.users.push_back(std::move(copy));
  }

  MaxMinProblem problem;
  problem.scale = dominantShareScales(spec, pooled.servers[0].capacities);
  problem.mode = Multiplexing::RDM;

  return lexMaxMin(pooled, problem).totals;
}


SolveReport solveCdrfh(const ClusterSpec& spec)
{
  if (!overrideMatchesDemands(spec)) {
    throw InvalidScenario(
        "C-DRFH needs demand vectors; the gamma override contradicts them");
  }

  MaxMinProblem problem;
  problem.scale = dominantShareScales(spec, poolCapacities(spec));
  problem.mode = Multiplexing::RDM;

  return reportFrom(lexMaxMin(spec, problem));
}


std::vector<double> tsfMonopolyTasks(const ClusterSpec& spec)
{
  std::vector<double> tasks(spec.numUsers(), 0.0);

  if (!overrideMatchesDemands(spec)) {
    for (size_t n = 0; n < spec.numUsers(); n++) {
      for (double value : spec.gammaOverride->row(n)) {
        tasks[n] += value;
      }
    }
    return tasks;
  }

  for (size_t n = 0; n < spec.numUsers(); n++) {
    UserSpec unconstrained = spec.users[n];
    unconstrained.eligibility.assign(spec.numServers(), true);
    for (const ServerSpec& server : spec.servers) {
      tasks[n] += monopolyTasks(unconstrained, server);
    }
  }
  return tasks;
}


SolveReport solveTsf(const ClusterSpec& spec)
{
  const std::vector<double> monopoly = tsfMonopolyTasks(spec);

  MaxMinProblem problem;
  problem.mode = overrideMatchesDemands(spec)
    ? Multiplexing::RDM
    : Multiplexing::TDM;
  problem.scale.resize(spec.numUsers());
  for (size_t n = 0; n < spec.numUsers(); n++) {
    problem.scale[n] = spec.users[n].weight * monopoly[n];
  }

  return reportFrom(lexMaxMin(spec, problem));
}


std::optional<Mechanism> parseMechanism(const std::string& name)
{
  for (Mechanism mechanism : {
           Mechanism::PSDSF_RDM,
           Mechanism::PSDSF_TDM,
           Mechanism::DRF_POOL,
           Mechanism::CDRFH,
           Mechanism::TSF,
           Mechanism::UNIFORM}) {
    if (mechanismName(mechanism) == name) {
      return mechanism;
    }
  }
  return std::nullopt;
}


std::string mechanismName(Mechanism mechanism)
{
  switch (mechanism) {
    case Mechanism::PSDSF_RDM: return "psdsf-rdm";
    case Mechanism::PSDSF_TDM: return "psdsf-tdm";
    case Mechanism::DRF_POOL: return "drf-pool";
    case Mechanism::CDRFH: return "cdrfh";
    case Mechanism::TSF: return "tsf";
    case Mechanism::UNIFORM: return "uniform";
  }
  return "unknown";
}


MechanismResult runMechanism(
    const ClusterSpec& spec,
    Mechanism mechanism,
    const SolveOptions& options)
{
  MechanismResult result;

  auto take = [&](SolveReport report) {
    result.totals = taskTotals(report.allocation);
    result.allocation = std::move(report.allocation);
    result.converged = report.converged;
    result.iterations = report.iterations;
  };

  switch (mechanism) {
    case Mechanism::PSDSF_RDM:
      take(solveRdm(spec, options));
      break;
    case Mechanism::PSDSF_TDM:
      take(solveTdm(spec, options));
      break;
    case Mechanism::DRF_POOL:
      result.totals = solveDrfPool(spec);
      break;
    case Mechanism::CDRFH:
      take(solveCdrfh(spec));
      break;
    case Mechanism::TSF:
      take(solveTsf(spec));
      break;
    case Mechanism::UNIFORM:
      result.allocation = uniformSplit(spec, gammaMatrix(spec));
      result.totals = taskTotals(*result.allocation);
      break;
  }

  return result;
}

} // namespace psdsf {
