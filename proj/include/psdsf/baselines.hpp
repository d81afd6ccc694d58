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

#ifndef __PSDSF_BASELINES_HPP__
#define __PSDSF_BASELINES_HPP__

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "psdsf/kernel.hpp"
#include "psdsf/model.hpp"
#include "psdsf/solver.hpp"

namespace psdsf {

// Lexicographic max-min of x_n / scale_n under placement-constrained
// feasibility. Frozen users keep the given total.
struct MaxMinProblem
{
  std::vector<double> scale;
  Multiplexing mode = Multiplexing::RDM;
  std::vector<std::optional<double>> frozen;
};


struct MaxMinResult
{
  std::vector<double> totals;

  // A per-server split achieving the totals with the least total work.
  Allocation witness;

  // Common level reached in each freezing round, in order.
  std::vector<double> levels;
};


// Whether some non-negative split meets every target under the capacity
// constraints of the given mode. Ineligible pairs are fixed at zero.
bool linearFeasible(
    const ClusterSpec& spec,
    const std::vector<double>& targets,
    Multiplexing mode);

MaxMinResult lexMaxMin(const ClusterSpec& spec, const MaxMinProblem& problem);

// (weight_n / total weight) * sum_i gamma(n, i).
std::vector<double> uniformAllocation(
    const ClusterSpec& spec,
    const GammaMatrix& gamma);

// Each user receives its weight fraction of every server.
Allocation uniformSplit(const ClusterSpec& spec, const GammaMatrix& gamma);

// DRF on a single pool holding every server's capacity, ignoring placement.
std::vector<double> solveDrfPool(const ClusterSpec& spec);

// Global dominant shares max-min'd under the true placement constraints.
// Throws InvalidScenario when a gamma override contradicts the demands.
SolveReport solveCdrfh(const ClusterSpec& spec);

// Tasks each user could run monopolizing every server, as if it had no
// placement constraints. The override row sums when the override
// contradicts the demands.
std::vector<double> tsfMonopolyTasks(const ClusterSpec& spec);

// Max-min of x_n / (weight_n * tsfMonopolyTasks_n). Uses RDM feasibility,
// or TDM when the gamma override contradicts the demands.
SolveReport solveTsf(const ClusterSpec& spec);


enum class Mechanism
{
  PSDSF_RDM,
  PSDSF_TDM,
  DRF_POOL,
  CDRFH,
  TSF,
  UNIFORM,
};


std::optional<Mechanism> parseMechanism(const std::string& name);
std::string mechanismName(Mechanism mechanism);


struct MechanismResult
{
  std::vector<double> totals;

  // Absent for the pooled DRF, which has no per-server placement.
  std::optional<Allocation> allocation;

  bool converged = true;
  size_t iterations = 0;
};


MechanismResult runMechanism(
    const ClusterSpec& spec,
    Mechanism mechanism,
    const SolveOptions& options = {});

} // namespace psdsf {

#endif // __PSDSF_BASELINES_HPP__
