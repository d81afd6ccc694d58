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

#ifndef __PSDSF_PROPERTIES_HPP__
#define __PSDSF_PROPERTIES_HPP__

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psdsf/baselines.hpp"
#include "psdsf/kernel.hpp"
#include "psdsf/model.hpp"
#include "psdsf/solver.hpp"

namespace psdsf {

// Absolute slack granted to every property comparison.
constexpr double kPropertyTolerance = 1e-6;


struct PropertyWitness
{
  std::vector<size_t> users;
  std::vector<size_t> servers;
  std::vector<double> values;
  std::string description;
};


struct PropertyReport
{
  std::string property;
  Verdict verdict;

  // Set whenever the verdict failed.
  std::optional<PropertyWitness> witness;

  // False when the property does not apply to the instance; the verdict
  // then passes unless the check was requested on an unsupported input.
  bool applicable = true;

  std::string note;

  bool passed() const { return verdict.passed(); }
};


PropertyReport checkSharingIncentive(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const std::vector<double>& totals);

PropertyReport checkEnvyFreeness(
    const ClusterSpec& spec,
    const Allocation& allocation);

// No user's total can rise while every total stays at least as large.
PropertyReport checkPareto(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation,
    Multiplexing mode);

// A resource that is a per-server dominant resource of every user at every
// eligible server, ties included. Lowest index if several qualify.
std::optional<size_t> systemBottleneck(
    const ClusterSpec& spec,
    const GammaMatrix& gamma);

PropertyReport checkBottleneckFairness(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation);

// Requires exactly one resource type.
PropertyReport checkSingleResourceFairness(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation);


// Tasks a user can actually run with the bundle it was granted for a
// reported demand vector.
double trueUtility(
    const std::vector<double>& truth,
    const std::vector<double>& reported,
    double tasks);


enum class MisreportKind
{
  SCALE,
  ZERO_COMPONENT,
  DROP_SERVER,
};


struct Misreport
{
  MisreportKind kind = MisreportKind::SCALE;
  std::vector<double> demand;
  std::vector<bool> eligibility;
};


// Deterministic misreport for (seed, user, trial). Scalings are
// log-uniform on [0.25, 4] per component.
Misreport drawMisreport(
    const ClusterSpec& spec,
    size_t user,
    uint64_t seed,
    size_t trial);

// The cluster as it looks after the user reports the given misreport.
ClusterSpec applyMisreport(
    const ClusterSpec& spec,
    size_t user,
    const Misreport& misreport);


// Runs seeded misreports for one user. Under psdsf-rdm the check is that
// harming another user always harms the liar too, and only instances where
// every user demands every resource are examined. Other mechanisms fail on
// any misreport that raises the liar's true utility.
// Trials run in parallel; strategyHarnessSerial is the reference.
PropertyReport strategyHarness(
    const ClusterSpec& spec,
    Mechanism mechanism,
    size_t user,
    size_t trials,
    uint64_t seed);

PropertyReport strategyHarnessSerial(
    const ClusterSpec& spec,
    Mechanism mechanism,
    size_t user,
    size_t trials,
    uint64_t seed);

} // namespace psdsf {

#endif // __PSDSF_PROPERTIES_HPP__
