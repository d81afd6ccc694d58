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

#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "psdsf/baselines.hpp"
#include "psdsf/kernel.hpp"
#include "psdsf/random.hpp"

#include "support/fixtures.hpp"

namespace psdsf {
namespace tests {

namespace {

void expectNear(
    const std::vector<double>& expected,
    const std::vector<double>& actual,
    double tolerance)
{
  ASSERT_EQ(expected.size(), actual.size());
  for (size_t n = 0; n < expected.size(); n++) {
    EXPECT_NEAR(expected[n], actual[n], tolerance) << "user " << n;
  }
}

} // namespace {


TEST(BaselinesTest, LinearFeasible)
{
  const ClusterSpec spec = ex1();
  EXPECT_TRUE(linearFeasible(spec, {3, 3, 6}, Multiplexing::RDM));
  EXPECT_FALSE(linearFeasible(spec, {3, 3, 7}, Multiplexing::RDM));
  EXPECT_TRUE(linearFeasible(spec, {3, 3, 6}, Multiplexing::TDM));
  EXPECT_FALSE(linearFeasible(spec, {3.1, 3, 6}, Multiplexing::TDM));
}


// Pooled capacity [21, 24, 100]. u1's global dominant resource is
// bandwidth (share 0.1 per task), u2's and u3's is RAM (1/12), so the
// scales are 10, 12 and 2 * 12. Pooled RAM binds: 2 * 46 t = 24.
TEST(BaselinesTest, Ex1Cdrfh)
{
  const ClusterSpec spec = ex1();
  const SolveReport report = solveCdrfh(spec);
  ASSERT_TRUE(report.converged);

  const std::vector<double> totals = taskTotals(report.allocation);
  expectNear({2.609, 3.130, 6.261}, totals, 1e-3);
  expectNear(
      {60.0 / 23.0, 72.0 / 23.0, 144.0 / 23.0}, totals, 1e-9);
  EXPECT_TRUE(rdmFeasible(spec, report.allocation).verdict.passed());

  expectNear(
      {60.0 / 23.0, 72.0 / 23.0, 144.0 / 23.0}, solveDrfPool(spec), 1e-9);
}


TEST(BaselinesTest, Ex1Tsf)
{
  const ClusterSpec spec = ex1();
  EXPECT_EQ((std::vector<double>{6, 6, 12}), tsfMonopolyTasks(spec));

  const SolveReport report = solveTsf(spec);
  ASSERT_TRUE(report.converged);
  expectNear({2, 2, 8}, taskTotals(report.allocation), 1e-6);
  EXPECT_TRUE(rdmFeasible(spec, report.allocation).verdict.passed());
}


// TSF scales: u1 557.5, u2 292.5, u3 320, u4 195 monopoly tasks ignoring
// placement; times weights 2, 2, 1, 1.
TEST(BaselinesTest, Ex3Tsf)
{
  const ClusterSpec spec = ex3();
  expectNear({557.5, 292.5, 320, 195}, tsfMonopolyTasks(spec), 1e-9);

  const SolveReport report = solveTsf(spec);
  ASSERT_TRUE(report.converged);
  EXPECT_TRUE(rdmFeasible(spec, report.allocation).verdict.passed());

  const std::vector<double> x = taskTotals(report.allocation);
  const std::vector<double> sigma = {1115, 585, 320, 195};

  // Two levels: u3 and u4 share the lower one, u1 and u2 the upper.
  EXPECT_NEAR(x[2] / sigma[2], x[3] / sigma[3], 1e-9);
  EXPECT_NEAR(x[0] / sigma[0], x[1] / sigma[1], 1e-9);
  EXPECT_LT(x[2] / sigma[2], x[0] / sigma[0]);

  // Neither level can rise.
  const double bump = 1.0 + 1e-6;
  EXPECT_FALSE(linearFeasible(
      spec, {x[0], x[1], x[2] * bump, x[3] * bump}, Multiplexing::RDM));
  EXPECT_FALSE(linearFeasible(
      spec, {x[0] * bump, x[1] * bump, x[2], x[3]}, Multiplexing::RDM));

  // Reference TSF totals for this cluster, to two decimals.
  expectNear({204.945, 107.527, 58.3425, 35.5525}, x, 0.1);
}


TEST(BaselinesTest, TsfFallsBackToTimeSharing)
{
  ClusterSpec spec = ex3();
  (*spec.gammaOverride)(0, 0) = 100.0;
  ASSERT_FALSE(overrideMatchesDemands(spec));

  // Row sums of the override.
  expectNear({577.5, 292.5, 110, 55}, tsfMonopolyTasks(spec), 1e-9);

  const SolveReport report = solveTsf(spec);
  EXPECT_TRUE(tdmFeasible(spec, gammaMatrix(spec), report.allocation)
                .verdict.passed());
  EXPECT_THROW(solveCdrfh(spec), InvalidScenario);
}


TEST(BaselinesTest, LexMaxMinFreezesUsers)
{
  const ClusterSpec spec = ex1();

  MaxMinProblem problem;
  problem.scale = {1, 1, 1};
  problem.frozen = {std::nullopt, 1.0, std::nullopt};

  const MaxMinResult result = lexMaxMin(spec, problem);
  // u2 pinned at 1. u1 and u3 rise together with u3 on S2 until S1 RAM
  // binds at 2 t + 2 = 12; u3 then fills the rest of S2.
  expectNear({5.0, 1.0, 6.0}, result.totals, 1e-9);
  EXPECT_TRUE(rdmFeasible(spec, result.witness).verdict.passed());
  expectNear(result.totals, taskTotals(result.witness), 1e-9);
}


TEST(BaselinesTest, UniformAllocation)
{
  const ClusterSpec spec = ex1();
  const GammaMatrix gamma = gammaMatrix(spec);

  // Weights 1, 1, 2 out of 4.
  expectNear({1.5, 1.5, 6}, uniformAllocation(spec, gamma), 1e-12);

  const Allocation split = uniformSplit(spec, gamma);
  EXPECT_DOUBLE_EQ(1.5, split.tasks(0, 0));
  EXPECT_DOUBLE_EQ(3.0, split.tasks(2, 1));
  EXPECT_TRUE(tdmFeasible(spec, gamma, split).verdict.passed());
}


TEST(BaselinesTest, MechanismNames)
{
  for (Mechanism mechanism :
       {Mechanism::PSDSF_RDM, Mechanism::PSDSF_TDM, Mechanism::DRF_POOL,
        Mechanism::CDRFH, Mechanism::TSF, Mechanism::UNIFORM}) {
    EXPECT_EQ(mechanism, parseMechanism(mechanismName(mechanism)));
  }
  EXPECT_EQ("psdsf-rdm", mechanismName(Mechanism::PSDSF_RDM));
  EXPECT_FALSE(parseMechanism("drf").has_value());
}


TEST(BaselinesTest, RunMechanism)
{
  const ClusterSpec spec = ex1();

  const MechanismResult rdm = runMechanism(spec, Mechanism::PSDSF_RDM);
  ASSERT_TRUE(rdm.allocation.has_value());
  expectNear({3, 3, 6}, rdm.totals, 1e-6);

  const MechanismResult pool = runMechanism(spec, Mechanism::DRF_POOL);
  EXPECT_FALSE(pool.allocation.has_value());
  EXPECT_EQ(3u, pool.totals.size());
}


// Every C-DRFH and TSF output is feasible and leaves no user able to grow
// alone.
TEST(BaselinesTest, RandomOutputsAreMaximal)
{
  for (uint64_t seed = 0; seed < 50; seed++) {
    const ClusterSpec spec = randomInstance(seed);
    for (const SolveReport& report : {solveCdrfh(spec), solveTsf(spec)}) {
      ASSERT_TRUE(rdmFeasible(spec, report.allocation).verdict.passed());
      const std::vector<double> totals = taskTotals(report.allocation);
      for (size_t n = 0; n < spec.numUsers(); n++) {
        std::vector<double> raised = totals;
        raised[n] += 1e-6 * std::max(1.0, totals[n]);
        EXPECT_FALSE(linearFeasible(spec, raised, Multiplexing::RDM))
          << "seed " << seed << " user " << n;
      }
    }
  }
}

} // namespace tests {
} // namespace psdsf {
