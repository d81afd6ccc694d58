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
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "psdsf/baselines.hpp"
#include "psdsf/kernel.hpp"
#include "psdsf/random.hpp"
#include "psdsf/scenario_io.hpp"

#include "support/fixtures.hpp"

namespace psdsf {
namespace tests {

namespace {

// Numeric content only; resource names differ between files and fixtures.
void expectSameNumbers(const ClusterSpec& expected, const ClusterSpec& actual)
{
  ASSERT_EQ(expected.numResources(), actual.numResources());
  EXPECT_EQ(expected.servers, actual.servers);
  EXPECT_EQ(expected.users, actual.users);
  EXPECT_EQ(expected.gammaOverride, actual.gammaOverride);
}


std::string errorOf(const std::string& text)
{
  try {
    parseScenario(text);
  } catch (const ScenarioError& error) {
    return error.what();
  }
  return "";
}


Scenario named(const ClusterSpec& spec)
{
  Scenario scenario;
  scenario.spec = spec;
  for (size_t i = 0; i < spec.numServers(); i++) {
    scenario.serverNames.push_back("s" + std::to_string(i));
  }
  for (size_t n = 0; n < spec.numUsers(); n++) {
    scenario.userNames.push_back("u" + std::to_string(n + 1));
  }
  return scenario;
}


const std::string kMinimal = R"({
  "resources": ["cpu"],
  "servers": [{"id": "a", "capacity": [1]}],
  "users": [{"id": "u", "demand": [1], "eligible": "auto"}]
})";

} // namespace {


TEST(ScenarioIoTest, LoadsExamples)
{
  const Scenario one = loadScenario(dataPath("ex1.json"));
  expectSameNumbers(ex1(), one.spec);
  EXPECT_EQ("bw", one.spec.resources[2].name);
  EXPECT_EQ((std::vector<std::string>{"S1", "S2"}), one.serverNames);
  EXPECT_EQ((std::vector<std::string>{"u1", "u2", "u3"}), one.userNames);

  expectSameNumbers(ex2(), loadScenario(dataPath("ex2.json")).spec);
  expectSameNumbers(ex3(), loadScenario(dataPath("ex3.json")).spec);

  const Scenario churn = loadScenario(dataPath("ex3_churn.json"));
  expectSameNumbers(ex3(), churn.spec);
  EXPECT_EQ(ex3Churn(), churn.events);
}


TEST(ScenarioIoTest, ExpandsServerCounts)
{
  const Scenario cluster = loadScenario(dataPath("ex3_cluster.json"));
  ASSERT_EQ(120u, cluster.spec.numServers());
  EXPECT_EQ("A-1", cluster.serverNames[0]);
  EXPECT_EQ("A-8", cluster.serverNames[7]);
  EXPECT_EQ("B-1", cluster.serverNames[8]);
  EXPECT_EQ("D-11", cluster.serverNames[119]);

  // u3 may use every C and D machine and nothing else.
  size_t eligible = 0;
  for (size_t i = 0; i < 120; i++) {
    const bool expected = i >= 8 + 68;
    EXPECT_EQ(expected, cluster.spec.users[2].eligibility[i]) << i;
    eligible += cluster.spec.users[2].eligibility[i];
  }
  EXPECT_EQ(44u, eligible);

  // Class totals match the aggregated scenario.
  double cpu = 0.0;
  for (size_t i = 76; i < 109; i++) {
    cpu += cluster.spec.servers[i].capacities[0];
  }
  EXPECT_DOUBLE_EQ(16.5, cpu);
}


TEST(ScenarioIoTest, EligibilityMayNameExpandedServers)
{
  const Scenario scenario = parseScenario(R"({
    "resources": ["cpu"],
    "servers": [{"id": 7, "capacity": [1], "count": 3}],
    "users": [{"id": 1, "demand": [1], "eligible": ["7-2"]}]
  })");
  EXPECT_EQ((std::vector<std::string>{"7-1", "7-2", "7-3"}),
            scenario.serverNames);
  EXPECT_EQ((std::vector<bool>{false, true, false}),
            scenario.spec.users[0].eligibility);
  EXPECT_EQ(1.0, scenario.spec.users[0].weight);
}


TEST(ScenarioIoTest, CountCap)
{
  const std::string message = errorOf(R"({
    "resources": ["cpu"],
    "servers": [{"id": "a", "capacity": [1], "count": 10001}],
    "users": [{"id": "u", "demand": [1], "eligible": "auto"}]
  })");
  EXPECT_NE(std::string::npos, message.find("servers[0].count"));
  EXPECT_NE(std::string::npos, message.find("10000"));
}


TEST(ScenarioIoTest, Diagnostics)
{
  const std::string syntax = errorOf("{\n  \"resources\": [\"cpu\",\n}");
  EXPECT_NE(std::string::npos, syntax.find("line 3"));
  EXPECT_NE(std::string::npos, syntax.find("column"));

  std::string text = kMinimal;
  text.replace(text.find("\"demand\""), 8, "\"demands\"");
  EXPECT_NE(
      std::string::npos,
      errorOf(text).find("users[0]: unknown key 'demands'"));

  text = kMinimal;
  text.replace(text.find("\"demand\": [1]"), 13, "\"demand\": \"x\"");
  EXPECT_NE(std::string::npos, errorOf(text).find("users[0].demand"));

  text = kMinimal;
  text.replace(text.find("\"auto\""), 6, "[\"b\"]");
  EXPECT_NE(std::string::npos, errorOf(text).find("unknown server 'b'"));

  text = kMinimal;
  text.replace(text.find("\"demand\""), 0, "\"weight\": 0, ");
  EXPECT_NE(std::string::npos, errorOf(text).find("weight must be positive"));

  text = kMinimal;
  text.replace(text.rfind("}"), 1,
               ", \"events\": [{\"time\": 1, \"action\": \"go\", "
               "\"user\": \"u\"}]}");
  EXPECT_NE(std::string::npos, errorOf(text).find("events[0].action"));

  EXPECT_NE(std::string::npos, errorOf("[]").find("expected an object"));
}


TEST(ScenarioIoTest, RoundTripIsBitExact)
{
  RandomInstanceOptions options;
  options.maxServers = 6;
  options.maxUsers = 6;
  options.zeroDemand = 0.2;

  std::mt19937_64 rng(3);
  for (uint64_t seed = 0; seed < 100; seed++) {
    Scenario scenario = named(randomInstance(seed, options));
    if (seed % 3 == 0) {
      scenario.spec.gammaOverride = gammaMatrix(scenario.spec).matrix();
    }
    if (seed % 2 == 0) {
      scenario.events.push_back(
          Event{logUniform(rng, 0.1, 100.0), EventKind::DEACTIVATE, 0});
    }

    const std::string text = writeScenario(scenario);
    const Scenario back = parseScenario(text);
    EXPECT_EQ(scenario, back) << "seed " << seed;
    EXPECT_EQ(text, writeScenario(back));
  }
}


TEST(ScenarioIoTest, WriterUsesAutoEligibility)
{
  const std::string text = writeScenario(loadScenario(dataPath("ex1.json")));
  EXPECT_NE(std::string::npos, text.find("\"eligible\": \"auto\""));
}


TEST(ScenarioIoTest, AllocationCsv)
{
  const Scenario scenario = loadScenario(dataPath("ex1.json"));
  const MechanismResult result =
    runMechanism(scenario.spec, Mechanism::PSDSF_RDM);

  const std::string csv = allocationCsv(scenario, result);
  EXPECT_EQ(0u, csv.find("user,server,tasks\n"));
  EXPECT_NE(std::string::npos, csv.find("#totals,u1,3\n#totals,u2,3\n"
                                        "#totals,u3,6\n"));
  EXPECT_NE(std::string::npos, csv.find("#status,converged=true,"));
  EXPECT_NE(std::string::npos, csv.find("u3,S2,6\n"));

  const AllocationFile file = parseAllocationCsv(csv, scenario);
  EXPECT_TRUE(file.converged);
  EXPECT_EQ(result.iterations, file.iterations);
  for (size_t n = 0; n < 3; n++) {
    EXPECT_NEAR(result.totals[n], file.totals[n], 1e-8);
    for (size_t i = 0; i < 2; i++) {
      EXPECT_NEAR(
          result.allocation->tasks(n, i), file.allocation.tasks(n, i), 1e-8);
    }
  }

  // Same verdict whether verified in process or after a round trip.
  const GammaMatrix gamma = gammaMatrix(scenario.spec);
  EXPECT_EQ(
      verifyPsdsfRdm(scenario.spec, gamma, *result.allocation),
      verifyPsdsfRdm(scenario.spec, gamma, file.allocation));

  // Byte-identical on a rerun.
  EXPECT_EQ(csv, allocationCsv(
      scenario, runMechanism(scenario.spec, Mechanism::PSDSF_RDM)));
}


TEST(ScenarioIoTest, AllocationCsvErrors)
{
  const Scenario scenario = loadScenario(dataPath("ex1.json"));

  EXPECT_THROW(parseAllocationCsv("", scenario), ScenarioError);
  EXPECT_THROW(parseAllocationCsv("a,b\n", scenario), ScenarioError);
  EXPECT_THROW(
      parseAllocationCsv("user,server,tasks\nu9,S1,1\n", scenario),
      ScenarioError);
  EXPECT_THROW(
      parseAllocationCsv("user,server,tasks\nu1,S1,one\n", scenario),
      ScenarioError);

  try {
    parseAllocationCsv("user,server,tasks\nu1,S3,1\n", scenario);
    FAIL();
  } catch (const ScenarioError& error) {
    EXPECT_NE(std::string::npos, std::string(error.what()).find("line 2"));
  }

  // Totals default to the row sums.
  const AllocationFile file =
    parseAllocationCsv("user,server,tasks\nu3,S1,1\nu3,S2,2\n", scenario);
  EXPECT_EQ(3.0, file.totals[2]);
}


TEST(ScenarioIoTest, TraceCsv)
{
  const Scenario scenario = loadScenario(dataPath("ex1.json"));
  SimConfig config;
  config.horizon = 2.0;
  const SimTrace trace = runSimulation(scenario.spec, {}, config);

  const std::string csv = traceCsv(scenario, trace);
  EXPECT_EQ(0u, csv.find("time,server,resource,utilization\n"));

  // Per sample: 2 servers x (3 resources + time).
  const size_t lines = std::count(csv.begin(), csv.end(), '\n');
  EXPECT_EQ(1 + trace.samples.size() * 8, lines);
  EXPECT_NE(std::string::npos, csv.find("\n2,S2,ram,1\n"));
  EXPECT_NE(std::string::npos, csv.find("\n2,S2,time,1\n"));
}


TEST(ScenarioIoTest, ComparisonCsv)
{
  const Scenario scenario = loadScenario(dataPath("ex1.json"));
  const std::string csv = comparisonCsv(
      scenario,
      {{"tsf", runMechanism(scenario.spec, Mechanism::TSF)}});
  EXPECT_EQ(
      "mechanism,user,tasks,converged\n"
      "tsf,u1,2,true\ntsf,u2,2,true\ntsf,u3,8,true\n",
      csv);
}


TEST(ScenarioIoTest, SimConfig)
{
  const SimConfig config = parseSimConfig(R"({
    "horizon": 50, "period": 2, "offsets": [0, 1],
    "mechanism": "tsf", "recompute_period": 5, "seed": 9, "mode": "tdm"
  })");
  EXPECT_EQ(50.0, config.horizon);
  EXPECT_EQ(2.0, config.period);
  EXPECT_EQ((std::vector<double>{0, 1}), config.offsets);
  EXPECT_EQ(SimMechanism::TSF, config.mechanism);
  EXPECT_EQ(5.0, config.recomputePeriod);
  EXPECT_EQ(9u, config.seed);
  EXPECT_EQ(Multiplexing::TDM, config.mode);

  const SimConfig defaults = loadSimConfig(dataPath("sim_distributed.json"));
  EXPECT_EQ(SimMechanism::PSDSF_DISTRIBUTED, defaults.mechanism);
  EXPECT_FALSE(defaults.mode.has_value());

  EXPECT_THROW(parseSimConfig(R"({"horizon": -1})"), ScenarioError);
  EXPECT_THROW(parseSimConfig(R"({"mechanism": "drf"})"), ScenarioError);
  EXPECT_THROW(parseSimConfig(R"({"speed": 1})"), ScenarioError);
}


TEST(ScenarioIoTest, FormatNumber)
{
  EXPECT_EQ("3", formatNumber(3.0));
  EXPECT_EQ("2.60869565", formatNumber(60.0 / 23.0));
  EXPECT_EQ("0.333333333", formatNumber(1.0 / 3.0));
  EXPECT_EQ("1e-12", formatNumber(1e-12));
}

} // namespace tests {
} // namespace psdsf {
