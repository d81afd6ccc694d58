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

#ifndef __PSDSF_TESTS_FIXTURES_HPP__
#define __PSDSF_TESTS_FIXTURES_HPP__

#include <string>
#include <vector>

#include "psdsf/model.hpp"
#include "psdsf/sim.hpp"

namespace psdsf {
namespace tests {

inline std::string dataPath(const std::string& name)
{
  return std::string(PSDSF_DATA_DIR) + "/" + name;
}


// Every user eligible everywhere; resources named r0, r1, ...
inline ClusterSpec makeSpec(
    const std::vector<std::vector<double>>& capacities,
    const std::vector<std::vector<double>>& demands,
    const std::vector<double>& weights)
{
  ClusterSpec spec;
  for (size_t r = 0; r < capacities.front().size(); r++) {
    spec.resources.push_back(ResourceId{r, "r" + std::to_string(r)});
  }
  for (size_t i = 0; i < capacities.size(); i++) {
    spec.servers.push_back(ServerSpec{i, capacities[i]});
  }
  for (size_t n = 0; n < demands.size(); n++) {
    spec.users.push_back(UserSpec{
        n, demands[n], weights[n], std::vector<bool>(capacities.size(), true)});
  }
  return spec;
}


inline ClusterSpec ex1()
{
  return makeSpec(
      {{9, 12, 100}, {12, 12, 0}},
      {{1, 2, 10}, {1, 2, 1}, {1, 2, 0}},
      {1, 1, 2});
}


inline ClusterSpec ex2()
{
  return makeSpec(
      {{9, 12, 100}, {12, 12, 0}},
      {{1.5, 1, 10}, {1, 2, 10}, {0.5, 1, 0}, {1, 0.5, 0}},
      {1, 1, 1, 1});
}


// Class-aggregated cluster: servers A, B, C, D; users 2 and 3 may only
// use C and D.
inline ClusterSpec ex3(bool withOverride = true)
{
  ClusterSpec spec = makeSpec(
      {{8, 8}, {34, 34}, {16.5, 8.25}, {5.5, 8.25}},
      {{0.1, 0.1}, {2.0 / 15.0, 0.2}, {0.2, 0.1}, {0.2, 0.3}},
      {2, 2, 1, 1});
  spec.users[2].eligibility = {false, false, true, true};
  spec.users[3].eligibility = {false, false, true, true};

  if (withOverride) {
    const double table[4][4] = {
      {80, 340, 82.5, 55},
      {40, 170, 41.25, 41.25},
      {0, 0, 82.5, 27.5},
      {0, 0, 27.5, 27.5},
    };
    Matrix gamma(4, 4);
    for (size_t n = 0; n < 4; n++) {
      for (size_t i = 0; i < 4; i++) {
        gamma(n, i) = table[n][i];
      }
    }
    spec.gammaOverride = gamma;
  }
  return spec;
}


// User 3 leaves at t = 100 and returns at t = 250.
inline std::vector<Event> ex3Churn()
{
  return {
    Event{100.0, EventKind::DEACTIVATE, 3},
    Event{250.0, EventKind::ACTIVATE, 3},
  };
}


inline Allocation allocationOf(const std::vector<std::vector<double>>& rows)
{
  Allocation allocation = Allocation::zeros(rows.size(), rows[0].size());
  for (size_t n = 0; n < rows.size(); n++) {
    for (size_t i = 0; i < rows[n].size(); i++) {
      allocation.tasks(n, i) = rows[n][i];
    }
  }
  return allocation;
}

} // namespace tests {
} // namespace psdsf {

#endif // __PSDSF_TESTS_FIXTURES_HPP__
