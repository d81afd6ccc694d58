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

#include "split_program.hpp"

namespace psdsf {

SplitProgram splitProgram(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    Multiplexing mode)
{
  const size_t N = spec.numUsers();
  const size_t K = spec.numServers();

  SplitProgram program;
  program.numServers = K;
  program.variables.resize(N * K);

  for (size_t n = 0; n < N; n++) {
    for (size_t i = 0; i < K; i++) {
      if (gamma.eligible(n, i)) {
        program.variables[n * K + i] = program.problem.addVariable();
      }
    }
  }

  for (size_t i = 0; i < K; i++) {
    if (mode == Multiplexing::TDM) {
      std::vector<std::pair<size_t, double>> terms;
      for (size_t n = 0; n < N; n++) {
        if (std::optional<size_t> x = program.variable(n, i)) {
          terms.emplace_back(*x, 1.0 / gamma(n, i));
        }
      }
      if (!terms.empty()) {
        program.problem.addConstraint(
            std::move(terms), lp::Sense::LESS_EQUAL, 1.0);
      }
      continue;
    }

    for (size_t r = 0; r < spec.numResources(); r++) {
      std::vector<std::pair<size_t, double>> terms;
      for (size_t n = 0; n < N; n++) {
        std::optional<size_t> x = program.variable(n, i);
        if (x.has_value() && spec.users[n].demand[r] > 0.0) {
          terms.emplace_back(*x, spec.users[n].demand[r]);
        }
      }
      if (!terms.empty()) {
        program.problem.addConstraint(
            std::move(terms),
            lp::Sense::LESS_EQUAL,
            spec.servers[i].capacities[r]);
      }
    }
  }

  return program;
}


Allocation extractSplit(
    const SplitProgram& program,
    const lp::Solution& solution,
    size_t users)
{
  Allocation allocation = Allocation::zeros(users, program.numServers);
  for (size_t n = 0; n < users; n++) {
    for (size_t i = 0; i < program.numServers; i++) {
      if (std::optional<size_t> x = program.variable(n, i)) {
        allocation.tasks(n, i) = solution.values[*x];
      }
    }
  }
  return allocation;
}

} // namespace psdsf {
