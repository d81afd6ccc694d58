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

#ifndef __PSDSF_SPLIT_PROGRAM_HPP__
#define __PSDSF_SPLIT_PROGRAM_HPP__

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "psdsf/kernel.hpp"
#include "psdsf/lp.hpp"
#include "psdsf/model.hpp"
#include "psdsf/solver.hpp"

namespace psdsf {

// Split variables x(n, i) for the eligible pairs plus capacity rows.
struct SplitProgram
{
  lp::Problem problem;
  std::vector<std::optional<size_t>> variables; // N * K, row-major
  size_t numServers = 0;

  std::optional<size_t> variable(size_t user, size_t server) const
  {
    return variables[user * numServers + server];
  }

  std::vector<std::pair<size_t, double>> total(size_t user) const
  {
    std::vector<std::pair<size_t, double>> terms;
    for (size_t i = 0; i < numServers; i++) {
      if (std::optional<size_t> x = variable(user, i)) {
        terms.emplace_back(*x, 1.0);
      }
    }
    return terms;
  }
};


SplitProgram splitProgram(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    Multiplexing mode);


Allocation extractSplit(
    const SplitProgram& program,
    const lp::Solution& solution,
    size_t users);

} // namespace psdsf {

#endif // __PSDSF_SPLIT_PROGRAM_HPP__
