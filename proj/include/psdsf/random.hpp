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

#ifndef __PSDSF_RANDOM_HPP__
#define __PSDSF_RANDOM_HPP__

#include <cstddef>
#include <cstdint>
#include <random>

#include "psdsf/model.hpp"

namespace psdsf {

struct RandomInstanceOptions
{
  size_t maxServers = 4;
  size_t maxUsers = 5;
  size_t maxResources = 3;

  // Capacities and demands are log-uniform on [low, high].
  double low = 0.1;
  double high = 10.0;

  // Weights are log-uniform on [minWeight, maxWeight].
  double minWeight = 0.5;
  double maxWeight = 2.0;

  // Each (user, server) pair is declared eligible with this probability.
  // Every user keeps at least one eligible server.
  double eligibility = 0.7;

  // Probability that a demand entry is zero. At least one entry stays
  // positive.
  double zeroDemand = 0.0;

  // Exact sizes; zero means draw uniformly from [1, max].
  size_t servers = 0;
  size_t users = 0;
  size_t resources = 0;
};


ClusterSpec randomInstance(
    std::mt19937_64& rng,
    const RandomInstanceOptions& options = {});

// Convenience: the instance for one seed.
ClusterSpec randomInstance(
    uint64_t seed,
    const RandomInstanceOptions& options = {});

// Log-uniform draw on [low, high].
double logUniform(std::mt19937_64& rng, double low, double high);

} // namespace psdsf {

#endif // __PSDSF_RANDOM_HPP__
