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

#include "psdsf/random.hpp"

#include <cmath>
#include <string>

namespace psdsf {

double logUniform(std::mt19937_64& rng, double low, double high)
{
  std::uniform_real_distribution<double> exponent(
      std::log(low), std::log(high));
  return std::exp(exponent(rng));
}


ClusterSpec randomInstance(
    std::mt19937_64& rng,
    const RandomInstanceOptions& options)
{
  auto size = [&](size_t fixed, size_t max) {
    if (fixed > 0) {
      return fixed;
    }
    return std::uniform_int_distribution<size_t>(1, max)(rng);
  };

  const size_t K = size(options.servers, options.maxServers);
  const size_t N = size(options.users, options.maxUsers);
  const size_t M = size(options.resources, options.maxResources);

  std::uniform_real_distribution<double> coin(0.0, 1.0);

  ClusterSpec spec;

  for (size_t r = 0; r < M; r++) {
    spec.resources.push_back(ResourceId{r, "r" + std::to_string(r)});
  }

  for (size_t i = 0; i < K; i++) {
    ServerSpec server{i, std::vector<double>(M)};
    for (double& capacity : server.capacities) {
      capacity = logUniform(rng, options.low, options.high);
    }
    spec.servers.push_back(std::move(server));
  }

  for (size_t n = 0; n < N; n++) {
    UserSpec user;
    user.id = n;
    user.weight = logUniform(rng, options.minWeight, options.maxWeight);

    user.demand.resize(M);
    bool positive = false;
    for (double& demand : user.demand) {
      demand = coin(rng) < options.zeroDemand
        ? 0.0
        : logUniform(rng, options.low, options.high);
      positive = positive || demand > 0.0;
    }
    if (!positive) {
      const size_t r = std::uniform_int_distribution<size_t>(0, M - 1)(rng);
      user.demand[r] = logUniform(rng, options.low, options.high);
    }

    user.eligibility.resize(K);
    bool any = false;
    for (size_t i = 0; i < K; i++) {
      user.eligibility[i] = coin(rng) < options.eligibility;
      any = any || user.eligibility[i];
    }
    if (!any) {
      user.eligibility[std::uniform_int_distribution<size_t>(0, K - 1)(rng)] =
        true;
    }

    spec.users.push_back(std::move(user));
  }

  return spec;
}


ClusterSpec randomInstance(uint64_t seed, const RandomInstanceOptions& options)
{
  std::mt19937_64 rng(seed);
  return randomInstance(rng, options);
}

} // namespace psdsf {
