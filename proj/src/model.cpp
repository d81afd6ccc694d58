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

#include "psdsf/model.hpp"

#include <cmath>
#include <sstream>

namespace psdsf {

std::string subject(
    std::optional<size_t> user,
    std::optional<size_t> server,
    std::optional<size_t> resource)
{
  std::ostringstream out;
  const char* separator = "";

  if (user.has_value()) {
    out << "user=" << *user;
    separator = " ";
  }
  if (server.has_value()) {
    out << separator << "server=" << *server;
    separator = " ";
  }
  if (resource.has_value()) {
    out << separator << "resource=" << *resource;
  }

  return out.str();
}


Verdict validateScenario(const ClusterSpec& spec)
{
  Verdict verdict;

  const size_t N = spec.numUsers();
  const size_t K = spec.numServers();
  const size_t M = spec.numResources();

  if (N == 0) {
    verdict.add("cluster", 0, 1, "at least one user is required");
  }
  if (K == 0) {
    verdict.add("cluster", 0, 1, "at least one server is required");
  }
  if (M == 0) {
    verdict.add("cluster", 0, 1, "at least one resource type is required");
  }

  for (size_t r = 0; r < M; r++) {
    if (spec.resources[r].index != r) {
      verdict.add(
          "resource=" + std::to_string(r),
          static_cast<double>(spec.resources[r].index),
          static_cast<double>(r),
          "resource index must equal its position");
    }
  }

  for (size_t i = 0; i < K; i++) {
    const ServerSpec& server = spec.servers[i];

    if (server.id != i) {
      verdict.add(
          subject(std::nullopt, i),
          static_cast<double>(server.id),
          static_cast<double>(i),
          "server id must equal its position");
    }

    if (server.capacities.size() != M) {
      verdict.add(
          subject(std::nullopt, i),
          static_cast<double>(server.capacities.size()),
          static_cast<double>(M),
          "capacity vector length must equal the number of resources");
      continue;
    }

    bool anyPositive = false;
    for (size_t r = 0; r < M; r++) {
      const double capacity = server.capacities[r];
      if (!std::isfinite(capacity) || capacity < 0.0) {
        verdict.add(
            subject(std::nullopt, i, r),
            std::isfinite(capacity) ? capacity : -1.0,
            0.0,
            "capacity must be finite and non-negative");
      } else if (capacity > 0.0) {
        anyPositive = true;
      }
    }

    if (!anyPositive && M > 0) {
      verdict.add(
          subject(std::nullopt, i), 0.0, 0.0,
          "server must have at least one positive capacity");
    }
  }

  for (size_t n = 0; n < N; n++) {
    const UserSpec& user = spec.users[n];

    if (user.id != n) {
      verdict.add(
          subject(n),
          static_cast<double>(user.id),
          static_cast<double>(n),
          "user id must equal its position");
    }

    if (!std::isfinite(user.weight) || user.weight <= 0.0) {
      verdict.add(
          subject(n),
          std::isfinite(user.weight) ? user.weight : -1.0,
          0.0,
          "weight must be positive");
    }

    if (user.eligibility.size() != K) {
      verdict.add(
          subject(n),
          static_cast<double>(user.eligibility.size()),
          static_cast<double>(K),
          "eligibility vector length must equal the number of servers");
    }

    if (user.demand.size() != M) {
      verdict.add(
          subject(n),
          static_cast<double>(user.demand.size()),
          static_cast<double>(M),
          "demand vector length must equal the number of resources");
      continue;
    }

    bool anyPositive = false;
    for (size_t r = 0; r < M; r++) {
      const double demand = user.demand[r];
      if (!std::isfinite(demand) || demand < 0.0) {
        verdict.add(
            subject(n, std::nullopt, r),
            std::isfinite(demand) ? demand : -1.0,
            0.0,
            "demand must be finite and non-negative");
      } else if (demand > 0.0) {
        anyPositive = true;
      }
    }

    if (!anyPositive && M > 0) {
      verdict.add(
          subject(n), 0.0, 0.0,
          "demand must have at least one positive entry");
    }
  }

  if (spec.gammaOverride.has_value()) {
    const Matrix& gamma = *spec.gammaOverride;

    if (gamma.rows() != N || gamma.cols() != K) {
      verdict.add(
          "gamma_override",
          static_cast<double>(gamma.rows() * gamma.cols()),
          static_cast<double>(N * K),
          "gamma override must be an N x K matrix");
    } else {
      for (size_t n = 0; n < N; n++) {
        for (size_t i = 0; i < K; i++) {
          const double value = gamma(n, i);
          if (!std::isfinite(value) || value < 0.0) {
            verdict.add(
                subject(n, i),
                std::isfinite(value) ? value : -1.0,
                0.0,
                "gamma override entries must be finite and non-negative");
            continue;
          }

          const bool declared =
            i < spec.users[n].eligibility.size() &&
            spec.users[n].eligibility[i];

          if (!declared && value > 0.0) {
            verdict.add(
                subject(n, i), value, 0.0,
                "gamma override is positive where the user is ineligible");
          }
        }
      }
    }
  }

  return verdict;
}

} // namespace psdsf {
