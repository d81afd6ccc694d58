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

#ifndef __PSDSF_KERNEL_HPP__
#define __PSDSF_KERNEL_HPP__

#include <cstddef>
#include <optional>
#include <vector>

#include "psdsf/model.hpp"

namespace psdsf {

// Relative slack allowed on capacity (RDM) and time-share (TDM) constraints.
constexpr double kFeasibilityTolerance = 1e-9;

// A resource counts as saturated when its usage is within this fraction of
// capacity.
constexpr double kSaturationTolerance = 1e-7;

// Absolute tolerance when comparing normalized virtual dominant shares.
constexpr double kTieTolerance = 1e-7;


// Number of tasks each user could run when monopolizing each server.
// A server is eligible for a user iff the entry is positive.
class GammaMatrix
{
public:
  GammaMatrix() = default;

  explicit GammaMatrix(Matrix _values) : values(std::move(_values)) {}

  double operator()(size_t user, size_t server) const
  {
    return values(user, server);
  }

  bool eligible(size_t user, size_t server) const
  {
    return values(user, server) > 0.0;
  }

  size_t numUsers() const { return values.rows(); }
  size_t numServers() const { return values.cols(); }

  const Matrix& matrix() const { return values; }

  bool operator==(const GammaMatrix& that) const = default;

private:
  Matrix values;
};


// Normalized virtual dominant shares x_n / (weight_n * gamma(n, i)).
// Entries where the server is ineligible for the user are undefined.
class VdsView
{
public:
  VdsView(Matrix _normalized, std::vector<bool> _defined)
    : normalized(std::move(_normalized)), defined(std::move(_defined)) {}

  std::optional<double> at(size_t user, size_t server) const
  {
    if (!defined[user * normalized.cols() + server]) {
      return std::nullopt;
    }
    return normalized(user, server);
  }

  // Minimum normalized share over the users eligible at the server, or
  // nullopt if nobody is eligible.
  std::optional<double> level(size_t server) const;

private:
  Matrix normalized;
  std::vector<bool> defined;
};


// Outcome of a capacity check along with the exact slacks that produced it.
// RDM slacks are K x M (capacity minus usage); TDM slacks are K x 1 (one
// minus the time share in use).
struct FeasibilityReport
{
  Verdict verdict;
  Matrix slack;
};


// Resource maximizing demand / capacity at the server, ignoring resources the
// user does not demand. A demanded resource with zero capacity wins outright.
// Ties go to the lowest index.
std::optional<size_t> dominantResource(
    const UserSpec& user,
    const ServerSpec& server);

// Tasks the user could run alone on the server, including the declared
// placement constraint.
double monopolyTasks(const UserSpec& user, const ServerSpec& server);

// Monopoly task counts for all pairs, or the override when one is present.
// Parallel over users; gammaMatrixSerial is the reference implementation.
GammaMatrix gammaMatrix(const ClusterSpec& spec);
GammaMatrix gammaMatrixSerial(const ClusterSpec& spec);

// True when the cluster carries no override or the override agrees with the
// demand-derived task counts to within kFeasibilityTolerance (relative).
bool overrideMatchesDemands(const ClusterSpec& spec);

std::vector<double> taskTotals(const Allocation& allocation);

VdsView vdsView(
    const Allocation& allocation,
    const GammaMatrix& gamma,
    const std::vector<UserSpec>& users);

// Usage of every resource at every server: sum_n x(n, i) * d(n, r).
Matrix resourceUsage(const ClusterSpec& spec, const Allocation& allocation);

FeasibilityReport rdmFeasible(
    const ClusterSpec& spec,
    const Allocation& allocation);

FeasibilityReport tdmFeasible(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation);

std::vector<size_t> saturatedResources(
    const ClusterSpec& spec,
    const Allocation& allocation,
    size_t server);

bool isBottleneck(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation,
    size_t user,
    size_t server,
    size_t resource);

// Every user must have a bottleneck resource at every eligible server.
Verdict verifyPsdsfRdm(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation);

// Every server with eligible users is fully time-shared, and only users at
// the server's minimum normalized share hold tasks there.
Verdict verifyPsdsfTdm(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation);

} // namespace psdsf {

#endif // __PSDSF_KERNEL_HPP__
