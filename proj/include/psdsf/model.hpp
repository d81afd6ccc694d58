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

#ifndef __PSDSF_MODEL_HPP__
#define __PSDSF_MODEL_HPP__

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace psdsf {

// Dense row-major matrix of doubles. Used for the N x K allocation and
// gamma matrices as well as per-server slack tables.
class Matrix
{
public:
  Matrix() = default;

  Matrix(size_t _rows, size_t _cols, double value = 0.0)
    : numRows(_rows), numCols(_cols), data(_rows * _cols, value) {}

  double& operator()(size_t row, size_t col)
  {
    return data[row * numCols + col];
  }

  double operator()(size_t row, size_t col) const
  {
    return data[row * numCols + col];
  }

  size_t rows() const { return numRows; }
  size_t cols() const { return numCols; }

  std::span<const double> row(size_t index) const
  {
    return {data.data() + index * numCols, numCols};
  }

  std::span<double> row(size_t index)
  {
    return {data.data() + index * numCols, numCols};
  }

  const std::vector<double>& values() const { return data; }

  bool operator==(const Matrix& that) const = default;

private:
  size_t numRows = 0;
  size_t numCols = 0;
  std::vector<double> data;
};


struct ResourceId
{
  size_t index = 0;
  std::string name;

  bool operator==(const ResourceId& that) const = default;
};


struct ServerSpec
{
  size_t id = 0;

  // Native units (cores, GB, Mb/s, ...), one entry per resource type.
  std::vector<double> capacities;

  bool operator==(const ServerSpec& that) const = default;
};


struct UserSpec
{
  size_t id = 0;

  // Per-task demand, one entry per resource type.
  std::vector<double> demand;

  double weight = 1.0;

  // Declared placement constraints, one entry per server.
  std::vector<bool> eligibility;

  bool operator==(const UserSpec& that) const = default;
};


struct ClusterSpec
{
  std::vector<ResourceId> resources;
  std::vector<ServerSpec> servers;
  std::vector<UserSpec> users;

  // Optional N x K matrix of effective monopoly task counts. When present it
  // replaces the per-server task counts derived from demands and capacities.
  std::optional<Matrix> gammaOverride;

  size_t numUsers() const { return users.size(); }
  size_t numServers() const { return servers.size(); }
  size_t numResources() const { return resources.size(); }

  bool operator==(const ClusterSpec& that) const = default;
};


// Fractional task counts x(n, i): rows are users, columns are servers.
struct Allocation
{
  Matrix tasks;

  static Allocation zeros(size_t users, size_t servers)
  {
    return Allocation{Matrix(users, servers)};
  }

  size_t numUsers() const { return tasks.rows(); }
  size_t numServers() const { return tasks.cols(); }

  bool operator==(const Allocation& that) const = default;
};


struct Violation
{
  // E.g. "user=1 server=0 resource=2".
  std::string subject;
  double measured = 0.0;
  double threshold = 0.0;
  std::string description;

  bool operator==(const Violation& that) const = default;
};


// Outcome of a verifier or checker. Passing means no violations were found.
struct Verdict
{
  std::vector<Violation> violations;

  bool passed() const { return violations.empty(); }

  void add(
      std::string subject,
      double measured,
      double threshold,
      std::string description)
  {
    violations.push_back(Violation{
        std::move(subject), measured, threshold, std::move(description)});
  }

  bool operator==(const Verdict& that) const = default;
};


// Builds a subject label such as "user=1 server=0".
std::string subject(
    std::optional<size_t> user,
    std::optional<size_t> server = std::nullopt,
    std::optional<size_t> resource = std::nullopt);


// Checks every structural invariant of a cluster description. Never throws;
// each problem found is reported as a separate violation.
Verdict validateScenario(const ClusterSpec& spec);

} // namespace psdsf {

#endif // __PSDSF_MODEL_HPP__
