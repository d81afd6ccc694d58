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
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "psdsf/lp.hpp"

namespace psdsf {
namespace lp {
namespace tests {

namespace {

// Dense row a . x <= b (or == b).
struct Row
{
  std::vector<double> a;
  double b;
  Sense sense;
};


std::optional<std::vector<double>> solveSquare(
    std::vector<std::vector<double>> a,
    std::vector<double> b)
{
  const size_t n = b.size();
  for (size_t col = 0; col < n; col++) {
    size_t pivot = col;
    for (size_t row = col + 1; row < n; row++) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) {
        pivot = row;
      }
    }
    if (std::abs(a[pivot][col]) < 1e-12) {
      return std::nullopt;
    }
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (size_t row = 0; row < n; row++) {
      if (row == col) {
        continue;
      }
      const double factor = a[row][col] / a[col][col];
      for (size_t k = col; k < n; k++) {
        a[row][k] -= factor * a[col][k];
      }
      b[row] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (size_t k = 0; k < n; k++) {
    x[k] = b[k] / a[k][k];
  }
  return x;
}


bool satisfies(const std::vector<Row>& rows, const std::vector<double>& x)
{
  for (double value : x) {
    if (value < -1e-9) {
      return false;
    }
  }
  for (const Row& row : rows) {
    double lhs = 0.0;
    for (size_t j = 0; j < x.size(); j++) {
      lhs += row.a[j] * x[j];
    }
    const double slack = 1e-9 * std::max(1.0, std::abs(row.b));
    if (row.sense == Sense::LESS_EQUAL && lhs > row.b + slack) {
      return false;
    }
    if (row.sense == Sense::GREATER_EQUAL && lhs < row.b - slack) {
      return false;
    }
    if (row.sense == Sense::EQUAL && std::abs(lhs - row.b) > slack) {
      return false;
    }
  }
  return true;
}


// Best objective over all basic feasible points, or nullopt when none
// exists. Requires a bounded feasible region.
std::optional<double> enumerateVertices(
    const std::vector<double>& objective,
    const std::vector<Row>& rows)
{
  const size_t n = objective.size();

  // Candidate tight hyperplanes: every row plus every x_j = 0.
  std::vector<std::pair<std::vector<double>, double>> planes;
  for (const Row& row : rows) {
    planes.emplace_back(row.a, row.b);
  }
  for (size_t j = 0; j < n; j++) {
    std::vector<double> unit(n, 0.0);
    unit[j] = 1.0;
    planes.emplace_back(unit, 0.0);
  }

  std::optional<double> best;
  const size_t total = planes.size();

  // Iterate over n-subsets by bitmask.
  for (size_t mask = 0; mask < (size_t{1} << total); mask++) {
    if (static_cast<size_t>(__builtin_popcountll(mask)) != n) {
      continue;
    }
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (size_t k = 0; k < total; k++) {
      if (mask & (size_t{1} << k)) {
        a.push_back(planes[k].first);
        b.push_back(planes[k].second);
      }
    }
    const std::optional<std::vector<double>> x = solveSquare(a, b);
    if (!x.has_value() || !satisfies(rows, *x)) {
      continue;
    }
    double value = 0.0;
    for (size_t j = 0; j < n; j++) {
      value += objective[j] * (*x)[j];
    }
    if (!best.has_value() || value > *best) {
      best = value;
    }
  }
  return best;
}


Problem toProblem(
    const std::vector<double>& objective,
    const std::vector<Row>& rows)
{
  Problem problem;
  for (double cost : objective) {
    problem.addVariable(cost);
  }
  for (const Row& row : rows) {
    std::vector<std::pair<size_t, double>> terms;
    for (size_t j = 0; j < row.a.size(); j++) {
      if (row.a[j] != 0.0) {
        terms.emplace_back(j, row.a[j]);
      }
    }
    problem.addConstraint(terms, row.sense, row.b);
  }
  return problem;
}

} // namespace {


TEST(LpTest, TextbookMaximum)
{
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36.
  Problem problem;
  const size_t x = problem.addVariable(3.0);
  const size_t y = problem.addVariable(5.0);
  problem.addConstraint({{x, 1.0}}, Sense::LESS_EQUAL, 4.0);
  problem.addConstraint({{y, 2.0}}, Sense::LESS_EQUAL, 12.0);
  problem.addConstraint({{x, 3.0}, {y, 2.0}}, Sense::LESS_EQUAL, 18.0);

  const Solution solution = solve(problem);
  ASSERT_EQ(Status::OPTIMAL, solution.status);
  EXPECT_NEAR(36.0, solution.objective, 1e-9);
  EXPECT_NEAR(2.0, solution.values[x], 1e-9);
  EXPECT_NEAR(6.0, solution.values[y], 1e-9);
}


TEST(LpTest, DetectsInfeasibility)
{
  Problem problem;
  const size_t x = problem.addVariable(1.0);
  problem.addConstraint({{x, 1.0}}, Sense::LESS_EQUAL, 1.0);
  problem.addConstraint({{x, 1.0}}, Sense::GREATER_EQUAL, 2.0);

  const Solution solution = solve(problem);
  EXPECT_EQ(Status::INFEASIBLE, solution.status);
  EXPECT_NEAR(1.0, solution.infeasibility, 1e-9);
}


TEST(LpTest, DetectsUnboundedness)
{
  Problem problem;
  const size_t x = problem.addVariable(1.0);
  const size_t y = problem.addVariable(0.0);
  problem.addConstraint({{x, 1.0}, {y, -1.0}}, Sense::LESS_EQUAL, 1.0);

  EXPECT_EQ(Status::UNBOUNDED, solve(problem).status);
}


TEST(LpTest, EqualityAndNegativeRightHandSide)
{
  // x + y = 3, -x <= -1 (x >= 1), max -x + y -> x = 1, y = 2.
  Problem problem;
  const size_t x = problem.addVariable(-1.0);
  const size_t y = problem.addVariable(1.0);
  problem.addConstraint({{x, 1.0}, {y, 1.0}}, Sense::EQUAL, 3.0);
  problem.addConstraint({{x, -1.0}}, Sense::LESS_EQUAL, -1.0);

  const Solution solution = solve(problem);
  ASSERT_EQ(Status::OPTIMAL, solution.status);
  EXPECT_NEAR(1.0, solution.objective, 1e-9);
  EXPECT_NEAR(1.0, solution.values[x], 1e-9);
  EXPECT_NEAR(2.0, solution.values[y], 1e-9);
}


TEST(LpTest, MatchesVertexEnumeration)
{
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> coefficient(-1.0, 2.0);
  std::uniform_real_distribution<double> bound(0.5, 5.0);
  std::uniform_int_distribution<int> senses(0, 5);

  size_t feasible = 0;
  size_t infeasible = 0;

  for (int trial = 0; trial < 300; trial++) {
    const size_t n = 2 + trial % 3;
    const size_t m = 2 + (trial / 3) % 3;

    std::vector<double> objective(n);
    for (double& cost : objective) {
      cost = coefficient(rng);
    }

    std::vector<Row> rows;
    for (size_t k = 0; k < m; k++) {
      Row row{std::vector<double>(n), bound(rng), Sense::LESS_EQUAL};
      for (double& a : row.a) {
        a = coefficient(rng);
      }
      const int sense = senses(rng);
      if (sense == 0) {
        row.sense = Sense::GREATER_EQUAL;
      } else if (sense == 1) {
        row.sense = Sense::EQUAL;
      }
      rows.push_back(row);
    }

    // Box rows keep the region bounded.
    for (size_t j = 0; j < n; j++) {
      Row box{std::vector<double>(n, 0.0), 10.0, Sense::LESS_EQUAL};
      box.a[j] = 1.0;
      rows.push_back(box);
    }

    const std::optional<double> expected = enumerateVertices(objective, rows);
    const Solution solution = solve(toProblem(objective, rows));

    if (!expected.has_value()) {
      EXPECT_EQ(Status::INFEASIBLE, solution.status) << "trial " << trial;
      infeasible++;
      continue;
    }

    feasible++;
    ASSERT_EQ(Status::OPTIMAL, solution.status) << "trial " << trial;
    EXPECT_NEAR(*expected, solution.objective, 1e-7) << "trial " << trial;
    EXPECT_TRUE(satisfies(rows, solution.values)) << "trial " << trial;
  }

  // Both outcomes should be exercised.
  EXPECT_GT(feasible, 50u);
  EXPECT_GT(infeasible, 5u);
}

} // namespace tests {
} // namespace lp {
} // namespace psdsf {
