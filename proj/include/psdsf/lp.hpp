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

#ifndef __PSDSF_LP_HPP__
#define __PSDSF_LP_HPP__

#include <cstddef>
#include <utility>
#include <vector>

namespace psdsf {
namespace lp {

enum class Sense
{
  LESS_EQUAL,
  GREATER_EQUAL,
  EQUAL,
};


struct Constraint
{
  // Sparse coefficients as (variable, coefficient) pairs.
  std::vector<std::pair<size_t, double>> terms;
  Sense sense = Sense::LESS_EQUAL;
  double rhs = 0.0;
};


// maximize objective . x  subject to constraints, x >= 0.
struct Problem
{
  size_t numVariables = 0;
  std::vector<double> objective;
  std::vector<Constraint> constraints;

  size_t addVariable(double cost = 0.0)
  {
    objective.push_back(cost);
    return numVariables++;
  }

  void addConstraint(
      std::vector<std::pair<size_t, double>> terms,
      Sense sense,
      double rhs)
  {
    constraints.push_back(Constraint{std::move(terms), sense, rhs});
  }
};


enum class Status
{
  OPTIMAL,
  INFEASIBLE,
  UNBOUNDED,
};


struct Solution
{
  Status status = Status::INFEASIBLE;
  double objective = 0.0;
  std::vector<double> values;

  // Sum of artificial variables left after phase one; zero (up to
  // tolerance) when the problem is feasible.
  double infeasibility = 0.0;
};


// Dense two-phase primal simplex with Bland's rule. Intended for the small
// programs that arise from desk-scale clusters (tens to a few hundred
// variables).
Solution solve(const Problem& problem, double tolerance = 1e-9);

} // namespace lp {
} // namespace psdsf {

#endif // __PSDSF_LP_HPP__
