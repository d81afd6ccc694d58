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

#include "psdsf/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace psdsf {
namespace lp {

namespace {

constexpr double kPivotEpsilon = 1e-12;


class Tableau
{
public:
  Tableau(size_t _rows, size_t _cols)
    : rows(_rows), cols(_cols), cells((_rows + 1) * (_cols + 1), 0.0),
      basis(_rows, 0) {}

  double& at(size_t row, size_t col) { return cells[row * (cols + 1) + col]; }

  double at(size_t row, size_t col) const
  {
    return cells[row * (cols + 1) + col];
  }

  // Right-hand side of a row; the objective row holds the objective value.
  double& rhs(size_t row) { return at(row, cols); }

  double& cost(size_t col) { return at(rows, col); }

  void pivot(size_t pivotRow, size_t pivotCol)
  {
    const double element = at(pivotRow, pivotCol);
    for (size_t c = 0; c <= cols; c++) {
      at(pivotRow, c) /= element;
    }

    for (size_t r = 0; r <= rows; r++) {
      if (r == pivotRow) {
        continue;
      }
      const double factor = at(r, pivotCol);
      if (factor == 0.0) {
        continue;
      }
      for (size_t c = 0; c <= cols; c++) {
        at(r, c) -= factor * at(pivotRow, c);
      }
      at(r, pivotCol) = 0.0;
    }

    basis[pivotRow] = pivotCol;
  }

  // Loads "maximize costs . x" into the objective row, expressed in terms of
  // the current basis.
  void setObjective(const std::vector<double>& costs)
  {
    for (size_t c = 0; c <= cols; c++) {
      cost(c) = c < cols ? -costs[c] : 0.0;
    }
    for (size_t r = 0; r < rows; r++) {
      const double weight = costs[basis[r]];
      if (weight == 0.0) {
        continue;
      }
      for (size_t c = 0; c <= cols; c++) {
        at(rows, c) += weight * at(r, c);
      }
    }
  }

  // Runs primal simplex iterations with Bland's rule over the enterable
  // columns. Returns false if the objective is unbounded.
  bool optimize(const std::vector<bool>& enterable, double tolerance)
  {
    while (true) {
      size_t entering = cols;
      for (size_t c = 0; c < cols; c++) {
        if (enterable[c] && cost(c) < -tolerance) {
          entering = c;
          break;
        }
      }

      if (entering == cols) {
        return true;
      }

      size_t leaving = rows;
      double bestRatio = std::numeric_limits<double>::infinity();
      for (size_t r = 0; r < rows; r++) {
        const double coefficient = at(r, entering);
        if (coefficient <= kPivotEpsilon) {
          continue;
        }
        const double ratio = at(r, cols) / coefficient;
        if (ratio < bestRatio - kPivotEpsilon ||
            (std::abs(ratio - bestRatio) <= kPivotEpsilon &&
             leaving < rows && basis[r] < basis[leaving])) {
          bestRatio = ratio;
          leaving = r;
        }
      }

      if (leaving == rows) {
        return false;
      }

      pivot(leaving, entering);
    }
  }

  const size_t rows;
  const size_t cols;

  std::vector<double> cells;
  std::vector<size_t> basis;
};

} // namespace {


Solution solve(const Problem& problem, double tolerance)
{
  const size_t n = problem.numVariables;
  const size_t m = problem.constraints.size();

  // Normalize every row to a non-negative right-hand side.
  std::vector<Constraint> rows = problem.constraints;
  double scale = 1.0;
  for (Constraint& row : rows) {
    if (row.rhs < 0.0) {
      row.rhs = -row.rhs;
      for (auto& term : row.terms) {
        term.second = -term.second;
      }
      if (row.sense == Sense::LESS_EQUAL) {
        row.sense = Sense::GREATER_EQUAL;
      } else if (row.sense == Sense::GREATER_EQUAL) {
        row.sense = Sense::LESS_EQUAL;
      }
    }
    scale = std::max(scale, row.rhs);
  }

  size_t numSlack = 0;
  size_t numArtificial = 0;
  for (const Constraint& row : rows) {
    if (row.sense != Sense::EQUAL) {
      numSlack++;
    }
    if (row.sense != Sense::LESS_EQUAL) {
      numArtificial++;
    }
  }

  const size_t firstSlack = n;
  const size_t firstArtificial = n + numSlack;
  const size_t cols = n + numSlack + numArtificial;

  Tableau tableau(m, cols);

  size_t slack = firstSlack;
  size_t artificial = firstArtificial;
  for (size_t r = 0; r < m; r++) {
    const Constraint& row = rows[r];
    for (const auto& [variable, coefficient] : row.terms) {
      tableau.at(r, variable) += coefficient;
    }
    tableau.rhs(r) = row.rhs;

    switch (row.sense) {
      case Sense::LESS_EQUAL:
        tableau.at(r, slack) = 1.0;
        tableau.basis[r] = slack++;
        break;
      case Sense::GREATER_EQUAL:
        tableau.at(r, slack++) = -1.0;
        tableau.at(r, artificial) = 1.0;
        tableau.basis[r] = artificial++;
        break;
      case Sense::EQUAL:
        tableau.at(r, artificial) = 1.0;
        tableau.basis[r] = artificial++;
        break;
    }
  }

  Solution solution;
  std::vector<bool> enterable(cols, true);

  // Phase one: drive the artificial variables to zero.
  if (numArtificial > 0) {
    std::vector<double> phaseOne(cols, 0.0);
    for (size_t c = firstArtificial; c < cols; c++) {
      phaseOne[c] = -1.0;
    }
    tableau.setObjective(phaseOne);
    tableau.optimize(enterable, kPivotEpsilon);

    solution.infeasibility = std::max(0.0, -tableau.rhs(m));
    if (solution.infeasibility > tolerance * scale) {
      solution.status = Status::INFEASIBLE;
      return solution;
    }

    // Pivot any artificial still in the basis (at zero level) out of it.
    for (size_t r = 0; r < m; r++) {
      if (tableau.basis[r] < firstArtificial) {
        continue;
      }
      for (size_t c = 0; c < firstArtificial; c++) {
        if (std::abs(tableau.at(r, c)) > 1e-9) {
          tableau.pivot(r, c);
          break;
        }
      }
    }

    for (size_t c = firstArtificial; c < cols; c++) {
      enterable[c] = false;
    }
  }

  // Phase two.
  std::vector<double> costs(cols, 0.0);
  std::copy(problem.objective.begin(), problem.objective.end(), costs.begin());
  tableau.setObjective(costs);

  if (!tableau.optimize(enterable, kPivotEpsilon)) {
    solution.status = Status::UNBOUNDED;
    return solution;
  }

  solution.status = Status::OPTIMAL;
  solution.values.assign(n, 0.0);
  for (size_t r = 0; r < m; r++) {
    if (tableau.basis[r] < n) {
      solution.values[tableau.basis[r]] = std::max(0.0, tableau.rhs(r));
    }
  }

  solution.objective = 0.0;
  for (size_t j = 0; j < n; j++) {
    solution.objective += problem.objective[j] * solution.values[j];
  }

  return solution;
}

} // namespace lp {
} // namespace psdsf {
