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

#include "psdsf/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "psdsf/lp.hpp"
#include "psdsf/random.hpp"

#include "split_program.hpp"

namespace psdsf {

namespace {

constexpr double kFairnessStep = 1e-5;


PropertyReport makeReport(std::string property)
{
  PropertyReport report;
  report.property = std::move(property);
  return report;
}


void fail(
    PropertyReport& report,
    PropertyWitness witness,
    std::string subject,
    double measured,
    double threshold)
{
  report.verdict.add(
      std::move(subject), measured, threshold, witness.description);
  if (!report.witness.has_value()) {
    report.witness = std::move(witness);
  }
}


// Resources attaining the largest demand / capacity ratio at the server.
std::vector<size_t> dominantSet(const UserSpec& user, const ServerSpec& server)
{
  const std::optional<size_t> dominant = dominantResource(user, server);
  if (!dominant.has_value()) {
    return {};
  }

  auto ratio = [&](size_t r) {
    return server.capacities[r] > 0.0
      ? user.demand[r] / server.capacities[r]
      : std::numeric_limits<double>::infinity();
  };

  const double best = ratio(*dominant);

  std::vector<size_t> result;
  for (size_t r = 0; r < user.demand.size(); r++) {
    if (user.demand[r] <= 0.0) {
      continue;
    }
    const double value = ratio(r);
    if (value == best ||
        (std::isfinite(best) && value >= best * (1.0 - 1e-12))) {
      result.push_back(r);
    }
  }
  return result;
}


// Constrained weighted max-min on one resource: nobody can gain
// kFairnessStep of level without lowering a user whose level is no larger.
void checkMaxMinOn(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation,
    size_t resource,
    PropertyReport& report)
{
  const size_t N = spec.numUsers();
  const std::vector<double> totals = taskTotals(allocation);

  std::vector<double> levels(N, 0.0);
  for (size_t n = 0; n < N; n++) {
    levels[n] =
      totals[n] * spec.users[n].demand[resource] / spec.users[n].weight;
  }

  for (size_t n = 0; n < N; n++) {
    const double demand = spec.users[n].demand[resource];
    if (demand <= 0.0) {
      continue;
    }

    SplitProgram program = splitProgram(spec, gamma, Multiplexing::RDM);

    auto terms = program.total(n);
    if (terms.empty()) {
      continue;
    }

    const double raised =
      totals[n] + kFairnessStep * spec.users[n].weight / demand;
    program.problem.addConstraint(
        std::move(terms), lp::Sense::GREATER_EQUAL, raised);

    // Users at or below n's level keep every per-server entry. Levels
    // within the property tolerance count as equal.
    const double ceiling =
      levels[n] + kPropertyTolerance * std::max(1.0, levels[n]);
    for (size_t m = 0; m < N; m++) {
      if (m == n || levels[m] > ceiling) {
        continue;
      }
      for (size_t i = 0; i < spec.numServers(); i++) {
        std::optional<size_t> x = program.variable(m, i);
        if (x.has_value() && allocation.tasks(m, i) > 0.0) {
          program.problem.addConstraint(
              {{*x, 1.0}}, lp::Sense::GREATER_EQUAL, allocation.tasks(m, i));
        }
      }
    }

    if (lp::solve(program.problem).status == lp::Status::OPTIMAL) {
      fail(
          report,
          PropertyWitness{
            {n}, {}, {levels[n]},
            "user's share of the resource can grow without lowering any "
            "user at or below its level"},
          subject(n, std::nullopt, resource),
          levels[n],
          levels[n] + kFairnessStep);
    }
  }
}


struct TrialOutcome
{
  bool skipped = false;
  bool violated = false;
  MisreportKind kind = MisreportKind::SCALE;
  double utility = 0.0;
  std::optional<size_t> harmed;
  double harmedTotal = 0.0;
};


bool allDemandsPositive(const ClusterSpec& spec)
{
  for (const UserSpec& user : spec.users) {
    for (double demand : user.demand) {
      if (demand <= 0.0) {
        return false;
      }
    }
  }
  return true;
}


TrialOutcome runTrial(
    const ClusterSpec& spec,
    Mechanism mechanism,
    size_t user,
    const std::vector<double>& truthful,
    uint64_t seed,
    size_t trial)
{
  TrialOutcome outcome;

  const Misreport misreport = drawMisreport(spec, user, seed, trial);
  outcome.kind = misreport.kind;

  const MechanismResult lied =
    runMechanism(applyMisreport(spec, user, misreport), mechanism);

  if (!lied.converged) {
    outcome.skipped = true;
    return outcome;
  }

  outcome.utility = trueUtility(
      spec.users[user].demand, misreport.demand, lied.totals[user]);

  if (mechanism != Mechanism::PSDSF_RDM) {
    outcome.violated =
      outcome.utility > truthful[user] + kPropertyTolerance;
    return outcome;
  }

  for (size_t m = 0; m < spec.numUsers(); m++) {
    if (m != user && lied.totals[m] < truthful[m] - kPropertyTolerance) {
      outcome.harmed = m;
      outcome.harmedTotal = lied.totals[m];
      break;
    }
  }

  outcome.violated = outcome.harmed.has_value() &&
    outcome.utility >= truthful[user] - kPropertyTolerance;

  return outcome;
}


std::string kindName(MisreportKind kind)
{
  switch (kind) {
    case MisreportKind::SCALE: return "scale";
    case MisreportKind::ZERO_COMPONENT: return "zero-component";
    case MisreportKind::DROP_SERVER: return "drop-server";
  }
  return "unknown";
}


template <typename Runner>
PropertyReport harness(
    const ClusterSpec& spec,
    Mechanism mechanism,
    size_t user,
    size_t trials,
    Runner&& run)
{
  PropertyReport report = makeReport("strategy-proofness");

  if (mechanism == Mechanism::PSDSF_RDM && !allDemandsPositive(spec)) {
    report.applicable = false;
    report.note = "skipped: some user does not demand every resource";
    return report;
  }

  const MechanismResult truthful = runMechanism(spec, mechanism);
  if (!truthful.converged) {
    report.applicable = false;
    report.note = "skipped: truthful allocation did not converge";
    return report;
  }

  std::vector<TrialOutcome> outcomes(trials);
  run(outcomes, truthful.totals);

  size_t skipped = 0;
  for (size_t t = 0; t < trials; t++) {
    const TrialOutcome& outcome = outcomes[t];
    if (outcome.skipped) {
      skipped++;
      continue;
    }
    if (!outcome.violated) {
      continue;
    }

    PropertyWitness witness;
    witness.users.push_back(user);
    witness.values = {
      static_cast<double>(t), outcome.utility, truthful.totals[user]};

    if (outcome.harmed.has_value()) {
      witness.users.push_back(*outcome.harmed);
      witness.values.push_back(outcome.harmedTotal);
      witness.description = kindName(outcome.kind) +
        " misreport harmed another user without lowering the liar's utility";
    } else {
      witness.description =
        kindName(outcome.kind) + " misreport raised the liar's utility";
    }

    fail(
        report,
        std::move(witness),
        subject(user) + " trial=" + std::to_string(t),
        outcome.utility,
        truthful.totals[user]);
  }

  report.note = std::to_string(trials - skipped) + " trials, " +
    std::to_string(skipped) + " skipped";

  return report;
}

} // namespace {


PropertyReport checkSharingIncentive(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const std::vector<double>& totals)
{
  PropertyReport report = makeReport("sharing-incentive");

  const std::vector<double> uniform = uniformAllocation(spec, gamma);

  for (size_t n = 0; n < spec.numUsers(); n++) {
    const double floor =
      uniform[n] - kPropertyTolerance * std::max(1.0, uniform[n]);
    if (totals[n] < floor) {
      fail(
          report,
          PropertyWitness{
            {n}, {}, {totals[n], uniform[n]},
            "user receives fewer tasks than under the uniform allocation"},
          subject(n),
          totals[n],
          uniform[n]);
    }
  }

  return report;
}


PropertyReport checkEnvyFreeness(
    const ClusterSpec& spec,
    const Allocation& allocation)
{
  PropertyReport report = makeReport("envy-freeness");

  const GammaMatrix gamma = gammaMatrix(spec);

  for (size_t n = 0; n < spec.numUsers(); n++) {
    const double own = taskTotals(allocation)[n];

    for (size_t m = 0; m < spec.numUsers(); m++) {
      if (m == n) {
        continue;
      }

      // Tasks of m placed where n cannot run are worth nothing to n.
      double usable = 0.0;
      for (size_t i = 0; i < spec.numServers(); i++) {
        if (gamma.eligible(n, i)) {
          usable += allocation.tasks(m, i);
        }
      }

      const double value = (spec.users[n].weight / spec.users[m].weight) *
        trueUtility(spec.users[n].demand, spec.users[m].demand, usable);

      if (value > own + kPropertyTolerance) {
        fail(
            report,
            PropertyWitness{
              {n, m}, {}, {value, own},
              "user prefers the weight-scaled bundle of another user"},
            subject(n) + " other=" + std::to_string(m),
            value,
            own);
      }
    }
  }

  return report;
}


PropertyReport checkPareto(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation,
    Multiplexing mode)
{
  PropertyReport report = makeReport("pareto-optimality");

  const std::vector<double> totals = taskTotals(allocation);

  SplitProgram program = splitProgram(spec, gamma, mode);

  std::vector<size_t> extra(spec.numUsers());
  double scale = 0.0;
  for (size_t n = 0; n < spec.numUsers(); n++) {
    extra[n] = program.problem.addVariable(1.0);
    scale += std::max(1.0, totals[n]);

    auto terms = program.total(n);
    terms.emplace_back(extra[n], -1.0);
    program.problem.addConstraint(
        std::move(terms), lp::Sense::EQUAL, totals[n]);
  }

  const lp::Solution solution = lp::solve(program.problem);

  if (solution.status != lp::Status::OPTIMAL) {
    fail(
        report,
        PropertyWitness{{}, {}, {}, "allocation totals are not attainable"},
        "allocation",
        solution.infeasibility,
        0.0);
    return report;
  }

  if (solution.objective > kPropertyTolerance * scale) {
    PropertyWitness witness;
    witness.description =
      "some user's total can grow without lowering any other user";
    for (size_t n = 0; n < spec.numUsers(); n++) {
      if (solution.values[extra[n]] > 0.0) {
        witness.users.push_back(n);
        witness.values.push_back(solution.values[extra[n]]);
      }
    }
    fail(
        report,
        std::move(witness),
        "allocation",
        solution.objective,
        kPropertyTolerance * scale);
  }

  return report;
}


std::optional<size_t> systemBottleneck(
    const ClusterSpec& spec,
    const GammaMatrix& gamma)
{
  std::vector<bool> common(spec.numResources(), true);
  bool any = false;

  for (size_t n = 0; n < spec.numUsers(); n++) {
    for (size_t i = 0; i < spec.numServers(); i++) {
      if (!gamma.eligible(n, i)) {
        continue;
      }
      any = true;
      const std::vector<size_t> dominant =
        dominantSet(spec.users[n], spec.servers[i]);
      for (size_t r = 0; r < spec.numResources(); r++) {
        if (std::find(dominant.begin(), dominant.end(), r) ==
            dominant.end()) {
          common[r] = false;
        }
      }
    }
  }

  if (!any) {
    return std::nullopt;
  }

  for (size_t r = 0; r < spec.numResources(); r++) {
    if (common[r]) {
      return r;
    }
  }
  return std::nullopt;
}


PropertyReport checkBottleneckFairness(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation)
{
  PropertyReport report = makeReport("bottleneck-fairness");

  const std::optional<size_t> bottleneck = systemBottleneck(spec, gamma);
  if (!bottleneck.has_value()) {
    report.applicable = false;
    report.note = "no system bottleneck";
    return report;
  }

  report.note = "bottleneck=" + spec.resources[*bottleneck].name;
  checkMaxMinOn(spec, gamma, allocation, *bottleneck, report);
  return report;
}


PropertyReport checkSingleResourceFairness(
    const ClusterSpec& spec,
    const GammaMatrix& gamma,
    const Allocation& allocation)
{
  PropertyReport report = makeReport("single-resource-fairness");

  if (spec.numResources() != 1) {
    report.applicable = false;
    fail(
        report,
        PropertyWitness{{}, {}, {}, "requires exactly one resource type"},
        "cluster",
        static_cast<double>(spec.numResources()),
        1.0);
    return report;
  }

  checkMaxMinOn(spec, gamma, allocation, 0, report);
  return report;
}


double trueUtility(
    const std::vector<double>& truth,
    const std::vector<double>& reported,
    double tasks)
{
  double ratio = std::numeric_limits<double>::infinity();
  for (size_t r = 0; r < truth.size(); r++) {
    if (truth[r] > 0.0) {
      ratio = std::min(ratio, reported[r] / truth[r]);
    }
  }
  return std::isfinite(ratio) ? tasks * ratio : 0.0;
}


Misreport drawMisreport(
    const ClusterSpec& spec,
    size_t user,
    uint64_t seed,
    size_t trial)
{
  std::seed_seq sequence{
    static_cast<uint32_t>(seed),
    static_cast<uint32_t>(seed >> 32),
    static_cast<uint32_t>(user),
    static_cast<uint32_t>(trial)};
  std::mt19937_64 rng(sequence);

  const UserSpec& truth = spec.users[user];

  Misreport misreport;
  misreport.demand = truth.demand;
  misreport.eligibility = truth.eligibility;

  std::vector<size_t> demanded;
  for (size_t r = 0; r < truth.demand.size(); r++) {
    if (truth.demand[r] > 0.0) {
      demanded.push_back(r);
    }
  }

  std::vector<size_t> eligible;
  for (size_t i = 0; i < truth.eligibility.size(); i++) {
    if (truth.eligibility[i]) {
      eligible.push_back(i);
    }
  }

  auto pick = [&](const std::vector<size_t>& values) {
    return values[std::uniform_int_distribution<size_t>(
        0, values.size() - 1)(rng)];
  };

  const int kind = std::uniform_int_distribution<int>(0, 2)(rng);

  if (kind == 1 && demanded.size() > 1) {
    misreport.kind = MisreportKind::ZERO_COMPONENT;
    misreport.demand[pick(demanded)] = 0.0;
    return misreport;
  }

  if (kind == 2 && eligible.size() > 1) {
    misreport.kind = MisreportKind::DROP_SERVER;
    misreport.eligibility[pick(eligible)] = false;
    return misreport;
  }

  misreport.kind = MisreportKind::SCALE;
  for (double& demand : misreport.demand) {
    demand *= logUniform(rng, 0.25, 4.0);
  }
  return misreport;
}


ClusterSpec applyMisreport(
    const ClusterSpec& spec,
    size_t user,
    const Misreport& misreport)
{
  ClusterSpec lied = spec;
  lied.users[user].demand = misreport.demand;
  lied.users[user].eligibility = misreport.eligibility;

  if (lied.gammaOverride.has_value()) {
    for (size_t i = 0; i < spec.numServers(); i++) {
      if (!misreport.eligibility[i]) {
        (*lied.gammaOverride)(user, i) = 0.0;
      }
    }
  }

  return lied;
}


PropertyReport strategyHarness(
    const ClusterSpec& spec,
    Mechanism mechanism,
    size_t user,
    size_t trials,
    uint64_t seed)
{
  return harness(
      spec, mechanism, user, trials,
      [&](std::vector<TrialOutcome>& outcomes,
          const std::vector<double>& truthful) {
        const long count = static_cast<long>(outcomes.size());

        // Each trial writes only its own slot; the reduction happens
        // afterwards in trial order.
#pragma omp parallel for schedule(dynamic)
        for (long t = 0; t < count; t++) {
          outcomes[t] =
            runTrial(spec, mechanism, user, truthful, seed, t);
        }
      });
}


PropertyReport strategyHarnessSerial(
    const ClusterSpec& spec,
    Mechanism mechanism,
    size_t user,
    size_t trials,
    uint64_t seed)
{
  return harness(
      spec, mechanism, user, trials,
      [&](std::vector<TrialOutcome>& outcomes,
          const std::vector<double>& truthful) {
        for (size_t t = 0; t < outcomes.size(); t++) {
          outcomes[t] =
            runTrial(spec, mechanism, user, truthful, seed, t);
        }
      });
}

} // namespace psdsf {
