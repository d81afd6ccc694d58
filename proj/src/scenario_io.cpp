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

#include "psdsf/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "psdsf/kernel.hpp"

namespace psdsf {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void reject(const std::string& path, const std::string& message)
{
  throw ScenarioError(path + ": " + message);
}


void allowKeys(
    const json& object,
    const std::string& path,
    const std::set<std::string>& allowed)
{
  if (!object.is_object()) {
    reject(path, "expected an object");
  }
  for (const auto& item : object.items()) {
    if (allowed.count(item.key()) == 0) {
      reject(path, "unknown key '" + item.key() + "'");
    }
  }
}


const json& member(
    const json& object,
    const std::string& key,
    const std::string& path)
{
  auto found = object.find(key);
  if (found == object.end()) {
    reject(path, "missing key '" + key + "'");
  }
  return *found;
}


double number(const json& value, const std::string& path)
{
  if (!value.is_number()) {
    reject(path, "expected a number");
  }
  return value.get<double>();
}


std::vector<double> numbers(const json& value, const std::string& path)
{
  if (!value.is_array()) {
    reject(path, "expected an array of numbers");
  }
  std::vector<double> result;
  for (size_t k = 0; k < value.size(); k++) {
    result.push_back(number(value[k], path + "[" + std::to_string(k) + "]"));
  }
  return result;
}


// Ids may be written as strings or integers.
std::string name(const json& value, const std::string& path)
{
  if (value.is_string()) {
    return value.get<std::string>();
  }
  if (value.is_number_integer()) {
    return std::to_string(value.get<long long>());
  }
  reject(path, "expected a string or integer id");
}


json parseJson(const std::string& text)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error& error) {
    throw ScenarioError(error.what());
  }
}


std::vector<std::string> splitFields(const std::string& line)
{
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}


double parseDouble(const std::string& text, const std::string& where)
{
  try {
    size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size()) {
      return value;
    }
  } catch (const std::exception&) {
  }
  throw ScenarioError(where + ": '" + text + "' is not a number");
}


size_t lookup(
    const std::vector<std::string>& names,
    const std::string& wanted,
    const std::string& where,
    const std::string& what)
{
  for (size_t k = 0; k < names.size(); k++) {
    if (names[k] == wanted) {
      return k;
    }
  }
  throw ScenarioError(where + ": unknown " + what + " '" + wanted + "'");
}

} // namespace {


Scenario parseScenario(const std::string& text)
{
  const json document = parseJson(text);

  allowKeys(document, "scenario", {
      "description", "resources", "servers", "users", "gamma_override",
      "events"});

  Scenario scenario;
  ClusterSpec& spec = scenario.spec;

  const json& resources = member(document, "resources", "scenario");
  if (!resources.is_array()) {
    reject("resources", "expected an array of names");
  }
  for (size_t r = 0; r < resources.size(); r++) {
    spec.resources.push_back(ResourceId{
        r, name(resources[r], "resources[" + std::to_string(r) + "]")});
  }

  // Class id -> expanded server indices.
  std::map<std::string, std::vector<size_t>> classes;

  const json& servers = member(document, "servers", "scenario");
  if (!servers.is_array()) {
    reject("servers", "expected an array");
  }
  for (size_t k = 0; k < servers.size(); k++) {
    const std::string path = "servers[" + std::to_string(k) + "]";
    const json& entry = servers[k];
    allowKeys(entry, path, {"id", "capacity", "count"});

    const std::string id = name(member(entry, "id", path), path + ".id");
    const std::vector<double> capacity =
      numbers(member(entry, "capacity", path), path + ".capacity");

    size_t count = 1;
    bool expand = false;
    if (entry.contains("count")) {
      const json& value = entry["count"];
      if (!value.is_number_integer() || value.get<long long>() < 1) {
        reject(path + ".count", "expected a positive integer");
      }
      count = value.get<size_t>();
      expand = true;
    }

    if (spec.servers.size() + count > kMaxServers) {
      reject(path + ".count",
             "cluster would exceed " + std::to_string(kMaxServers) +
             " servers");
    }

    for (size_t c = 1; c <= count; c++) {
      const std::string server = expand ? id + "-" + std::to_string(c) : id;
      for (const std::string& existing : scenario.serverNames) {
        if (existing == server) {
          reject(path + ".id", "duplicate server id '" + server + "'");
        }
      }
      classes[id].push_back(spec.servers.size());
      if (expand) {
        classes[server].push_back(spec.servers.size());
      }
      spec.servers.push_back(ServerSpec{spec.servers.size(), capacity});
      scenario.serverNames.push_back(server);
    }
  }

  const size_t K = spec.servers.size();

  const json& users = member(document, "users", "scenario");
  if (!users.is_array()) {
    reject("users", "expected an array");
  }
  for (size_t n = 0; n < users.size(); n++) {
    const std::string path = "users[" + std::to_string(n) + "]";
    const json& entry = users[n];
    allowKeys(entry, path, {"id", "weight", "demand", "eligible"});

    UserSpec user;
    user.id = n;

    const std::string id = name(member(entry, "id", path), path + ".id");
    for (const std::string& existing : scenario.userNames) {
      if (existing == id) {
        reject(path + ".id", "duplicate user id '" + id + "'");
      }
    }

    if (entry.contains("weight")) {
      user.weight = number(entry["weight"], path + ".weight");
    }
    user.demand = numbers(member(entry, "demand", path), path + ".demand");

    const json& eligible = member(entry, "eligible", path);
    if (eligible.is_string() && eligible.get<std::string>() == "auto") {
      user.eligibility.assign(K, true);
    } else if (eligible.is_array()) {
      user.eligibility.assign(K, false);
      for (size_t k = 0; k < eligible.size(); k++) {
        const std::string where =
          path + ".eligible[" + std::to_string(k) + "]";
        const std::string server = name(eligible[k], where);
        auto found = classes.find(server);
        if (found == classes.end()) {
          reject(where, "unknown server '" + server + "'");
        }
        for (size_t i : found->second) {
          user.eligibility[i] = true;
        }
      }
    } else {
      reject(path + ".eligible", "expected \"auto\" or a list of server ids");
    }

    spec.users.push_back(std::move(user));
    scenario.userNames.push_back(id);
  }

  if (document.contains("gamma_override")) {
    const json& rows = document["gamma_override"];
    if (!rows.is_array()) {
      reject("gamma_override", "expected an array of rows");
    }
    if (rows.size() != spec.users.size()) {
      reject("gamma_override", "expected one row per user");
    }
    Matrix values(spec.users.size(), K);
    for (size_t n = 0; n < rows.size(); n++) {
      const std::string path = "gamma_override[" + std::to_string(n) + "]";
      const std::vector<double> row = numbers(rows[n], path);
      if (row.size() != K) {
        reject(path, "expected one entry per (expanded) server");
      }
      for (size_t i = 0; i < K; i++) {
        values(n, i) = row[i];
      }
    }
    spec.gammaOverride = std::move(values);
  }

  if (document.contains("events")) {
    const json& events = document["events"];
    if (!events.is_array()) {
      reject("events", "expected an array");
    }
    for (size_t k = 0; k < events.size(); k++) {
      const std::string path = "events[" + std::to_string(k) + "]";
      const json& entry = events[k];
      allowKeys(entry, path, {"time", "action", "user"});

      Event event;
      event.time = number(member(entry, "time", path), path + ".time");
      if (!(event.time >= 0.0) || !std::isfinite(event.time)) {
        reject(path + ".time", "expected a finite non-negative time");
      }

      const json& action = member(entry, "action", path);
      if (action == "activate") {
        event.kind = EventKind::ACTIVATE;
      } else if (action == "deactivate") {
        event.kind = EventKind::DEACTIVATE;
      } else {
        reject(path + ".action", "expected \"activate\" or \"deactivate\"");
      }

      event.user = lookup(
          scenario.userNames,
          name(member(entry, "user", path), path + ".user"),
          path + ".user",
          "user");

      scenario.events.push_back(event);
    }
  }

  const Verdict verdict = validateScenario(spec);
  if (!verdict.passed()) {
    std::string message = "invalid scenario";
    for (const Violation& violation : verdict.violations) {
      message += "\n  " + violation.subject + ": " + violation.description;
    }
    throw ScenarioError(message);
  }

  return scenario;
}


Scenario loadScenario(const std::filesystem::path& path)
{
  try {
    return parseScenario(readFile(path));
  } catch (const ScenarioError& error) {
    throw ScenarioError(path.string() + ": " + error.what());
  }
}


std::string writeScenario(const Scenario& scenario)
{
  const ClusterSpec& spec = scenario.spec;

  json document;

  document["resources"] = json::array();
  for (const ResourceId& resource : spec.resources) {
    document["resources"].push_back(resource.name);
  }

  document["servers"] = json::array();
  for (size_t i = 0; i < spec.numServers(); i++) {
    json server;
    server["id"] = scenario.serverNames[i];
    server["capacity"] = spec.servers[i].capacities;
    document["servers"].push_back(std::move(server));
  }

  document["users"] = json::array();
  for (size_t n = 0; n < spec.numUsers(); n++) {
    const UserSpec& user = spec.users[n];

    json entry;
    entry["id"] = scenario.userNames[n];
    entry["weight"] = user.weight;
    entry["demand"] = user.demand;

    if (std::all_of(user.eligibility.begin(), user.eligibility.end(),
                    [](bool eligible) { return eligible; })) {
      entry["eligible"] = "auto";
    } else {
      json eligible = json::array();
      for (size_t i = 0; i < spec.numServers(); i++) {
        if (user.eligibility[i]) {
          eligible.push_back(scenario.serverNames[i]);
        }
      }
      entry["eligible"] = std::move(eligible);
    }

    document["users"].push_back(std::move(entry));
  }

  if (spec.gammaOverride.has_value()) {
    json rows = json::array();
    for (size_t n = 0; n < spec.numUsers(); n++) {
      const auto row = spec.gammaOverride->row(n);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    document["gamma_override"] = std::move(rows);
  }

  if (!scenario.events.empty()) {
    json events = json::array();
    for (const Event& event : scenario.events) {
      json entry;
      entry["time"] = event.time;
      entry["action"] =
        event.kind == EventKind::ACTIVATE ? "activate" : "deactivate";
      entry["user"] = scenario.userNames[event.user];
      events.push_back(std::move(entry));
    }
    document["events"] = std::move(events);
  }

  return document.dump(2) + "\n";
}


SimConfig parseSimConfig(const std::string& text)
{
  const json document = parseJson(text);

  allowKeys(document, "config", {
      "horizon", "period", "offsets", "mechanism", "recompute_period",
      "seed", "mode"});

  SimConfig config;

  if (document.contains("horizon")) {
    config.horizon = number(document["horizon"], "horizon");
  }
  if (document.contains("period")) {
    config.period = number(document["period"], "period");
  }
  if (document.contains("offsets")) {
    config.offsets = numbers(document["offsets"], "offsets");
  }
  if (document.contains("recompute_period")) {
    config.recomputePeriod =
      number(document["recompute_period"], "recompute_period");
  }
  if (document.contains("seed")) {
    if (!document["seed"].is_number_unsigned()) {
      reject("seed", "expected a non-negative integer");
    }
    config.seed = document["seed"].get<uint64_t>();
  }
  if (document.contains("mechanism")) {
    const std::string mechanism = name(document["mechanism"], "mechanism");
    const std::optional<SimMechanism> parsed = parseSimMechanism(mechanism);
    if (!parsed.has_value()) {
      reject("mechanism", "unknown mechanism '" + mechanism + "'");
    }
    config.mechanism = *parsed;
  }
  if (document.contains("mode")) {
    const json& mode = document["mode"];
    if (mode == "rdm") {
      config.mode = Multiplexing::RDM;
    } else if (mode == "tdm") {
      config.mode = Multiplexing::TDM;
    } else {
      reject("mode", "expected \"rdm\" or \"tdm\"");
    }
  }

  if (!(config.horizon > 0.0) || !(config.period > 0.0) ||
      !(config.recomputePeriod > 0.0)) {
    throw ScenarioError(
        "config: horizon, period and recompute_period must be positive");
  }

  return config;
}


SimConfig loadSimConfig(const std::filesystem::path& path)
{
  try {
    return parseSimConfig(readFile(path));
  } catch (const ScenarioError& error) {
    throw ScenarioError(path.string() + ": " + error.what());
  }
}


std::string formatNumber(double value)
{
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}


std::string allocationCsv(
    const Scenario& scenario,
    const MechanismResult& result)
{
  std::string out = "user,server,tasks\n";

  if (result.allocation.has_value()) {
    const Allocation& allocation = *result.allocation;
    for (size_t n = 0; n < allocation.numUsers(); n++) {
      for (size_t i = 0; i < allocation.numServers(); i++) {
        const double tasks = allocation.tasks(n, i);
        if (tasks != 0.0) {
          out += scenario.userNames[n] + "," + scenario.serverNames[i] + "," +
            formatNumber(tasks) + "\n";
        }
      }
    }
  }

  for (size_t n = 0; n < result.totals.size(); n++) {
    out += "#totals," + scenario.userNames[n] + "," +
      formatNumber(result.totals[n]) + "\n";
  }

  out += std::string("#status,converged=") +
    (result.converged ? "true" : "false") +
    ",iterations=" + std::to_string(result.iterations) + "\n";

  return out;
}


AllocationFile parseAllocationCsv(
    const std::string& text,
    const Scenario& scenario)
{
  const size_t N = scenario.spec.numUsers();
  const size_t K = scenario.spec.numServers();

  AllocationFile file;
  file.allocation = Allocation::zeros(N, K);

  std::vector<bool> haveTotal(N, false);
  file.totals.assign(N, 0.0);

  std::stringstream stream(text);
  std::string line;
  size_t number = 0;
  bool header = false;

  while (std::getline(stream, line)) {
    number++;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }

    const std::string where = "line " + std::to_string(number);
    const std::vector<std::string> fields = splitFields(line);

    if (!header) {
      if (line != "user,server,tasks") {
        throw ScenarioError(where + ": expected header 'user,server,tasks'");
      }
      header = true;
      continue;
    }

    if (fields[0] == "#totals") {
      if (fields.size() != 3) {
        throw ScenarioError(where + ": expected '#totals,<user>,<tasks>'");
      }
      const size_t n = lookup(scenario.userNames, fields[1], where, "user");
      file.totals[n] = parseDouble(fields[2], where);
      haveTotal[n] = true;
      continue;
    }

    if (fields[0] == "#status") {
      for (size_t k = 1; k < fields.size(); k++) {
        if (fields[k] == "converged=true") {
          file.converged = true;
        } else if (fields[k] == "converged=false") {
          file.converged = false;
        } else if (fields[k].rfind("iterations=", 0) == 0) {
          file.iterations = static_cast<size_t>(
              parseDouble(fields[k].substr(11), where));
        } else {
          throw ScenarioError(where + ": unknown status '" + fields[k] + "'");
        }
      }
      continue;
    }

    if (fields.size() != 3) {
      throw ScenarioError(where + ": expected 'user,server,tasks'");
    }

    const size_t n = lookup(scenario.userNames, fields[0], where, "user");
    const size_t i = lookup(scenario.serverNames, fields[1], where, "server");
    file.allocation.tasks(n, i) = parseDouble(fields[2], where);
  }

  if (!header) {
    throw ScenarioError("allocation file is empty");
  }

  const std::vector<double> sums = taskTotals(file.allocation);
  for (size_t n = 0; n < N; n++) {
    if (!haveTotal[n]) {
      file.totals[n] = sums[n];
    }
  }

  return file;
}


AllocationFile loadAllocationCsv(
    const std::filesystem::path& path,
    const Scenario& scenario)
{
  try {
    return parseAllocationCsv(readFile(path), scenario);
  } catch (const ScenarioError& error) {
    throw ScenarioError(path.string() + ": " + error.what());
  }
}


std::string traceCsv(const Scenario& scenario, const SimTrace& trace)
{
  std::string out = "time,server,resource,utilization\n";

  for (const SimSample& sample : trace.samples) {
    const std::string time = formatNumber(sample.time);
    for (size_t i = 0; i < scenario.spec.numServers(); i++) {
      for (size_t r = 0; r < scenario.spec.numResources(); r++) {
        out += time + "," + scenario.serverNames[i] + "," +
          scenario.spec.resources[r].name + "," +
          formatNumber(sample.utilization(i, r)) + "\n";
      }
      out += time + "," + scenario.serverNames[i] + ",time," +
        formatNumber(sample.timeUtilization[i]) + "\n";
    }
  }

  return out;
}


std::string comparisonCsv(
    const Scenario& scenario,
    const std::vector<std::pair<std::string, MechanismResult>>& results)
{
  std::string out = "mechanism,user,tasks,converged\n";
  for (const auto& [mechanism, result] : results) {
    for (size_t n = 0; n < result.totals.size(); n++) {
      out += mechanism + "," + scenario.userNames[n] + "," +
        formatNumber(result.totals[n]) + "," +
        (result.converged ? "true" : "false") + "\n";
    }
  }
  return out;
}


std::string readFile(const std::filesystem::path& path)
{
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    throw ScenarioError("cannot read " + path.string());
  }
  std::stringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}


void writeFile(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream stream(path, std::ios::binary);
  if (!stream) {
    throw ScenarioError("cannot write " + path.string());
  }
  stream << text;
  if (!stream) {
    throw ScenarioError("cannot write " + path.string());
  }
}

} // namespace psdsf {
