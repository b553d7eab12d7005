// Copyright 2026 The freebound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "freebound/certificate.hpp"

#include <cmath>

#include <json.hpp>

#include "freebound/error.hpp"

namespace freebound {

namespace {

const char* kind_name(Check::Kind kind) {
  switch (kind) {
    case Check::Kind::Upper:
      return "upper";
    case Check::Kind::Lower:
      return "lower";
    case Check::Kind::Equal:
      return "equal";
    case Check::Kind::Flag:
      return "flag";
  }
  return "flag";
}

Check::Kind parse_kind(const std::string& s) {
  if (s == "upper") return Check::Kind::Upper;
  if (s == "lower") return Check::Kind::Lower;
  if (s == "equal") return Check::Kind::Equal;
  if (s == "flag") return Check::Kind::Flag;
  throw Error(ErrorCode::ParseError, "unknown check kind '" + s + "'");
}

// Non-finite numbers become null in JSON; read them back as NaN.
double number(const nlohmann::json& j) {
  return j.is_null() ? std::nan("") : j.get<double>();
}

}  // namespace

Check& Certificate::upper(const std::string& name, double value, double bound, double tolerance) {
  Check c;
  c.name = name;
  c.kind = Check::Kind::Upper;
  c.value = value;
  c.bound = bound;
  c.residual = bound - value;
  c.tolerance = tolerance;
  c.pass = std::isfinite(c.residual) && c.residual >= -tolerance;
  checks.push_back(c);
  return checks.back();
}

Check& Certificate::lower(const std::string& name, double value, double bound, double tolerance) {
  Check c;
  c.name = name;
  c.kind = Check::Kind::Lower;
  c.value = value;
  c.bound = bound;
  c.residual = value - bound;
  c.tolerance = tolerance;
  c.pass = std::isfinite(c.residual) && c.residual >= -tolerance;
  checks.push_back(c);
  return checks.back();
}

Check& Certificate::equal(const std::string& name, double value, double target, double tolerance) {
  Check c;
  c.name = name;
  c.kind = Check::Kind::Equal;
  c.value = value;
  c.bound = target;
  c.residual = value - target;
  c.tolerance = tolerance;
  c.pass = std::isfinite(c.residual) && std::abs(c.residual) <= tolerance;
  checks.push_back(c);
  return checks.back();
}

Check& Certificate::flag(const std::string& name, bool pass, double value) {
  Check c;
  c.name = name;
  c.value = value;
  c.pass = pass;
  checks.push_back(c);
  return checks.back();
}

bool Certificate::pass() const {
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const Check* Certificate::find(const std::string& name) const {
  for (const Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string Certificate::to_json() const {
  nlohmann::json j;
  j["theorem"] = theorem;
  j["instance"] = instance;
  j["quantities"] = quantities;
  j["diagnostics"] = diagnostics;
  j["notes"] = notes;
  auto& list = j["checks"] = nlohmann::json::array();
  for (const Check& c : checks) {
    list.push_back({{"name", c.name},
                    {"kind", kind_name(c.kind)},
                    {"value", c.value},
                    {"bound", c.bound},
                    {"residual", c.residual},
                    {"tolerance", c.tolerance},
                    {"verdict", c.pass ? "PASS" : "FAIL"}});
  }
  j["verdict"] = pass() ? "PASS" : "FAIL";
  return j.dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("certificate: ") + e.what());
  }
  try {
    Certificate c;
    c.theorem = j.at("theorem").get<std::string>();
    c.instance = j.at("instance").get<std::string>();
    for (const auto& [k, v] : j.at("quantities").items()) c.quantities[k] = number(v);
    for (const auto& [k, v] : j.at("diagnostics").items()) c.diagnostics[k] = number(v);
    c.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& item : j.at("checks")) {
      Check check;
      check.name = item.at("name").get<std::string>();
      check.kind = parse_kind(item.at("kind").get<std::string>());
      check.value = number(item.at("value"));
      check.bound = number(item.at("bound"));
      check.residual = number(item.at("residual"));
      check.tolerance = number(item.at("tolerance"));
      check.pass = item.at("verdict").get<std::string>() == "PASS";
      c.checks.push_back(check);
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("certificate: ") + e.what());
  }
}

}  // namespace freebound
