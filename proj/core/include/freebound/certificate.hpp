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

#pragma once

#include <map>
#include <string>
#include <vector>

namespace freebound {

struct Check {
  enum class Kind { Upper, Lower, Equal, Flag };

  std::string name;
  Kind kind = Kind::Flag;
  double value = 0.0;
  double bound = 0.0;
  /// Upper: bound - value. Lower and Equal: value - bound. Flag: 0.
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Machine-readable record of one theorem check. Serialisation is
/// deterministic: keys are sorted and doubles use shortest round-trip form.
struct Certificate {
  std::string theorem;
  std::string instance;
  std::map<std::string, double> quantities;
  std::map<std::string, double> diagnostics;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  /// value <= bound + tolerance.
  Check& upper(const std::string& name, double value, double bound, double tolerance);
  /// value >= bound - tolerance.
  Check& lower(const std::string& name, double value, double bound, double tolerance);
  /// |value - target| <= tolerance.
  Check& equal(const std::string& name, double value, double target, double tolerance);
  Check& flag(const std::string& name, bool pass, double value = 0.0);

  bool pass() const;
  const Check* find(const std::string& name) const;
  std::string to_json() const;
};

Certificate certificate_from_json(const std::string& text);

}  // namespace freebound
