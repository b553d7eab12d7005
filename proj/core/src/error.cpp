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

#include "freebound/error.hpp"

namespace freebound {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonManifold: return "NonManifold";
    case ErrorCode::InconsistentOrientation: return "InconsistentOrientation";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::InsufficientNeighborhood: return "InsufficientNeighborhood";
    case ErrorCode::ProjectionDiverged: return "ProjectionDiverged";
    case ErrorCode::NotStrictlyConvex: return "NotStrictlyConvex";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::MaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorCode::MeshDegenerated: return "MeshDegenerated";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::AmbiguousIndex: return "AmbiguousIndex";
    case ErrorCode::WrongTopology: return "WrongTopology";
    case ErrorCode::NonProper: return "NonProper";
    case ErrorCode::ZeroOnBoundary: return "ZeroOnBoundary";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::MassConcentrated: return "MassConcentrated";
    case ErrorCode::IndexNotOne: return "IndexNotOne";
    case ErrorCode::HypothesisFails: return "HypothesisFails";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::MissingArtifacts: return "MissingArtifacts";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace freebound
