/*
 * Copyright 2026 The Versa Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "versa/errors.hpp"

namespace versa {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::IllegalOp: return "IllegalOp";
    case ErrorCode::ModeViolation: return "ModeViolation";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DirtyDrop: return "DirtyDrop";
    case ErrorCode::TransitionBusy: return "TransitionBusy";
    case ErrorCode::BoundaryWrite: return "BoundaryWrite";
    case ErrorCode::BoundaryRead: return "BoundaryRead";
    case ErrorCode::Deadlock: return "Deadlock";
    case ErrorCode::CycleLimitExceeded: return "CycleLimitExceeded";
    case ErrorCode::TargetMismatch: return "TargetMismatch";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::PlanUnsupported: return "PlanUnsupported";
    case ErrorCode::InvalidKernel: return "InvalidKernel";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace versa
