/*
 * Copyright 2026 The microscope authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "microscope/error.hpp"

namespace microscope {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PrefixViolation: return "PrefixViolation";
    case ErrorCode::NotTidy: return "NotTidy";
    case ErrorCode::EmptyRoot: return "EmptyRoot";
    case ErrorCode::PointOutOfRange: return "PointOutOfRange";
    case ErrorCode::VertexNotOccupied: return "VertexNotOccupied";
    case ErrorCode::DepthOutOfRange: return "DepthOutOfRange";
    case ErrorCode::MixedParams: return "MixedParams";
    case ErrorCode::HeightTooSmall: return "HeightTooSmall";
    case ErrorCode::NotLocallyLarge: return "NotLocallyLarge";
    case ErrorCode::NotEquicontractive: return "NotEquicontractive";
    case ErrorCode::DepthTooDeepForRatio: return "DepthTooDeepForRatio";
    case ErrorCode::InvalidS: return "InvalidS";
    case ErrorCode::InfNotAttained: return "InfNotAttained";
    case ErrorCode::DepthTooShallowForAlpha: return "DepthTooShallowForAlpha";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::EmptyMiniset: return "EmptyMiniset";
    case ErrorCode::LambdaTooSmall: return "LambdaTooSmall";
    case ErrorCode::NoQualifyingWindow: return "NoQualifyingWindow";
    case ErrorCode::KTooLargeForDepth: return "KTooLargeForDepth";
    case ErrorCode::SpecParse: return "SpecParse";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace microscope
