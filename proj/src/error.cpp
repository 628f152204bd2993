// SPDX-License-Identifier: Apache-2.0
//
// hydrosense: water-level sensing from bistatic downlink CSI
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hydrosense/error.hpp"

namespace hydrosense {

const char *error_code_name(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Config: return "config";
    case ErrorCode::Format: return "format";
    case ErrorCode::Io: return "io";
    case ErrorCode::PeakNotFound: return "peak_not_found";
    case ErrorCode::Calibration: return "calibration";
    case ErrorCode::Unwrap: return "unwrap";
    case ErrorCode::IllConditioned: return "ill_conditioned";
    case ErrorCode::Numerical: return "numerical";
    }
    return "unknown";
}

int error_exit_code(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::InvalidArgument: return 3;
    case ErrorCode::Config: return 3;
    case ErrorCode::Format: return 4;
    case ErrorCode::Io: return 5;
    case ErrorCode::PeakNotFound: return 6;
    case ErrorCode::Calibration: return 7;
    case ErrorCode::Unwrap: return 8;
    case ErrorCode::IllConditioned: return 9;
    case ErrorCode::Numerical: return 10;
    }
    return 1;
}

} // namespace hydrosense
