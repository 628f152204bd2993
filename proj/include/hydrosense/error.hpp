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

#ifndef HYDROSENSE_ERROR_HPP
#define HYDROSENSE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace hydrosense {

enum class ErrorCode
{
    InvalidArgument,
    Config,
    Format,
    Io,
    PeakNotFound,
    Calibration,
    Unwrap,
    IllConditioned,
    Numerical,
};

/// Short stable name used in CLI diagnostics.
const char *error_code_name(ErrorCode code);

/// Process exit status for each error class. 0 and 2 (usage) are reserved.
int error_exit_code(ErrorCode code);

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &what, std::string field = {})
        : std::runtime_error(what), code_(code), field_(std::move(field)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string &field() const noexcept { return field_; }

private:
    ErrorCode code_;
    std::string field_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what, std::string field = {})
{
    throw Error(code, what, std::move(field));
}

inline void require(bool cond, const std::string &what, std::string field = {})
{
    if (!cond)
        throw Error(ErrorCode::InvalidArgument, what, std::move(field));
}

} // namespace hydrosense

#endif // HYDROSENSE_ERROR_HPP
