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

#ifndef HYDROSENSE_PARALLEL_HPP
#define HYDROSENSE_PARALLEL_HPP

#include <functional>

namespace hydrosense {

/// Worker count: HYDROSENSE_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Calls fn(i) for i in [0, n) on up to thread_count() threads.
/// Each index runs exactly once; iteration order across threads is unspecified.
void parallel_for(int n, const std::function<void(int)> &fn);

} // namespace hydrosense

#endif // HYDROSENSE_PARALLEL_HPP
