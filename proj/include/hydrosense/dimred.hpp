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

#ifndef HYDROSENSE_DIMRED_HPP
#define HYDROSENSE_DIMRED_HPP

#include <vector>

#include "hydrosense/types.hpp"

/// Delay/Doppler dimension reduction of K x L x M captures to M-vectors.
///
/// Transforms are unnormalized and unpadded (length K over subcarriers, L over
/// symbols). The subcarrier axis uses the inverse kernel so a path delay of
/// q / (K delta_f) lands in range bin q; the symbol axis uses the forward
/// kernel so a Doppler of q / (L delta_t) lands in bin q. A static unit path
/// at delay 0 therefore reduces to K * L * a(theta). Bin power is summed over
/// the non-transformed axes; ties go to the lowest bin.
namespace hydrosense::dimred {

struct RangeReduction
{
    CVector values;         ///< L*M, index l + L*m
    int bin = 0;
    RVector bin_power;      ///< power of every range bin
};

struct DopplerReduction
{
    CVector values;         ///< M
    int bin = 0;
    RVector bin_power;
};

RangeReduction range_reduce(const CsiCapture &capture);

/// v holds L*M samples (l fastest).
DopplerReduction doppler_reduce(const CVector &v, int l, int m);

struct ReducedSeries
{
    CMatrix h;                      ///< M x N
    Real delta_t_cap = 0.0;
    std::vector<int> range_bins;
    std::vector<int> doppler_bins;

    int m() const { return static_cast<int>(h.rows()); }
    int n() const { return static_cast<int>(h.cols()); }
};

/// doppler_reduce(range_reduce(capture)).
CVector reduce_capture(const CsiCapture &capture, int *range_bin = nullptr, int *doppler_bin = nullptr);

/// Incremental M x N series builder for streamed captures.
class SeriesBuilder
{
public:
    SeriesBuilder(int m, int n, Real delta_t_cap);

    /// Reduces and stores capture i. Configs must match the first capture added.
    void set(int i, const CsiCapture &capture);

    ReducedSeries finish() const;

private:
    ReducedSeries series_;
    bool have_ref_ = false;
    int k_ = 0, l_ = 0;
    Real delta_f_ = 0.0, delta_t_ = 0.0, fc_ = 0.0, kappa_ = 0.0;
};

ReducedSeries reduce_series(const std::vector<CsiCapture> &captures);

} // namespace hydrosense::dimred

#endif // HYDROSENSE_DIMRED_HPP
