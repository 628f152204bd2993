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

#ifndef HYDROSENSE_EXTRACT_HPP
#define HYDROSENSE_EXTRACT_HPP

#include <array>
#include <vector>

#include "hydrosense/beam.hpp"
#include "hydrosense/dimred.hpp"
#include "hydrosense/types.hpp"

/// Water-path isolation on the reduced series and conversion of its phase
/// history to a relative water level. All outputs are relative to capture 0.
namespace hydrosense::extract {

using dimred::ReducedSeries;

inline constexpr Real kDefaultCutoff = 0.1;
inline constexpr int kDefaultFilterOrder = 4;
inline constexpr Real kDefaultRelativeLoading = 1e-3;
inline constexpr Real kMinGrazingDeg = 0.1;

/// Largest accepted step between successive unwrapped phases (rad).
inline constexpr Real kUnwrapStepLimit = kPi / 2;

/// H - temporal mean per antenna.
ReducedSeries remove_static(const ReducedSeries &series);

/// Second-order section b0 + b1 z^-1 + b2 z^-2 over 1 + a1 z^-1 + a2 z^-2.
struct Biquad
{
    Real b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
};

/// Digital Butterworth low-pass (bilinear transform, unity DC gain), cutoff as
/// a fraction of the sample rate in (0, 0.5]. Order must be even.
std::vector<Biquad> butterworth_lowpass(int order, Real cutoff_fraction);

/// Frequency response magnitude of a section cascade at fraction f of the sample rate.
Real response_magnitude(const std::vector<Biquad> &sos, Real f);

/// Zero-phase forward-backward filtering with odd extension of 3 * (2 * sections + 1)
/// samples and steady-state initial conditions. Throws when x is not longer than the padding.
CVector filtfilt(const std::vector<Biquad> &sos, const CVector &x);

/// Applies filtfilt along the capture axis of every antenna.
ReducedSeries lowpass(const ReducedSeries &series, Real cutoff_fraction = kDefaultCutoff,
                      int order = kDefaultFilterOrder);

/// LCMV beam with unit gain on theta1 and a null on theta0 using
/// R = H H^H / N + rho I, rho = loading * trace(H H^H / N) / M.
BeamWeights lcmv_weights(const ReducedSeries &series, Real theta1_deg, Real theta0_deg, const ArrayConfig &array,
                         Real loading = kDefaultRelativeLoading);

/// h_BF = w^H H.
CRowVector beamform(const ReducedSeries &series, const CVector &w);

struct PhaseSeries
{
    RVector psi;          ///< unwrapped, psi(0) == 0
    Real max_step = 0.0;  ///< largest |psi(n+1) - psi(n)|
    bool valid = true;    ///< max_step below the unwrap limit
};

/// Per-sample angle, unwrapped and referenced to sample 0. Throws Unwrap on a
/// zero-magnitude sample.
PhaseSeries phase_series(const CRowVector &h_bf, Real step_limit = kUnwrapStepLimit);

/// Delta d = -psi * lambda / (2 pi).
RVector path_delta(const RVector &psi, Real lambda);

struct WaterLevelSeries
{
    RVector delta_w;
    Real alpha_used = 0.0;   ///< deg
    Real lambda_used = 0.0;  ///< m, 0 when not known
    RVector path_delta;
};

/// Delta w = -Delta d / (2 sin alpha). Throws when alpha is grazing.
WaterLevelSeries water_level(const RVector &delta_d, Real alpha_deg);

/// Grazing angle of the water path seen by an array tilted theta_inc from vertical.
inline Real grazing_from_aoa(Real theta_inc_deg, Real theta1_deg) { return theta_inc_deg - theta1_deg; }

/// sin of an angle in degrees; exact at multiples of 30.
Real sind(Real deg);

} // namespace hydrosense::extract

#endif // HYDROSENSE_EXTRACT_HPP
