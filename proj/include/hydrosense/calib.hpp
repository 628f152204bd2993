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

#ifndef HYDROSENSE_CALIB_HPP
#define HYDROSENSE_CALIB_HPP

#include "hydrosense/csi_sim.hpp"
#include "hydrosense/types.hpp"

namespace hydrosense::calib {

/// Scales antenna m by e_m = gain_m * exp(-j(phase_m + rco*[m in subset])).
CsiCapture apply_errors(const CsiCapture &capture, const ArrayErrorModel &err);
BasebandSnapshot apply_errors(const BasebandSnapshot &snapshot, const ArrayErrorModel &err);

/// Accepted distance of the selected eigenvalue from 1.
inline constexpr Real kUnityEigenTolerance = 0.1;

struct ErrorEstimate
{
    ArrayErrorModel model;
    CVector e;              ///< normalized so e(0) == 1
    Real eigenvalue = 0.0;  ///< eigenvalue the vector was taken from
};

/// Subspace array calibration from a pilot source at a known AoA.
///
/// The sample covariance B B^H / G is eigendecomposed and its top `sources`
/// eigenvectors span E A. With A0 = diag(a(pilot)), the error vector is the
/// eigenvector of A0^H Es Es^H A0 whose eigenvalue is (nearest) one. Throws
/// ErrorCode::Calibration when no eigenvalue lies within `tolerance` of one.
ErrorEstimate estimate_errors(const BasebandSnapshot &snapshot, Real pilot_aoa_deg, const ArrayConfig &array,
                              Real tolerance = kUnityEigenTolerance);

/// Divides antenna m by the estimated e_m.
CsiCapture calibrate(const CsiCapture &capture, const ArrayErrorModel &estimate);

} // namespace hydrosense::calib

#endif // HYDROSENSE_CALIB_HPP
