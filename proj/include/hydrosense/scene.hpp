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

#ifndef HYDROSENSE_SCENE_HPP
#define HYDROSENSE_SCENE_HPP

#include <vector>

#include "hydrosense/types.hpp"

/// Bistatic river-crossing geometry and the specular reflected path.
///
/// Angle convention (used everywhere in the library): the receive array is
/// tilted theta_inc from vertical, so its broadside points theta_inc below the
/// horizon. A ray arriving with elevation e (positive above the horizon) has
/// AoA theta = theta_inc + e relative to broadside. The LOS ray comes from the
/// elevated transmitter, theta_0 = theta_inc + atan((h_t - h_r) / d_tr); the
/// water-reflected ray comes from below at the grazing angle alpha, so
/// theta_1 = theta_inc - alpha and alpha = theta_inc - theta_1.
namespace hydrosense::scene {

struct Geometry
{
    Real d_tr = 423.0;      ///< horizontal Tx-Rx distance (m)
    Real d_rw = 0.75;       ///< horizontal Rx-water-edge distance (m), metadata
    Real d_tw = 160.0;      ///< horizontal Tx-water-edge distance (m), metadata
    Real h_t = 45.0;        ///< Tx height (m)
    Real h_r = 4.0;         ///< Rx array-centre height (m)
    Real h_w0 = 0.0;        ///< initial water surface height (m)
    Real theta_inc = 42.0;  ///< array inclination from vertical (deg)

    void validate() const;

    /// Field setups (heights referenced to the initial water surface).
    static Geometry setup1();
    static Geometry setup2();
    static Geometry setup3();
};

struct PathGeometry
{
    Real length = 0.0;           ///< one-way path length (m)
    Real aoa = 0.0;              ///< AoA relative to broadside (deg)
    Real reflection_angle = 0.0; ///< grazing angle alpha (deg); 0 for LOS
    bool is_los = false;
};

/// Smallest grazing angle accepted; inversion divides by sin(alpha).
inline constexpr Real kMinReflectionAngleDeg = 0.1;

/// Specular reflection off a water surface at height w (image construction).
PathGeometry reflected_path(const Geometry &geom, Real w);

PathGeometry los_path(const Geometry &geom);

/// LOS AoA (deg) under the library angle convention.
Real los_aoa(const Geometry &geom);

struct AoaVariationPoint
{
    Real d_tr = 0.0;
    Real delta_aoa = 0.0; ///< |aoa(h_w0 + delta_w) - aoa(h_w0)| (deg)
};

/// Reflected-path AoA change caused by a water rise of delta_w, swept over
/// Tx-Rx distance. The water-edge distances scale with d_tr.
std::vector<AoaVariationPoint> aoa_variation_study(const Geometry &templ, Real delta_w,
                                                   const std::vector<Real> &d_tr_values);

/// Evenly spaced distances from first to last inclusive.
std::vector<Real> distance_range(Real first, Real last, Real step);

} // namespace hydrosense::scene

#endif // HYDROSENSE_SCENE_HPP
