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

#include "hydrosense/scene.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hydrosense/error.hpp"

namespace hydrosense::scene {

void Geometry::validate() const
{
    require(d_tr > 0.0, "Tx-Rx distance must be positive", "geometry.d_tr");
    require(d_rw >= 0.0, "Rx-water distance must be >= 0", "geometry.d_rw");
    require(d_tw >= 0.0, "Tx-water distance must be >= 0", "geometry.d_tw");
    require(h_t >= 0.0, "Tx height must be >= 0", "geometry.h_t");
    require(h_r >= 0.0, "Rx height must be >= 0", "geometry.h_r");
    require(h_w0 >= 0.0, "water height must be >= 0", "geometry.h_w0");
    require(h_w0 < std::min(h_t, h_r), "water surface must lie below Tx and Rx", "geometry.h_w0");
    require(d_tw + d_rw <= d_tr, "water-edge distances exceed Tx-Rx distance", "geometry.d_tw");
    require(std::abs(theta_inc) < 90.0, "inclination must be within (-90, 90) deg", "geometry.theta_inc");
}

Geometry Geometry::setup1()
{
    return Geometry{};
}

Geometry Geometry::setup2()
{
    Geometry g;
    g.d_tr = 465.0;
    g.d_rw = 34.0;
    g.d_tw = 151.0;
    g.h_r = 10.0;
    g.theta_inc = 27.0;
    return g;
}

Geometry Geometry::setup3()
{
    Geometry g;
    g.theta_inc = 27.0;
    return g;
}

PathGeometry reflected_path(const Geometry &geom, Real w)
{
    geom.validate();
    if (!(w < std::min(geom.h_t, geom.h_r)))
        fail(ErrorCode::InvalidArgument,
             "water height " + std::to_string(w) + " m leaves no reflection geometry", "water");

    // Mirror the Tx in the water plane: vertical leg spans h_t - w + h_r - w.
    const Real vertical = geom.h_t + geom.h_r - 2.0 * w;
    PathGeometry p;
    p.length = std::hypot(geom.d_tr, vertical);
    p.reflection_angle = rad2deg(std::atan2(vertical, geom.d_tr));
    p.aoa = geom.theta_inc - p.reflection_angle;
    p.is_los = false;

    if (p.reflection_angle < kMinReflectionAngleDeg)
        fail(ErrorCode::InvalidArgument, "near-grazing reflection (alpha < 0.1 deg)", "water");
    if (std::abs(p.aoa) >= 90.0)
        fail(ErrorCode::InvalidArgument, "reflected AoA outside (-90, 90) deg", "geometry.theta_inc");
    return p;
}

PathGeometry los_path(const Geometry &geom)
{
    geom.validate();
    PathGeometry p;
    p.length = std::hypot(geom.d_tr, geom.h_t - geom.h_r);
    p.aoa = geom.theta_inc + rad2deg(std::atan2(geom.h_t - geom.h_r, geom.d_tr));
    p.is_los = true;
    if (std::abs(p.aoa) >= 90.0)
        fail(ErrorCode::InvalidArgument, "LOS AoA outside (-90, 90) deg", "geometry.theta_inc");
    return p;
}

Real los_aoa(const Geometry &geom)
{
    return los_path(geom).aoa;
}

std::vector<AoaVariationPoint> aoa_variation_study(const Geometry &templ, Real delta_w,
                                                   const std::vector<Real> &d_tr_values)
{
    require(delta_w >= 0.0, "water change must be >= 0", "delta_w");
    std::vector<AoaVariationPoint> curve;
    curve.reserve(d_tr_values.size());
    for (Real d : d_tr_values)
    {
        Geometry g = templ;
        const Real scale = d / templ.d_tr;
        g.d_tr = d;
        g.d_tw = templ.d_tw * scale;
        g.d_rw = templ.d_rw * scale;
        const Real before = reflected_path(g, g.h_w0).aoa;
        const Real after = reflected_path(g, g.h_w0 + delta_w).aoa;
        curve.push_back({d, std::abs(after - before)});
    }
    return curve;
}

std::vector<Real> distance_range(Real first, Real last, Real step)
{
    require(step > 0.0, "distance step must be positive", "step");
    require(last >= first, "distance range is empty", "range");
    std::vector<Real> out;
    const long count = static_cast<long>(std::floor((last - first) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i)
        out.push_back(first + step * static_cast<Real>(i));
    return out;
}

} // namespace hydrosense::scene
