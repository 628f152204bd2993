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

#ifndef HYDROSENSE_CONFIG_HPP
#define HYDROSENSE_CONFIG_HPP

#include <cstdint>
#include <istream>
#include <optional>
#include <string>

#include "hydrosense/csi_sim.hpp"
#include "hydrosense/extract.hpp"
#include "hydrosense/rpo.hpp"
#include "hydrosense/scene.hpp"

namespace hydrosense::pipeline {

struct SenseConfig
{
    std::optional<Real> theta0;     ///< LOS AoA (deg); geometry value when unset
    int sources = 2;
    int m_s = 0;                    ///< 0 selects the default
    int n_s = 0;                    ///< 0 selects the default
    Real theta_step = 0.5;          ///< deg
    int f_points = 201;
    int refine_rounds = 4;
    Real rpo_loading = rpo::kDefaultRelativeLoading;
    Real lcmv_loading = extract::kDefaultRelativeLoading;
    int rereference_iterations = 30;
    Real rereference_tolerance = 1e-3; ///< deg
    Real cutoff = extract::kDefaultCutoff;
    int filter_order = extract::kDefaultFilterOrder;
};

struct CalibrationConfig
{
    std::string file;               ///< calibration JSON applied by sense
    std::optional<Real> pilot_aoa;  ///< deg; LOS AoA when unset
    int snapshot_size = 10000;
    Real snapshot_snr_db = 30.0;
};

struct StudyConfig
{
    Real delta_w = 1.0;
    Real d_first = 100.0;
    Real d_last = 1000.0;
    Real d_step = 10.0;
};

/// Everything a CLI run needs. Loaded from an INI-style file:
///
///   [section]
///   key = value        # comment
///
/// Sections: run, geometry, array, sampling, water, paths, noise, rpo, errors,
/// sense, calibration, study. Unknown sections or keys are errors.
struct RunConfig
{
    scene::Geometry geometry;
    ArrayConfig array = ArrayConfig::half_wavelength(4, 2659.8e6);
    SamplingConfig sampling;
    Real water_start = 0.0;        ///< m, relative to h_w0
    Real water_delta = -1.0;       ///< m over the whole run
    Complex los_gain{1.0, 0.0};
    Complex reflected_gain = std::polar(0.5, kPi / 4.0);
    std::optional<Real> snr_db = 20.0;
    std::optional<RpoModel> rpo = RpoModel{};
    std::optional<ArrayErrorModel> errors;
    SenseConfig sense;
    CalibrationConfig calibration;
    StudyConfig study;
    std::uint64_t seed = 1;

    Real theta0() const;
    Real pilot_aoa() const;
    Real noise_sigma() const;
    ScenarioConfig scenario() const;

    /// Throws ErrorCode::Config naming the offending field.
    void validate() const;
};

RunConfig parse_config(std::istream &in, const std::string &source = "<config>");
RunConfig load_config(const std::string &path);

} // namespace hydrosense::pipeline

#endif // HYDROSENSE_CONFIG_HPP
