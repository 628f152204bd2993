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

#ifndef HYDROSENSE_PIPELINE_HPP
#define HYDROSENSE_PIPELINE_HPP

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hydrosense/calib.hpp"
#include "hydrosense/config.hpp"
#include "hydrosense/dimred.hpp"
#include "hydrosense/extract.hpp"
#include "hydrosense/scene.hpp"
#include "hydrosense/spectrum.hpp"

namespace hydrosense::pipeline {

/// Returns capture i. Called concurrently from worker threads.
using CaptureSource = std::function<CsiCapture(int)>;

/// Calibrates, RPO-compensates and reduces n captures to the M x N series.
dimred::ReducedSeries reduce_stream(const CaptureSource &source, int n, const ArrayConfig &array,
                                    const SamplingConfig &sampling,
                                    const std::optional<ArrayErrorModel> &calibration, Real theta0_deg,
                                    Real rpo_loading);

struct PathSearch
{
    dimred::ReducedSeries series;      ///< re-referenced series the estimates came from
    spectrum::PeakEstimate water;      ///< refined
    std::optional<spectrum::PeakEstimate> los;
    spectrum::SpectrumGrid grid;       ///< spectrum of the final iteration
    spectrum::SmoothingConfig smoothing;
    int iterations = 0;
};

/// Alternates 2D MUSIC with per-capture re-referencing (null on the current
/// water AoA) until the water AoA moves less than the configured tolerance.
PathSearch locate_paths(const dimred::ReducedSeries &raw, const ArrayConfig &array, Real theta0_deg,
                        const SenseConfig &cfg, std::ostream *log = nullptr);

struct SenseResult
{
    Real theta0 = 0.0;          ///< deg, LOS AoA used for the reference beams
    Real theta1 = 0.0;          ///< deg, water AoA
    Real alpha = 0.0;           ///< deg
    Real water_doppler = 0.0;   ///< Hz, slow-time
    std::optional<spectrum::PeakEstimate> los;
    int iterations = 0;
    std::vector<int> range_bins, doppler_bins;
    std::vector<Real> times;
    extract::PhaseSeries phase;
    extract::WaterLevelSeries level;
    spectrum::SpectrumGrid grid;
};

/// Extraction on a reduced series.
SenseResult sense_series(const dimred::ReducedSeries &raw, const ArrayConfig &array, Real theta_inc_deg,
                         Real theta0_deg, const SenseConfig &cfg, std::ostream *log = nullptr);

/// Full chain from raw captures.
SenseResult sense(const CaptureSource &source, int n, const ArrayConfig &array, const SamplingConfig &sampling,
                  const std::optional<ArrayErrorModel> &calibration, Real theta_inc_deg, Real theta0_deg,
                  const SenseConfig &cfg, std::ostream *log = nullptr);

std::string truth_csv(const std::vector<TruthRecord> &truth);
std::string water_level_csv(const SenseResult &result);
std::string spectrum_csv(const spectrum::SpectrumGrid &grid);
std::string study_csv(const std::vector<scene::AoaVariationPoint> &points);

struct SimulateOutputs
{
    std::string csi, truth, snapshot;
};

/// Writes csi.bin, truth.csv and pilot_snapshot.bin into out_dir.
SimulateOutputs run_simulate(const RunConfig &cfg, const std::string &out_dir, std::ostream *log = nullptr);

/// Reads a CSI file and writes water_level.csv (and spectrum.csv) into out_dir.
SenseResult run_sense(const std::string &csi_path, const RunConfig &cfg, const std::string &calibration_path,
                      bool emit_spectrum, const std::string &out_dir, std::ostream *log = nullptr);

/// Writes calibration.json into out_dir.
calib::ErrorEstimate run_calibrate(const std::string &snapshot_path, Real pilot_aoa_deg, const std::string &out_dir,
                                   std::ostream *log = nullptr);

/// Writes aoa_study.csv into out_dir.
std::vector<scene::AoaVariationPoint> run_study(const RunConfig &cfg, const std::string &out_dir);

} // namespace hydrosense::pipeline

#endif // HYDROSENSE_PIPELINE_HPP
