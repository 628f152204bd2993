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

#ifndef HYDROSENSE_CSI_SIM_HPP
#define HYDROSENSE_CSI_SIM_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hydrosense/scene.hpp"
#include "hydrosense/types.hpp"

namespace hydrosense {

/// ULA steering vector a(theta): element m is exp(-j 2 pi kappa m sin(theta) / lambda).
template <typename Scalar = Complex>
Vector<Scalar> steering_vector(const ArrayConfig &array, Real aoa_deg);

/// Doppler response over l symbols: element i is exp(+j 2 pi delta_t i f_d).
template <typename Scalar = Complex>
Vector<Scalar> doppler_vector(Real f_d, Real delta_t, int l);

extern template CVector steering_vector<Complex>(const ArrayConfig &, Real);
extern template CVector doppler_vector<Complex>(Real, Real, int);

/// Portable seeded generator: mt19937_64 stream with our own uniform and
/// Box-Muller transforms, so a seed gives the same draws on every platform.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    Real uniform();
    /// Standard normal.
    Real normal();
    /// Circular complex Gaussian with per-component standard deviation sigma.
    Complex cnormal(Real sigma) { return {sigma * normal(), sigma * normal()}; }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    Real spare_ = 0.0;
};

/// Deterministic per-item seed from a master seed (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

struct PathParams
{
    Complex gain{1.0, 0.0};
    Real delay = 0.0;   ///< s
    Real doppler = 0.0; ///< Hz
    Real aoa = 0.0;     ///< deg
};

/// Random phase offset shared by all antennas:
/// phi(k, l) = phi_i + phi_f(l) - 2 pi delta_f k tau(l).
struct RpoModel
{
    enum class Mode
    {
        Deterministic, ///< phi_i = init_phase, linear CFO and TO drift
        RandomWalk,    ///< uniform phi_i per capture, jittered CFO/TO integration
        IidUniform,    ///< every phi(k, l) independent uniform
    };

    Real cfo = 0.0;        ///< Hz
    Real to = 0.0;         ///< timing drift per symbol (s)
    Real init_phase = 0.0; ///< rad
    Real walk_std = 0.05;  ///< phase jitter per symbol (rad), random-walk mode
    Mode mode = Mode::RandomWalk;

    /// K x L phases in (-pi, pi].
    RMatrix phases(const SamplingConfig &sampling, Rng &rng) const;
};

/// Per-entry noise standard deviation (per real component) for a given SNR in
/// dB, where SNR = LOS per-entry power / (2 sigma^2).
Real noise_sigma_for_snr(Real snr_db, Real los_power = 1.0);

/// h(k,l,m) = e^{j phi(k,l)} e_m sum_p g_p e^{-j2pi f_k tau_p} e^{+j2pi t_l f_p} a_m(theta_p) + n(k,l,m)
/// with f_k = fc + delta_f k and t_l = delta_t l (0-based).
CsiCapture synth_capture(const std::vector<PathParams> &paths, const ArrayConfig &array,
                         const SamplingConfig &sampling, const std::optional<RpoModel> &rpo,
                         const std::optional<ArrayErrorModel> &errors, Real noise_sigma, std::uint64_t seed,
                         Real timestamp = 0.0);

/// The K x L RPO phases synth_capture injects for a given seed (test oracle access).
RMatrix injected_rpo(const RpoModel &rpo, const SamplingConfig &sampling, std::uint64_t seed);

struct ScenarioConfig
{
    scene::Geometry geometry;
    std::vector<Real> water;        ///< water height per capture (m)
    ArrayConfig array;
    SamplingConfig sampling;
    std::optional<RpoModel> rpo;
    std::optional<ArrayErrorModel> errors;
    Real noise_sigma = 0.0;
    Complex los_gain{1.0, 0.0};
    Complex reflected_gain = std::polar(0.5, kPi / 4.0);
    std::vector<PathParams> extra_paths; ///< static clutter or movers, same in every capture
    std::uint64_t seed = 1;
};

struct TruthRecord
{
    int index = 0;
    Real time = 0.0;
    Real water = 0.0;
    Real d1 = 0.0;
    Real aoa = 0.0;
    Real alpha = 0.0;
};

/// Per-capture path sets plus ground truth. Captures are synthesized lazily so
/// long scenarios never hold every K x L x M tensor at once.
struct Scenario
{
    ScenarioConfig config;
    std::vector<std::vector<PathParams>> paths;
    std::vector<TruthRecord> truth;
    Real theta0 = 0.0;

    int size() const { return static_cast<int>(paths.size()); }
    CsiCapture capture(int i) const;
};

Scenario gen_scenario(const ScenarioConfig &cfg);

/// Linear water ramp from w0 to w0 + delta over n captures.
std::vector<Real> linear_ramp(Real w0, Real delta, int n);

/// Narrowband baseband snapshot B = E A S + N (M x G).
struct BasebandSnapshot
{
    CMatrix data;
    int sources = 1;

    void validate() const;
};

/// Independent unit-power complex Gaussian sources at the given AoAs.
BasebandSnapshot synth_snapshot(const ArrayConfig &array, const std::vector<Real> &aoas,
                                const std::optional<ArrayErrorModel> &errors, Real noise_sigma, int g,
                                std::uint64_t seed);

} // namespace hydrosense

#endif // HYDROSENSE_CSI_SIM_HPP
