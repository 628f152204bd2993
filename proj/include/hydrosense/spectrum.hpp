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

#ifndef HYDROSENSE_SPECTRUM_HPP
#define HYDROSENSE_SPECTRUM_HPP

#include <string>
#include <vector>

#include "hydrosense/dimred.hpp"
#include "hydrosense/types.hpp"

/// Joint AoA / slow-time Doppler estimation on the reduced M x N series.
///
/// Doppler sign: grid frequencies are slow-time Doppler shifts in the
/// phase-rate sense, i.e. a component exp(+j 2 pi f n dt) across captures has
/// Doppler f. A lengthening reflected path (falling water) has negative
/// Doppler. The joint steering vector follows the path-rate convention
/// exp(-j 2 pi dt f n), so the spectrum at Doppler f is evaluated with
/// joint_steering(theta, -f).
namespace hydrosense::spectrum {

struct SmoothingConfig
{
    int m_s = 1; ///< spatial subarray size
    int n_s = 1; ///< temporal subwindow size

    /// m_s = ceil(M/2) + 1 (capped at M), n_s = floor(N/2) + 1.
    static SmoothingConfig defaults(int m, int n);

    /// Throws when outside [1, M] x [1, N]. Returns false when there are fewer
    /// virtual snapshots than the smoothed dimension (rank-deficient covariance).
    bool validate(int m, int n) const;
};

/// (M - m_s + 1)(N - n_s + 1) x m_s n_s. Column i + m_s j holds h[m + i, n + j]
/// for rows m + M~ n (antenna fastest).
CMatrix smooth(const CMatrix &h, const SmoothingConfig &cfg);

/// R_s = H_s H_s^H / (m_s n_s).
CMatrix smoothed_cov(const CMatrix &hs);

/// a_f(f)^T kron a(theta): element n * m_sub + m = exp(-j 2 pi dt f n) a_m(theta).
CVector joint_steering(Real theta_deg, Real f, int m_sub, int n_sub, const ArrayConfig &array, Real delta_t_cap);

/// Hermitian eigendecomposition with eigenvalues sorted descending.
struct EigenDecomposition
{
    RVector values;
    CMatrix vectors;
};
EigenDecomposition eigen_descending(const CMatrix &r);

struct SpectrumGrid
{
    std::vector<Real> theta_axis; ///< deg
    std::vector<Real> f_axis;     ///< Hz
    RMatrix power;                ///< theta x f

    Real theta_step() const;
    Real f_step() const;
};

/// 0.5 deg steps over (-90, 90).
std::vector<Real> default_theta_grid(Real step = 0.5);

/// `points` values spanning [-1/(2 dt), 1/(2 dt)].
std::vector<Real> default_f_grid(Real delta_t_cap, int points = 201);

/// MUSIC pseudo-spectrum backed by the signal subspace of R_s; evaluates
/// 1 / ||E_n^H a||^2 = 1 / (||a||^2 - ||E_s^H a||^2) at any (theta, f).
class MusicEstimator
{
public:
    MusicEstimator(const CMatrix &rs, int sources, int m_sub, int n_sub, const ArrayConfig &array, Real delta_t_cap);

    Real power(Real theta_deg, Real f) const;
    SpectrumGrid evaluate(const std::vector<Real> &theta_grid, const std::vector<Real> &f_grid) const;

    const RVector &eigenvalues() const { return eig_.values; }

private:
    EigenDecomposition eig_;
    CMatrix es_;
    int sources_, m_sub_, n_sub_;
    ArrayConfig sub_array_;
    Real delta_t_cap_;
};

SpectrumGrid music2d(const CMatrix &rs, int sources, const std::vector<Real> &theta_grid,
                     const std::vector<Real> &f_grid, int m_sub, int n_sub, const ArrayConfig &array,
                     Real delta_t_cap);

enum class PathLabel
{
    Los,
    Water,
    Other,
};
const char *label_name(PathLabel label);

struct PeakEstimate
{
    Real aoa = 0.0;     ///< deg
    Real doppler = 0.0; ///< Hz
    Real power = 0.0;
    PathLabel label = PathLabel::Other;
    int theta_index = -1;
    int f_index = -1;
};

/// The p strongest local maxima over the 8-neighbourhood. A point qualifies if
/// it is >= all neighbours and > every neighbour that precedes it in
/// (theta, f) lexicographic order, so a plateau yields its first point.
/// Peaks with |f| <= one f step are LOS; the strongest other peak is Water.
/// Throws PeakNotFound when fewer than p maxima exist.
std::vector<PeakEstimate> find_peaks(const SpectrumGrid &grid, int p);

/// Zooms around a grid peak on successively finer local grids.
PeakEstimate refine_peak(const MusicEstimator &music, const PeakEstimate &peak, Real theta_step, Real f_step,
                         int rounds = 4);

} // namespace hydrosense::spectrum

#endif // HYDROSENSE_SPECTRUM_HPP
