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

#ifndef HYDROSENSE_TYPES_HPP
#define HYDROSENSE_TYPES_HPP

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace hydrosense {

typedef double Real;
typedef std::complex<Real> Complex;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

typedef Vector<Complex> CVector;
typedef Matrix<Complex> CMatrix;
typedef Vector<Real> RVector;
typedef Matrix<Real> RMatrix;
typedef Eigen::Matrix<Complex, 1, Eigen::Dynamic> CRowVector;

inline constexpr Real kPi = std::numbers::pi_v<Real>;
inline constexpr Real kTwoPi = 2.0 * kPi;
inline constexpr Real kSpeedOfLight = 299792458.0;

constexpr Real deg2rad(Real deg) { return deg * kPi / 180.0; }
constexpr Real rad2deg(Real rad) { return rad * 180.0 / kPi; }

/// Wrap an angle into (-pi, pi].
Real wrap_phase(Real rad);

/// Receive ULA description. Element m sits kappa*m from the reference element.
struct ArrayConfig
{
    int m = 4;              ///< antenna count
    Real kappa = 0.0;       ///< element spacing (m)
    Real fc = 2659.8e6;     ///< carrier frequency (Hz)

    Real lambda() const { return kSpeedOfLight / fc; }

    /// Half-wavelength ULA at the given carrier.
    static ArrayConfig half_wavelength(int m, Real fc);

    /// Throws on m < 2, kappa <= 0 or fc <= 0. Returns false when kappa > lambda/2
    /// (grating lobes possible) so callers can warn.
    bool validate() const;
};

/// Per-capture sampling grid.
struct SamplingConfig
{
    int k = 200;                ///< subcarriers
    int l = 200;                ///< symbols per capture
    Real delta_f = 90e3;        ///< subcarrier spacing (Hz)
    Real delta_t = 0.5e-3;      ///< symbol interval (s)
    Real delta_t_cap = 90.0;    ///< capture interval (s)
    int n = 180;                ///< capture count

    void validate() const;
    Real capture_duration() const { return l * delta_t; }
};

/// One K x L x M CSI capture.
///
/// Stored as a K x (L*M) matrix: column index is l + L*m, so the underlying
/// column-major buffer is k-fastest, then l, then m. This is both the range
/// FFT layout and the on-disk payload order.
struct CsiCapture
{
    CMatrix data;
    Real timestamp = 0.0;
    ArrayConfig array;
    SamplingConfig sampling;

    CsiCapture() = default;
    CsiCapture(const ArrayConfig &arr, const SamplingConfig &smp, Real t = 0.0);

    int k() const { return static_cast<int>(data.rows()); }
    int l() const { return sampling.l; }
    int m() const { return array.m; }

    Complex &at(int k, int l, int m) { return data(k, l + sampling.l * m); }
    const Complex &at(int k, int l, int m) const { return data(k, l + sampling.l * m); }

    /// M x L matrix H_k of subcarrier k.
    CMatrix subcarrier(int k) const;
    void set_subcarrier(int k, const CMatrix &hk);

    /// Throws if dimensions disagree with the configs or any entry is non-finite.
    void validate() const;
};

/// Combined per-antenna gain/phase errors plus a clock offset shared by a
/// subset of antennas. Antenna m is scaled by gain_m * exp(-j(phase_m + rco*[m in subset])).
struct ArrayErrorModel
{
    RVector gains;                  ///< zeta_m, gains(0) == 1
    RVector phases;                 ///< beta_m (rad), phases(0) == 0
    Real rco = 0.0;                 ///< beta_c (rad)
    std::vector<int> rco_antennas;  ///< antennas carrying beta_c

    static ArrayErrorModel identity(int m);

    /// Antennas outside the first synchronized pair: {2, 3, ..., m-1}.
    static std::vector<int> default_rco_subset(int m);

    int m() const { return static_cast<int>(gains.size()); }

    /// Complex error vector e with e(0) == 1.
    CVector vector() const;

    /// Model whose vector is the inverse of this one.
    ArrayErrorModel inverse() const;

    /// Folds an estimated complex error vector into a model (rco absorbed in phases).
    static ArrayErrorModel from_vector(const CVector &e);

    void validate() const;
};

} // namespace hydrosense

#endif // HYDROSENSE_TYPES_HPP
