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

#ifndef HYDROSENSE_RPO_HPP
#define HYDROSENSE_RPO_HPP

#include "hydrosense/beam.hpp"
#include "hydrosense/dimred.hpp"
#include "hydrosense/types.hpp"

/// Random-phase-offset (RPO) removal using an MVDR reference beam on the
/// static LOS path. The RPO is common to all antennas, so the phase of the LOS
/// beam output over symbols tracks it; rotating every symbol by the negative
/// of that phase leaves the LOS static up to a constant per-subcarrier residue.
namespace hydrosense::rpo {

/// Default diagonal loading relative to trace(R)/M. Within one capture the LOS
/// and water paths are coherent, so light loading lets the MVDR beam cancel the
/// LOS it is steered at and the reference phase becomes noise.
inline constexpr Real kDefaultRelativeLoading = 10.0;

struct RpoEstimate
{
    /// K x L phases of the reference beam, in (-pi, pi]. A constant offset per
    /// subcarrier is unidentifiable and remains in the compensated capture.
    RMatrix phases;
};

/// R = H H^H / L + rho I for one M x L subcarrier block.
CMatrix subcarrier_cov(const CMatrix &hk, Real rho);

/// MVDR beam toward a0 under covariance r.
BeamWeights mvdr_weights(const CMatrix &r, const CVector &a0, Real aoa_deg = 0.0);

/// K x L reference signal r_k = w_k^H H_k with per-subcarrier MVDR weights
/// steered at theta0. rho_k = loading * trace(H_k H_k^H / L) / M.
CMatrix reference_signal(const CsiCapture &capture, Real theta0_deg,
                         Real loading = kDefaultRelativeLoading);

RpoEstimate estimate_rpo(const CsiCapture &capture, Real theta0_deg,
                         Real loading = kDefaultRelativeLoading);

/// H~_k = H_k diag(exp(-j phases(k, :))).
CsiCapture compensate(const CsiCapture &capture, const RpoEstimate &est);

/// The per-capture reference phase also carries leakage of the water path
/// through the beam, which wobbles with the water phase from one capture to the
/// next. Rotates column n of the reduced series by -arg(w^H h_n), where w is the
/// minimum-norm beam with unit gain at theta0 and a null at theta1, so the LOS
/// phase is constant across captures.
dimred::ReducedSeries rereference(const dimred::ReducedSeries &series, const ArrayConfig &array, Real theta0_deg,
                                  Real theta1_deg);

} // namespace hydrosense::rpo

#endif // HYDROSENSE_RPO_HPP
