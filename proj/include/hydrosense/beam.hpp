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

#ifndef HYDROSENSE_BEAM_HPP
#define HYDROSENSE_BEAM_HPP

#include <vector>

#include "hydrosense/types.hpp"

namespace hydrosense {

/// Required accuracy of every linear beam constraint w^H c = g.
inline constexpr Real kConstraintTolerance = 1e-9;

/// Largest accepted condition number of C^H R^-1 C.
inline constexpr Real kMaxConstraintCondition = 1e12;

struct BeamConstraint
{
    Real aoa = 0.0;           ///< deg
    Complex gain{1.0, 0.0};   ///< required w^H a(aoa)
};

struct BeamWeights
{
    CVector w;
    std::vector<BeamConstraint> constraints;

    /// max |w^H a(aoa) - gain| over the constraints.
    Real max_residual(const ArrayConfig &array) const;
};

/// Sample covariance X X^H / cols + rho I, symmetrized.
CMatrix loaded_covariance(const CMatrix &x, Real rho);

/// rho = relative * trace(X X^H / cols) / rows.
Real relative_loading(const CMatrix &x, Real relative);

/// w = R^-1 a / (a^H R^-1 a); w^H a == 1.
CVector mvdr_solve(const CMatrix &r, const CVector &a);

/// w = R^-1 C (C^H R^-1 C)^-1 f; C^H w == f. Throws IllConditioned when
/// cond(C^H R^-1 C) exceeds kMaxConstraintCondition.
CVector lcmv_solve(const CMatrix &r, const CMatrix &c, const CVector &f);

} // namespace hydrosense

#endif // HYDROSENSE_BEAM_HPP
