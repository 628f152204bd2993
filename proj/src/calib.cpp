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

#include "hydrosense/calib.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "hydrosense/error.hpp"

namespace hydrosense::calib {

namespace {

CsiCapture scale_antennas(const CsiCapture &capture, const CVector &factor)
{
    require(factor.size() == capture.m(), "antenna count mismatch between capture and error model", "errors");
    CsiCapture out = capture;
    const int L = capture.l();
    for (int m = 0; m < capture.m(); ++m)
        out.data.middleCols(static_cast<Eigen::Index>(L) * m, L) *= factor(m);
    return out;
}

} // namespace

CsiCapture apply_errors(const CsiCapture &capture, const ArrayErrorModel &err)
{
    err.validate();
    return scale_antennas(capture, err.vector());
}

BasebandSnapshot apply_errors(const BasebandSnapshot &snapshot, const ArrayErrorModel &err)
{
    err.validate();
    require(err.m() == snapshot.data.rows(), "antenna count mismatch between snapshot and error model", "errors");
    BasebandSnapshot out = snapshot;
    out.data = err.vector().asDiagonal() * snapshot.data;
    return out;
}

ErrorEstimate estimate_errors(const BasebandSnapshot &snapshot, Real pilot_aoa_deg, const ArrayConfig &array,
                              Real tolerance)
{
    snapshot.validate();
    require(snapshot.data.rows() == array.m, "snapshot antenna count does not match array", "snapshot");
    const int M = array.m;
    const int S = snapshot.sources;

    const CMatrix R = snapshot.data * snapshot.data.adjoint() / static_cast<Real>(snapshot.data.cols());
    Eigen::SelfAdjointEigenSolver<CMatrix> cov_eig(R);
    if (cov_eig.info() != Eigen::Success)
        fail(ErrorCode::Numerical, "covariance eigendecomposition failed");
    const CMatrix Es = cov_eig.eigenvectors().rightCols(S);

    const CVector a0 = steering_vector(array, pilot_aoa_deg);
    const CMatrix T = a0.conjugate().asDiagonal() * Es; // A0^H Es
    const CMatrix Q = T * T.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> q_eig(Q);
    if (q_eig.info() != Eigen::Success)
        fail(ErrorCode::Numerical, "calibration eigendecomposition failed");

    Eigen::Index best = 0;
    Real best_dist = std::abs(q_eig.eigenvalues()(0) - 1.0);
    for (Eigen::Index i = 1; i < M; ++i)
    {
        const Real d = std::abs(q_eig.eigenvalues()(i) - 1.0);
        if (d < best_dist)
        {
            best_dist = d;
            best = i;
        }
    }
    if (best_dist > tolerance)
        fail(ErrorCode::Calibration,
             "no unity eigenvalue (nearest " + std::to_string(q_eig.eigenvalues()(best)) +
                 "); check pilot AoA and snapshot SNR",
             "pilot_aoa");

    CVector v = q_eig.eigenvectors().col(best);
    if (std::abs(v(0)) < 1e-12)
        fail(ErrorCode::Calibration, "reference antenna carries no pilot energy", "pilot_aoa");
    v /= v(0);

    ErrorEstimate est;
    est.e = v;
    est.eigenvalue = q_eig.eigenvalues()(best);
    est.model = ArrayErrorModel::from_vector(v);
    return est;
}

CsiCapture calibrate(const CsiCapture &capture, const ArrayErrorModel &estimate)
{
    const CVector e = estimate.vector();
    for (Eigen::Index m = 0; m < e.size(); ++m)
        if (!(std::abs(e(m)) >= 1e-6))
            fail(ErrorCode::Calibration, "calibration element " + std::to_string(m) + " has near-zero magnitude",
                 "calibration");
    return scale_antennas(capture, e.cwiseInverse());
}

} // namespace hydrosense::calib
