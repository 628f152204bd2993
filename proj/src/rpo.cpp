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

#include "hydrosense/rpo.hpp"

#include <cmath>

#include "hydrosense/csi_sim.hpp"
#include "hydrosense/error.hpp"

namespace hydrosense::rpo {

CMatrix subcarrier_cov(const CMatrix &hk, Real rho)
{
    return loaded_covariance(hk, rho);
}

BeamWeights mvdr_weights(const CMatrix &r, const CVector &a0, Real aoa_deg)
{
    BeamWeights bw;
    bw.w = mvdr_solve(r, a0);
    bw.constraints = {{aoa_deg, Complex(1.0, 0.0)}};
    return bw;
}

CMatrix reference_signal(const CsiCapture &capture, Real theta0_deg, Real loading)
{
    capture.validate();
    require(capture.m() >= 2, "RPO compensation needs M >= 2 antennas", "array.m");
    const CVector a0 = steering_vector(capture.array, theta0_deg);
    const int K = capture.k();
    CMatrix ref(K, capture.l());
    for (int k = 0; k < K; ++k)
    {
        const CMatrix hk = capture.subcarrier(k);
        Real rho = relative_loading(hk, loading);
        if (!(rho > 0.0))
            rho = 1e-30; // all-zero block: keep R invertible
        const CVector w = mvdr_solve(subcarrier_cov(hk, rho), a0);
        ref.row(k) = w.adjoint() * hk;
    }
    return ref;
}

RpoEstimate estimate_rpo(const CsiCapture &capture, Real theta0_deg, Real loading)
{
    const CMatrix ref = reference_signal(capture, theta0_deg, loading);
    RpoEstimate est;
    est.phases = ref.unaryExpr([](const Complex &z) { return std::arg(z); });
    return est;
}

CsiCapture compensate(const CsiCapture &capture, const RpoEstimate &est)
{
    require(est.phases.rows() == capture.k() && est.phases.cols() == capture.l(),
            "RPO estimate dimensions do not match capture");
    CsiCapture out = capture;
    const int L = capture.l();
    const CMatrix rot = est.phases.unaryExpr([](Real p) { return std::polar<Real>(1.0, -p); });
    for (int m = 0; m < capture.m(); ++m)
        out.data.middleCols(static_cast<Eigen::Index>(L) * m, L).array() *= rot.array();
    return out;
}

dimred::ReducedSeries rereference(const dimred::ReducedSeries &series, const ArrayConfig &array, Real theta0_deg,
                                  Real theta1_deg)
{
    require(series.m() == array.m && array.m >= 2, "series rows must equal the antenna count", "array.m");
    require(theta0_deg != theta1_deg, "LOS and water directions must differ", "aoa");
    CMatrix c(array.m, 2);
    c.col(0) = steering_vector(array, theta0_deg);
    c.col(1) = steering_vector(array, theta1_deg);
    CVector f(2);
    f << 1.0, 0.0;
    const CVector w = lcmv_solve(CMatrix::Identity(array.m, array.m), c, f);

    dimred::ReducedSeries out = series;
    for (int n = 0; n < series.n(); ++n)
    {
        const Complex r = w.dot(series.h.col(n));
        if (std::abs(r) > 0.0)
            out.h.col(n) *= std::polar<Real>(1.0, -std::arg(r));
    }
    return out;
}

} // namespace hydrosense::rpo
