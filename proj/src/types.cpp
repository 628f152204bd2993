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

#include "hydrosense/types.hpp"

#include <cmath>
#include <string>

#include "hydrosense/error.hpp"

namespace hydrosense {

Real wrap_phase(Real rad)
{
    Real w = std::remainder(rad, kTwoPi); // [-pi, pi]
    if (w <= -kPi)
        w += kTwoPi;
    return w;
}

ArrayConfig ArrayConfig::half_wavelength(int m, Real fc)
{
    ArrayConfig a;
    a.m = m;
    a.fc = fc;
    a.kappa = 0.5 * a.lambda();
    return a;
}

bool ArrayConfig::validate() const
{
    require(m >= 2, "array needs at least 2 antennas", "array.m");
    require(kappa > 0.0 && std::isfinite(kappa), "element spacing must be positive", "array.kappa");
    require(fc > 0.0 && std::isfinite(fc), "carrier frequency must be positive", "array.fc");
    return kappa <= 0.5 * lambda() * (1.0 + 1e-12);
}

void SamplingConfig::validate() const
{
    require(k >= 1, "subcarrier count must be >= 1", "sampling.k");
    require(l >= 1, "symbol count must be >= 1", "sampling.l");
    require(n >= 1, "capture count must be >= 1", "sampling.n");
    require(delta_f > 0.0, "subcarrier spacing must be positive", "sampling.delta_f");
    require(delta_t > 0.0, "symbol interval must be positive", "sampling.delta_t");
    require(delta_t_cap > 0.0, "capture interval must be positive", "sampling.delta_t_cap");
}

CsiCapture::CsiCapture(const ArrayConfig &arr, const SamplingConfig &smp, Real t)
    : data(CMatrix::Zero(smp.k, static_cast<Eigen::Index>(smp.l) * arr.m)), timestamp(t), array(arr), sampling(smp)
{
}

CMatrix CsiCapture::subcarrier(int kk) const
{
    const int L = sampling.l;
    const int M = array.m;
    CMatrix hk(M, L);
    for (int mm = 0; mm < M; ++mm)
        for (int ll = 0; ll < L; ++ll)
            hk(mm, ll) = data(kk, ll + L * mm);
    return hk;
}

void CsiCapture::set_subcarrier(int kk, const CMatrix &hk)
{
    const int L = sampling.l;
    const int M = array.m;
    require(hk.rows() == M && hk.cols() == L, "subcarrier block must be M x L");
    for (int mm = 0; mm < M; ++mm)
        for (int ll = 0; ll < L; ++ll)
            data(kk, ll + L * mm) = hk(mm, ll);
}

void CsiCapture::validate() const
{
    require(data.rows() == sampling.k, "capture has " + std::to_string(data.rows()) + " subcarriers, config says " +
                                           std::to_string(sampling.k));
    require(data.cols() == static_cast<Eigen::Index>(sampling.l) * array.m, "capture columns must equal L*M");
    require(data.allFinite(), "capture contains non-finite entries");
}

ArrayErrorModel ArrayErrorModel::identity(int m)
{
    ArrayErrorModel e;
    e.gains = RVector::Ones(m);
    e.phases = RVector::Zero(m);
    e.rco_antennas = default_rco_subset(m);
    return e;
}

std::vector<int> ArrayErrorModel::default_rco_subset(int m)
{
    std::vector<int> subset;
    for (int i = 2; i < m; ++i)
        subset.push_back(i);
    return subset;
}

CVector ArrayErrorModel::vector() const
{
    const int M = m();
    CVector e(M);
    for (int i = 0; i < M; ++i)
        e(i) = std::polar(gains(i), -phases(i));
    for (int i : rco_antennas)
        e(i) *= std::polar(1.0, -rco);
    return e;
}

ArrayErrorModel ArrayErrorModel::inverse() const
{
    ArrayErrorModel inv = *this;
    inv.gains = gains.cwiseInverse();
    inv.phases = -phases;
    inv.rco = -rco;
    return inv;
}

ArrayErrorModel ArrayErrorModel::from_vector(const CVector &e)
{
    require(e.size() >= 1 && std::abs(e(0)) > 0.0, "error vector needs a non-zero reference element");
    const CVector n = e / e(0);
    ArrayErrorModel model;
    model.gains.resize(n.size());
    model.phases.resize(n.size());
    for (Eigen::Index i = 0; i < n.size(); ++i)
    {
        model.gains(i) = std::abs(n(i));
        model.phases(i) = -std::arg(n(i));
    }
    model.gains(0) = 1.0;
    model.phases(0) = 0.0;
    return model;
}

void ArrayErrorModel::validate() const
{
    require(gains.size() >= 1 && gains.size() == phases.size(), "gain and phase vectors must have equal length",
            "errors");
    require((gains.array() > 0.0).all() && gains.allFinite(), "antenna gains must be positive", "errors.gains");
    require(phases.allFinite(), "antenna phases must be finite", "errors.phases");
    require(gains(0) == 1.0 && phases(0) == 0.0, "reference antenna must be 1*exp(j0)", "errors");
    for (int i : rco_antennas)
        require(i > 0 && i < m(), "rco antenna index out of range (reference antenna excluded)", "errors.rco_antennas");
}

} // namespace hydrosense
