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

#include "hydrosense/extract.hpp"

#include <algorithm>
#include <cmath>

#include "hydrosense/csi_sim.hpp"
#include "hydrosense/error.hpp"

namespace hydrosense::extract {

ReducedSeries remove_static(const ReducedSeries &series)
{
    require(series.n() >= 2, "static removal needs at least two captures", "sampling.n");
    ReducedSeries out = series;
    const CVector mean = series.h.rowwise().mean();
    out.h.colwise() -= mean;
    return out;
}

std::vector<Biquad> butterworth_lowpass(int order, Real cutoff_fraction)
{
    require(order >= 2 && order % 2 == 0, "filter order must be a positive even number", "filter.order");
    require(cutoff_fraction > 0.0 && cutoff_fraction <= 0.5, "cutoff must lie in (0, 0.5]", "filter.cutoff");
    const int sections = order / 2;
    std::vector<Biquad> sos(sections);
    if (cutoff_fraction == 0.5)
        return sos;
    const Real warped = 2.0 * std::tan(kPi * cutoff_fraction);
    for (int k = 0; k < sections; ++k)
    {
        const Real ang = kPi * (2.0 * k + order + 1) / (2.0 * order);
        const Complex s = warped * std::polar<Real>(1.0, ang);
        const Complex z = (2.0 + s) / (2.0 - s);
        Biquad q;
        q.a1 = -2.0 * z.real();
        q.a2 = std::norm(z);
        const Real g = (1.0 + q.a1 + q.a2) / 4.0;
        q.b0 = g;
        q.b1 = 2.0 * g;
        q.b2 = g;
        sos[k] = q;
    }
    return sos;
}

Real response_magnitude(const std::vector<Biquad> &sos, Real f)
{
    const Complex z1 = std::polar<Real>(1.0, -kTwoPi * f);
    const Complex z2 = z1 * z1;
    Complex h = 1.0;
    for (const auto &q : sos)
        h *= (q.b0 + q.b1 * z1 + q.b2 * z2) / (1.0 + q.a1 * z1 + q.a2 * z2);
    return std::abs(h);
}

namespace {

// Direct form II transposed, state seeded at the step response of x0.
void sos_filter(const std::vector<Biquad> &sos, std::vector<Complex> &x)
{
    if (x.empty())
        return;
    Complex level = x.front();
    for (const auto &q : sos)
    {
        const Real dc = (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
        Complex z2 = (q.b2 - q.a2 * dc) * level;
        Complex z1 = (q.b1 - q.a1 * dc) * level + z2;
        for (auto &v : x)
        {
            const Complex in = v;
            const Complex y = q.b0 * in + z1;
            z1 = q.b1 * in - q.a1 * y + z2;
            z2 = q.b2 * in - q.a2 * y;
            v = y;
        }
        level *= dc;
    }
}

} // namespace

CVector filtfilt(const std::vector<Biquad> &sos, const CVector &x)
{
    const int pad = 3 * (2 * static_cast<int>(sos.size()) + 1);
    const int n = static_cast<int>(x.size());
    if (n <= pad)
        fail(ErrorCode::InvalidArgument,
             "series of " + std::to_string(n) + " captures is too short for the filter (needs > " +
                 std::to_string(pad) + ")",
             "sampling.n");

    std::vector<Complex> ext(static_cast<std::size_t>(n + 2 * pad));
    for (int i = 0; i < pad; ++i)
    {
        ext[i] = 2.0 * x(0) - x(pad - i);
        ext[n + pad + i] = 2.0 * x(n - 1) - x(n - 2 - i);
    }
    for (int i = 0; i < n; ++i)
        ext[pad + i] = x(i);

    sos_filter(sos, ext);
    std::reverse(ext.begin(), ext.end());
    sos_filter(sos, ext);
    std::reverse(ext.begin(), ext.end());

    CVector y(n);
    for (int i = 0; i < n; ++i)
        y(i) = ext[pad + i];
    return y;
}

ReducedSeries lowpass(const ReducedSeries &series, Real cutoff_fraction, int order)
{
    const auto sos = butterworth_lowpass(order, cutoff_fraction);
    ReducedSeries out = series;
    for (int m = 0; m < series.m(); ++m)
        out.h.row(m) = filtfilt(sos, series.h.row(m).transpose()).transpose();
    return out;
}

BeamWeights lcmv_weights(const ReducedSeries &series, Real theta1_deg, Real theta0_deg, const ArrayConfig &array,
                         Real loading)
{
    require(array.m >= 2 && series.m() == array.m, "series rows must equal the antenna count", "array.m");
    require(series.n() >= 1, "empty series", "sampling.n");
    require(theta1_deg != theta0_deg, "water and LOS directions must differ", "aoa");
    require(loading >= 0.0, "loading must be non-negative", "extract.loading");

    Real rho = relative_loading(series.h, loading);
    if (!(rho > 0.0))
        rho = 1.0; // all-zero series or no loading: fall back to R = I
    const CMatrix r = loaded_covariance(series.h, rho);
    CMatrix c(array.m, 2);
    c.col(0) = steering_vector(array, theta1_deg);
    c.col(1) = steering_vector(array, theta0_deg);
    CVector f(2);
    f << 1.0, 0.0;

    BeamWeights bw;
    bw.w = lcmv_solve(r, c, f);
    bw.constraints = {{theta1_deg, {1.0, 0.0}}, {theta0_deg, {0.0, 0.0}}};
    const Real res = bw.max_residual(array);
    if (!(res < kConstraintTolerance))
        fail(ErrorCode::Numerical, "LCMV constraint residual " + std::to_string(res) + " above tolerance", "aoa");
    return bw;
}

CRowVector beamform(const ReducedSeries &series, const CVector &w)
{
    require(w.size() == series.m(), "weight length must equal the antenna count", "array.m");
    return w.adjoint() * series.h;
}

PhaseSeries phase_series(const CRowVector &h_bf, Real step_limit)
{
    const Eigen::Index n = h_bf.size();
    require(n >= 1, "empty beamformed series");
    PhaseSeries out;
    out.psi.resize(n);
    Real prev = 0.0, acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        if (!(std::abs(h_bf(i)) > 0.0))
            fail(ErrorCode::Unwrap, "beamformed sample " + std::to_string(i) + " has zero magnitude",
                 "capture_index");
        const Real raw = std::arg(h_bf(i));
        if (i == 0)
        {
            out.psi(0) = 0.0;
        }
        else
        {
            const Real step = wrap_phase(raw - prev);
            acc += step;
            out.psi(i) = acc;
            out.max_step = std::max(out.max_step, std::abs(step));
        }
        prev = raw;
    }
    out.valid = out.max_step < step_limit;
    return out;
}

RVector path_delta(const RVector &psi, Real lambda)
{
    require(lambda > 0.0, "wavelength must be positive", "array.fc");
    RVector d(psi.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i)
        d(i) = (-psi(i) / kTwoPi) * lambda;
    return d;
}

Real sind(Real deg)
{
    const Real q = deg / 30.0;
    if (q == std::round(q) && std::abs(q) < 1e9)
    {
        const Real r3 = std::sqrt(3.0) / 2.0;
        const Real table[12] = {0.0, 0.5, r3, 1.0, r3, 0.5, 0.0, -0.5, -r3, -1.0, -r3, -0.5};
        long k = static_cast<long>(q) % 12;
        if (k < 0)
            k += 12;
        return table[k];
    }
    return std::sin(deg2rad(deg));
}

WaterLevelSeries water_level(const RVector &delta_d, Real alpha_deg)
{
    const Real s = sind(alpha_deg);
    if (!(s > std::sin(deg2rad(kMinGrazingDeg))))
        fail(ErrorCode::InvalidArgument,
             "grazing angle " + std::to_string(alpha_deg) + " deg is too small for level inversion", "alpha");
    WaterLevelSeries out;
    out.alpha_used = alpha_deg;
    out.path_delta = delta_d;
    out.delta_w = -delta_d / (2.0 * s);
    return out;
}

} // namespace hydrosense::extract
