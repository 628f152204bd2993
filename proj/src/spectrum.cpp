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

#include "hydrosense/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hydrosense/csi_sim.hpp"
#include "hydrosense/error.hpp"

namespace hydrosense::spectrum {

SmoothingConfig SmoothingConfig::defaults(int m, int n)
{
    SmoothingConfig c;
    c.m_s = std::min(m, (m + 1) / 2 + 1);
    c.n_s = n / 2 + 1;
    c.n_s = std::min(c.n_s, n);
    return c;
}

bool SmoothingConfig::validate(int m, int n) const
{
    require(m_s >= 1 && m_s <= m, "spatial subarray size must lie in [1, M]", "smoothing.m_s");
    require(n_s >= 1 && n_s <= n, "temporal subwindow size must lie in [1, N]", "smoothing.n_s");
    const long rows = static_cast<long>(m - m_s + 1) * (n - n_s + 1);
    return rows <= static_cast<long>(m_s) * n_s;
}

CMatrix smooth(const CMatrix &h, const SmoothingConfig &cfg)
{
    const int M = static_cast<int>(h.rows());
    const int N = static_cast<int>(h.cols());
    cfg.validate(M, N);
    const int mt = M - cfg.m_s + 1;
    const int nt = N - cfg.n_s + 1;
    CMatrix hs(static_cast<Eigen::Index>(mt) * nt, static_cast<Eigen::Index>(cfg.m_s) * cfg.n_s);
    for (int j = 0; j < cfg.n_s; ++j)
        for (int i = 0; i < cfg.m_s; ++i)
        {
            const Eigen::Index col = i + static_cast<Eigen::Index>(cfg.m_s) * j;
            for (int n = 0; n < nt; ++n)
                for (int m = 0; m < mt; ++m)
                    hs(m + static_cast<Eigen::Index>(mt) * n, col) = h(m + i, n + j);
        }
    return hs;
}

CMatrix smoothed_cov(const CMatrix &hs)
{
    require(hs.cols() >= 1, "smoothed matrix has no snapshots");
    CMatrix r = hs * hs.adjoint() / static_cast<Real>(hs.cols());
    return 0.5 * (r + r.adjoint());
}

CVector joint_steering(Real theta_deg, Real f, int m_sub, int n_sub, const ArrayConfig &array, Real delta_t_cap)
{
    require(m_sub >= 1 && n_sub >= 1, "joint steering dimensions must be positive");
    ArrayConfig sub = array;
    sub.m = m_sub;
    const CVector a_theta = steering_vector(sub, theta_deg);
    CVector out(static_cast<Eigen::Index>(m_sub) * n_sub);
    for (int n = 0; n < n_sub; ++n)
    {
        const Complex af = std::polar<Real>(1.0, -kTwoPi * delta_t_cap * f * n);
        out.segment(static_cast<Eigen::Index>(n) * m_sub, m_sub) = af * a_theta;
    }
    return out;
}

EigenDecomposition eigen_descending(const CMatrix &r)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(r);
    if (eig.info() != Eigen::Success)
        fail(ErrorCode::Numerical, "eigendecomposition failed");
    EigenDecomposition out;
    out.values = eig.eigenvalues().reverse();
    out.vectors = eig.eigenvectors().rowwise().reverse();
    return out;
}

Real SpectrumGrid::theta_step() const
{
    return theta_axis.size() > 1 ? theta_axis[1] - theta_axis[0] : 0.0;
}

Real SpectrumGrid::f_step() const
{
    return f_axis.size() > 1 ? f_axis[1] - f_axis[0] : 0.0;
}

std::vector<Real> default_theta_grid(Real step)
{
    require(step > 0.0, "theta step must be positive", "grid.theta_step");
    std::vector<Real> g;
    const int half = static_cast<int>(std::ceil(90.0 / step)) - 1;
    for (int i = -half; i <= half; ++i)
        g.push_back(i * step);
    return g;
}

std::vector<Real> default_f_grid(Real delta_t_cap, int points)
{
    require(delta_t_cap > 0.0, "capture interval must be positive", "sampling.delta_t_cap");
    require(points >= 1, "Doppler grid needs at least one point", "grid.f_points");
    std::vector<Real> g(points);
    const Real span = 1.0 / delta_t_cap;
    for (int i = 0; i < points; ++i)
        g[i] = points == 1 ? 0.0 : -0.5 * span + span * static_cast<Real>(i) / (points - 1);
    return g;
}

MusicEstimator::MusicEstimator(const CMatrix &rs, int sources, int m_sub, int n_sub, const ArrayConfig &array,
                               Real delta_t_cap)
    : sources_(sources), m_sub_(m_sub), n_sub_(n_sub), sub_array_(array), delta_t_cap_(delta_t_cap)
{
    const Eigen::Index dim = static_cast<Eigen::Index>(m_sub) * n_sub;
    require(rs.rows() == dim && rs.cols() == dim, "covariance size must equal m_sub * n_sub");
    require(sources >= 0 && sources < dim, "source count must be in [0, M~N~)", "spectrum.sources");
    sub_array_.m = m_sub;
    eig_ = eigen_descending(rs);
    es_ = eig_.vectors.leftCols(sources);
}

Real MusicEstimator::power(Real theta_deg, Real f) const
{
    const CVector a = joint_steering(theta_deg, -f, m_sub_, n_sub_, sub_array_, delta_t_cap_);
    const Real norm2 = a.squaredNorm();
    const Real proj = sources_ > 0 ? (es_.adjoint() * a).squaredNorm() : 0.0;
    return 1.0 / std::max(norm2 - proj, 1e-14 * norm2);
}

SpectrumGrid MusicEstimator::evaluate(const std::vector<Real> &theta_grid, const std::vector<Real> &f_grid) const
{
    require(!theta_grid.empty() && !f_grid.empty(), "spectrum grids must not be empty", "grid");
    SpectrumGrid g;
    g.theta_axis = theta_grid;
    g.f_axis = f_grid;
    const int T = static_cast<int>(theta_grid.size());
    const int F = static_cast<int>(f_grid.size());
    const Real norm2 = static_cast<Real>(m_sub_) * n_sub_;
    g.power.resize(T, F);

    // Slow-time factors for every grid Doppler.
    CMatrix af(n_sub_, F);
    for (int fi = 0; fi < F; ++fi)
        for (int n = 0; n < n_sub_; ++n)
            af(n, fi) = std::polar<Real>(1.0, kTwoPi * delta_t_cap_ * f_grid[fi] * n);

    CMatrix u(n_sub_, sources_);
    for (int ti = 0; ti < T; ++ti)
    {
        const CVector at = steering_vector(sub_array_, theta_grid[ti]);
        for (int s = 0; s < sources_; ++s)
        {
            const Eigen::Map<const CMatrix> e(es_.col(s).data(), m_sub_, n_sub_);
            u.col(s) = e.adjoint() * at;
        }
        RVector proj = RVector::Zero(F);
        if (sources_ > 0)
            proj = (u.transpose() * af).cwiseAbs2().colwise().sum().transpose();
        for (int fi = 0; fi < F; ++fi)
            g.power(ti, fi) = 1.0 / std::max(norm2 - proj(fi), 1e-14 * norm2);
    }
    return g;
}

SpectrumGrid music2d(const CMatrix &rs, int sources, const std::vector<Real> &theta_grid,
                     const std::vector<Real> &f_grid, int m_sub, int n_sub, const ArrayConfig &array,
                     Real delta_t_cap)
{
    return MusicEstimator(rs, sources, m_sub, n_sub, array, delta_t_cap).evaluate(theta_grid, f_grid);
}

const char *label_name(PathLabel label)
{
    switch (label)
    {
    case PathLabel::Los: return "LOS";
    case PathLabel::Water: return "water";
    case PathLabel::Other: return "other";
    }
    return "other";
}

std::vector<PeakEstimate> find_peaks(const SpectrumGrid &grid, int p)
{
    require(p >= 1, "peak count must be >= 1", "spectrum.sources");
    const int T = static_cast<int>(grid.power.rows());
    const int F = static_cast<int>(grid.power.cols());
    std::vector<PeakEstimate> found;
    for (int t = 0; t < T; ++t)
        for (int f = 0; f < F; ++f)
        {
            const Real v = grid.power(t, f);
            bool is_max = true;
            for (int dt = -1; dt <= 1 && is_max; ++dt)
                for (int df = -1; df <= 1; ++df)
                {
                    if (dt == 0 && df == 0)
                        continue;
                    const int tt = t + dt, ff = f + df;
                    if (tt < 0 || tt >= T || ff < 0 || ff >= F)
                        continue;
                    const Real nb = grid.power(tt, ff);
                    const bool earlier = dt < 0 || (dt == 0 && df < 0);
                    if (nb > v || (earlier && nb == v))
                    {
                        is_max = false;
                        break;
                    }
                }
            if (is_max)
                found.push_back({grid.theta_axis[t], grid.f_axis[f], v, PathLabel::Other, t, f});
        }

    std::stable_sort(found.begin(), found.end(),
                     [](const PeakEstimate &a, const PeakEstimate &b) { return a.power > b.power; });
    if (static_cast<int>(found.size()) < p)
    {
        std::ostringstream msg;
        msg << "found " << found.size() << " spectrum peaks, need " << p << ":";
        for (const auto &pk : found)
            msg << " (" << pk.aoa << " deg, " << pk.doppler << " Hz)";
        fail(ErrorCode::PeakNotFound, msg.str(), "spectrum.sources");
    }
    found.resize(p);

    const Real fstep = std::abs(grid.f_step());
    bool have_water = false;
    for (auto &pk : found)
    {
        if (std::abs(pk.doppler) <= fstep * (1.0 + 1e-9))
            pk.label = PathLabel::Los;
        else if (!have_water)
        {
            pk.label = PathLabel::Water;
            have_water = true;
        }
    }
    return found;
}

PeakEstimate refine_peak(const MusicEstimator &music, const PeakEstimate &peak, Real theta_step, Real f_step,
                         int rounds)
{
    constexpr int half = 5;
    PeakEstimate best = peak;
    Real ts = theta_step, fs = f_step;
    for (int r = 0; r < rounds; ++r)
    {
        ts /= half;
        fs /= half;
        const Real tc = best.aoa, fc = best.doppler;
        for (int i = -half; i <= half; ++i)
            for (int j = -half; j <= half; ++j)
            {
                const Real th = tc + i * ts;
                const Real f = fc + j * fs;
                if (std::abs(th) >= 90.0)
                    continue;
                const Real pw = music.power(th, f);
                if (pw > best.power)
                {
                    best.power = pw;
                    best.aoa = th;
                    best.doppler = f;
                }
            }
    }
    return best;
}

} // namespace hydrosense::spectrum
