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

#include "hydrosense/csi_sim.hpp"

#include <cmath>
#include <string>

#include "hydrosense/error.hpp"

namespace hydrosense {

template <typename Scalar>
Vector<Scalar> steering_vector(const ArrayConfig &array, Real aoa_deg)
{
    if (!(std::abs(aoa_deg) < 90.0))
        fail(ErrorCode::InvalidArgument, "AoA must lie in (-90, 90) deg, got " + std::to_string(aoa_deg), "aoa");
    const Real step = kTwoPi * array.kappa * std::sin(deg2rad(aoa_deg)) / array.lambda();
    Vector<Scalar> a(array.m);
    a(0) = Scalar(1);
    for (int i = 1; i < array.m; ++i)
        a(i) = std::polar<Real>(1.0, -step * i);
    return a;
}

template <typename Scalar>
Vector<Scalar> doppler_vector(Real f_d, Real delta_t, int l)
{
    require(l >= 1, "Doppler vector needs at least one symbol", "l");
    Vector<Scalar> d(l);
    for (int i = 0; i < l; ++i)
        d(i) = std::polar<Real>(1.0, kTwoPi * delta_t * i * f_d);
    return d;
}

template CVector steering_vector<Complex>(const ArrayConfig &, Real);
template CVector doppler_vector<Complex>(Real, Real, int);

Real Rng::uniform()
{
    return static_cast<Real>(engine_() >> 11) * 0x1.0p-53;
}

Real Rng::normal()
{
    if (have_spare_)
    {
        have_spare_ = false;
        return spare_;
    }
    Real u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const Real u2 = uniform();
    const Real r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

RMatrix RpoModel::phases(const SamplingConfig &sampling, Rng &rng) const
{
    const int K = sampling.k;
    const int L = sampling.l;
    RMatrix phi(K, L);
    switch (mode)
    {
    case Mode::IidUniform:
        for (int l = 0; l < L; ++l)
            for (int k = 0; k < K; ++k)
                phi(k, l) = wrap_phase(kTwoPi * rng.uniform() - kPi);
        return phi;
    case Mode::Deterministic:
    case Mode::RandomWalk: break;
    }

    const bool walk = mode == Mode::RandomWalk;
    const Real init = walk ? kTwoPi * rng.uniform() - kPi : init_phase;
    Real cfo_phase = 0.0;
    Real timing = 0.0;
    for (int l = 0; l < L; ++l)
    {
        if (l > 0)
        {
            cfo_phase += kTwoPi * cfo * sampling.delta_t;
            timing += to;
            if (walk)
            {
                cfo_phase += walk_std * rng.normal();
                timing += to * rng.normal();
            }
        }
        for (int k = 0; k < K; ++k)
            phi(k, l) = wrap_phase(init + cfo_phase - kTwoPi * sampling.delta_f * k * timing);
    }
    return phi;
}

Real noise_sigma_for_snr(Real snr_db, Real los_power)
{
    return std::sqrt(los_power / (2.0 * std::pow(10.0, snr_db / 10.0)));
}

CsiCapture synth_capture(const std::vector<PathParams> &paths, const ArrayConfig &array,
                         const SamplingConfig &sampling, const std::optional<RpoModel> &rpo,
                         const std::optional<ArrayErrorModel> &errors, Real noise_sigma, std::uint64_t seed,
                         Real timestamp)
{
    array.validate();
    sampling.validate();
    require(!paths.empty(), "at least one path is required", "paths");
    require(noise_sigma >= 0.0 && std::isfinite(noise_sigma), "noise sigma must be >= 0", "noise_sigma");
    for (const auto &p : paths)
    {
        require(p.delay >= 0.0, "path delay must be >= 0", "paths.delay");
        require(std::abs(p.aoa) < 90.0, "path AoA must lie in (-90, 90) deg", "paths.aoa");
    }
    if (errors)
    {
        errors->validate();
        require(errors->m() == array.m, "array error model size does not match antenna count", "errors");
    }

    const int K = sampling.k;
    const int L = sampling.l;
    const int M = array.m;
    const CVector e = errors ? errors->vector() : CVector(CVector::Ones(M));

    // Per path: frequency response over k, and the (l, m) factor including gain and array error.
    std::vector<CVector> freq(paths.size());
    std::vector<CMatrix> lm(paths.size());
    for (std::size_t p = 0; p < paths.size(); ++p)
    {
        freq[p].resize(K);
        for (int k = 0; k < K; ++k)
        {
            const Real fk = array.fc + sampling.delta_f * k;
            // Reduce fk*tau before scaling by 2 pi; fc*tau is ~1e3 cycles.
            const Real cycles = fk * paths[p].delay;
            freq[p](k) = std::polar<Real>(1.0, -kTwoPi * (cycles - std::floor(cycles)));
        }
        const CVector d = doppler_vector(paths[p].doppler, sampling.delta_t, L);
        const CVector a = steering_vector(array, paths[p].aoa);
        lm[p] = paths[p].gain * d * a.cwiseProduct(e).transpose();
    }

    Rng rng(seed);
    CMatrix rpo_factor;
    if (rpo)
        rpo_factor = rpo->phases(sampling, rng).unaryExpr([](Real x) { return std::polar<Real>(1.0, x); });

    CsiCapture cap(array, sampling, timestamp);
    for (int m = 0; m < M; ++m)
    {
        for (int l = 0; l < L; ++l)
        {
            auto col = cap.data.col(l + L * m);
            for (std::size_t p = 0; p < paths.size(); ++p)
                col += lm[p](l, m) * freq[p];
            if (rpo)
                col = col.cwiseProduct(rpo_factor.col(l));
        }
    }
    if (noise_sigma > 0.0)
    {
        Complex *ptr = cap.data.data();
        const Eigen::Index total = cap.data.size();
        for (Eigen::Index i = 0; i < total; ++i)
            ptr[i] += rng.cnormal(noise_sigma);
    }
    return cap;
}

RMatrix injected_rpo(const RpoModel &rpo, const SamplingConfig &sampling, std::uint64_t seed)
{
    Rng rng(seed);
    return rpo.phases(sampling, rng);
}

std::vector<Real> linear_ramp(Real w0, Real delta, int n)
{
    require(n >= 1, "ramp needs at least one capture", "n");
    std::vector<Real> w(n);
    for (int i = 0; i < n; ++i)
        w[i] = n == 1 ? w0 : w0 + delta * static_cast<Real>(i) / static_cast<Real>(n - 1);
    return w;
}

Scenario gen_scenario(const ScenarioConfig &cfg)
{
    cfg.geometry.validate();
    cfg.array.validate();
    cfg.sampling.validate();
    if (static_cast<int>(cfg.water.size()) != cfg.sampling.n)
        fail(ErrorCode::InvalidArgument,
             "water trajectory has " + std::to_string(cfg.water.size()) + " samples, expected n = " +
                 std::to_string(cfg.sampling.n),
             "water");

    Scenario sc;
    sc.config = cfg;
    const int n = cfg.sampling.n;
    const Real lambda = cfg.array.lambda();
    const scene::PathGeometry los = scene::los_path(cfg.geometry);
    sc.theta0 = los.aoa;

    std::vector<scene::PathGeometry> refl(n);
    for (int i = 0; i < n; ++i)
        refl[i] = scene::reflected_path(cfg.geometry, cfg.water[i]);

    sc.paths.resize(n);
    sc.truth.resize(n);
    for (int i = 0; i < n; ++i)
    {
        // Within-capture Doppler from the local path-length rate.
        Real rate = 0.0;
        if (n > 1)
        {
            const int lo = std::max(0, i - 1);
            const int hi = std::min(n - 1, i + 1);
            rate = (refl[hi].length - refl[lo].length) / ((hi - lo) * cfg.sampling.delta_t_cap);
        }
        PathParams p0{cfg.los_gain, los.length / kSpeedOfLight, 0.0, los.aoa};
        PathParams p1{cfg.reflected_gain, refl[i].length / kSpeedOfLight, -rate / lambda, refl[i].aoa};
        sc.paths[i] = {p0, p1};
        sc.paths[i].insert(sc.paths[i].end(), cfg.extra_paths.begin(), cfg.extra_paths.end());

        TruthRecord &t = sc.truth[i];
        t.index = i;
        t.time = i * cfg.sampling.delta_t_cap;
        t.water = cfg.water[i];
        t.d1 = refl[i].length;
        t.aoa = refl[i].aoa;
        t.alpha = refl[i].reflection_angle;
    }
    return sc;
}

CsiCapture Scenario::capture(int i) const
{
    require(i >= 0 && i < size(), "capture index out of range", "index");
    return synth_capture(paths[i], config.array, config.sampling, config.rpo, config.errors, config.noise_sigma,
                         derive_seed(config.seed, static_cast<std::uint64_t>(i)), truth[i].time);
}

void BasebandSnapshot::validate() const
{
    require(data.rows() >= 1, "snapshot has no antennas", "snapshot");
    require(data.cols() > data.rows(), "snapshot needs more samples than antennas (G > M)", "snapshot");
    require(sources >= 1 && sources < data.rows(), "source count must be in [1, M)", "snapshot.sources");
    require(data.allFinite(), "snapshot contains non-finite entries", "snapshot");
}

BasebandSnapshot synth_snapshot(const ArrayConfig &array, const std::vector<Real> &aoas,
                                const std::optional<ArrayErrorModel> &errors, Real noise_sigma, int g,
                                std::uint64_t seed)
{
    array.validate();
    require(!aoas.empty(), "at least one source is required", "aoas");
    require(g > array.m, "snapshot length must exceed antenna count", "g");
    const int M = array.m;
    const int S = static_cast<int>(aoas.size());

    CMatrix A(M, S);
    for (int s = 0; s < S; ++s)
        A.col(s) = steering_vector(array, aoas[s]);
    if (errors)
    {
        require(errors->m() == M, "array error model size does not match antenna count", "errors");
        A = errors->vector().asDiagonal() * A;
    }

    Rng rng(seed);
    CMatrix src(S, g);
    const Real unit = std::sqrt(0.5);
    for (int j = 0; j < g; ++j)
        for (int s = 0; s < S; ++s)
            src(s, j) = rng.cnormal(unit);

    BasebandSnapshot snap;
    snap.sources = S;
    snap.data = A * src;
    if (noise_sigma > 0.0)
        for (int j = 0; j < g; ++j)
            for (int m = 0; m < M; ++m)
                snap.data(m, j) += rng.cnormal(noise_sigma);
    return snap;
}

} // namespace hydrosense
