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

// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "hydrosense/beam.hpp"
#include "hydrosense/calib.hpp"
#include "hydrosense/config.hpp"
#include "hydrosense/csi_sim.hpp"
#include "hydrosense/dimred.hpp"
#include "hydrosense/error.hpp"
#include "hydrosense/extract.hpp"
#include "hydrosense/io.hpp"
#include "hydrosense/pipeline.hpp"
#include "hydrosense/rpo.hpp"
#include "hydrosense/scene.hpp"
#include "hydrosense/spectrum.hpp"

using namespace hydrosense;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const char *name, bool ok, const std::string &detail)
{
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++g_failures;
}

std::string fmt(const char *f, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

pipeline::RunConfig load(const std::string &name)
{
    return pipeline::load_config(std::string(HYDROSENSE_CONFIG_DIR) + "/" + name);
}

/// Simulates one run in memory and senses it with a calibration estimated
/// from the run's own pilot snapshot.
struct E2eRun
{
    pipeline::SenseResult result;
    Scenario scenario;
};

E2eRun run_e2e(const pipeline::RunConfig &cfg)
{
    E2eRun run;
    run.scenario = gen_scenario(cfg.scenario());
    const auto snap = synth_snapshot(cfg.array, {cfg.pilot_aoa()}, cfg.errors,
                                     noise_sigma_for_snr(cfg.calibration.snapshot_snr_db),
                                     cfg.calibration.snapshot_size, derive_seed(cfg.seed, 0xCA11B8A7ULL));
    const auto est = calib::estimate_errors(snap, cfg.pilot_aoa(), cfg.array);
    const Scenario &sc = run.scenario;
    run.result = pipeline::sense([&sc](int i) { return sc.capture(i); }, sc.size(), cfg.array, cfg.sampling,
                                 est.model, cfg.geometry.theta_inc, cfg.theta0(), cfg.sense);
    return run;
}

void e2e_setup1()
{
    const auto t0 = std::chrono::steady_clock::now();
    Real mean_sum = 0.0, worst = 0.0, worst_mean = 0.0;
    for (int s = 0; s < 10; ++s)
    {
        auto cfg = load("setup1.cfg");
        cfg.seed = 1000 + s;
        const auto run = run_e2e(cfg);
        const auto &truth = run.scenario.truth;
        Real mean = 0.0;
        for (std::size_t i = 0; i < truth.size(); ++i)
        {
            const Real err = std::abs(run.result.level.delta_w(i) - (truth[i].water - truth[0].water));
            mean += err;
            worst = std::max(worst, err);
        }
        mean /= static_cast<Real>(truth.size());
        mean_sum += mean;
        worst_mean = std::max(worst_mean, mean);
    }
    const Real secs = std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0).count();
    report("E2E-1", worst_mean <= 0.02 && worst <= 0.06 && secs <= 300.0,
           fmt("setup 1, 10 seeds: mean err %.4f m (worst seed %.4f m, limit 0.02), max err %.4f m (limit 0.06), "
               "%.0f s",
               mean_sum / 10, worst_mean, worst, secs));
}

void e2e_setup2()
{
    int positive = 0;
    Real min_f = 1e9;
    for (int s = 0; s < 10; ++s)
    {
        auto cfg = load("setup2.cfg");
        cfg.seed = 2000 + s;
        const auto run = run_e2e(cfg);
        positive += run.result.water_doppler > 0.0;
        min_f = std::min(min_f, run.result.water_doppler);
    }
    report("E2E-2", positive == 10, fmt("setup 2 rising water: positive Doppler in %.0f/10 seeds (min %.3g Hz)",
                                        positive, min_f));
}

/// Checks the range-Doppler cell of a capture: strongest Doppler bin must be
/// 0 and the strongest bin outside the LOS neighbourhood within one bin of
/// the mover.
bool doppler_ok(const CsiCapture &cap, int mover_bin)
{
    const auto rr = dimred::range_reduce(cap);
    const auto dr = dimred::doppler_reduce(rr.values, cap.l(), cap.m());
    if (dr.bin != 0)
        return false;
    const int L = cap.l();
    int best = -1;
    for (int b = 2; b < L - 1; ++b)
        if (best < 0 || dr.bin_power(b) > dr.bin_power(best))
            best = b;
    return std::abs(best - mover_bin) <= 1;
}

void rpo_restoration()
{
    const ArrayConfig array = ArrayConfig::half_wavelength(4, 2659.8e6);
    SamplingConfig s;
    s.k = 16;
    s.l = 200;
    const int mover_bin = static_cast<int>(std::lround(50.0 * s.l * s.delta_t));
    RpoModel model;
    model.cfo = 37.0;
    model.to = 1e-9;
    model.walk_std = 0.05;
    int comp_ok = 0, raw_fail = 0;
    for (int t = 0; t < 10; ++t)
    {
        const std::vector<PathParams> paths = {{{1.0, 0.0}, 2e-7, 0.0, 47.5},
                                               {std::polar(0.5, 0.7 * t), 2.05e-7, 50.0, 10.0}};
        const auto cap = synth_capture(paths, array, s, model, std::nullopt, noise_sigma_for_snr(20.0), 500 + t);
        comp_ok += doppler_ok(rpo::compensate(cap, rpo::estimate_rpo(cap, 47.5)), mover_bin);
        raw_fail += !doppler_ok(cap, mover_bin);
    }
    report("RPO restoration", comp_ok == 10 && raw_fail >= 9,
           fmt("compensated LOS at bin 0 with 50 Hz mover within 1 bin in %.0f/10 seeds; uncompensated fails in "
               "%.0f/10 (need >= 9)",
               comp_ok, raw_fail));
}

void music_localization()
{
    const ArrayConfig array = ArrayConfig::half_wavelength(4, 2659.8e6);
    const Real dt = 90.0, theta0 = 47.5;
    const int N = 180;
    const auto tgrid = spectrum::default_theta_grid();
    const auto fgrid = spectrum::default_f_grid(dt);
    std::mt19937_64 gen(42);
    std::normal_distribution<Real> nd(0.0, noise_sigma_for_snr(20.0));
    int ok = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t)
    {
        Real theta1;
        do
            theta1 = tgrid[std::uniform_int_distribution<std::size_t>(0, tgrid.size() - 1)(gen)];
        while (std::abs(theta1) > 70.0 || std::abs(theta1 - theta0) < 5.0);
        int fi;
        do
            fi = std::uniform_int_distribution<int>(0, static_cast<int>(fgrid.size()) - 1)(gen);
        while (std::abs(fi - 100) < 5);
        const Real f1 = fgrid[fi];
        const CVector a0 = steering_vector(array, theta0), a1 = steering_vector(array, theta1);
        const Complex g1 = std::polar<Real>(0.5, std::uniform_real_distribution<Real>(-kPi, kPi)(gen));
        CMatrix h(4, N);
        for (int n = 0; n < N; ++n)
        {
            h.col(n) = a0 + g1 * a1 * std::polar<Real>(1.0, kTwoPi * f1 * n * dt);
            for (int m = 0; m < 4; ++m)
                h(m, n) += Complex(nd(gen), nd(gen));
        }
        const auto sm = spectrum::SmoothingConfig::defaults(4, N);
        const CMatrix rs = spectrum::smoothed_cov(spectrum::smooth(h, sm));
        const auto grid = spectrum::music2d(rs, 2, tgrid, fgrid, 4 - sm.m_s + 1, N - sm.n_s + 1, array, dt);
        bool los_ok = false, water_ok = false;
        try
        {
            for (const auto &p : spectrum::find_peaks(grid, 2))
            {
                const bool near0 = std::abs(p.aoa - theta0) <= grid.theta_step() + 1e-9 &&
                                   std::abs(p.doppler) <= grid.f_step() + 1e-12;
                const bool near1 = std::abs(p.aoa - theta1) <= grid.theta_step() + 1e-9 &&
                                   std::abs(p.doppler - f1) <= grid.f_step() + 1e-12;
                los_ok |= near0;
                water_ok |= near1;
            }
        }
        catch (const Error &)
        {
        }
        ok += los_ok && water_ok;
    }
    report("MUSIC localization", ok >= 48,
           fmt("%.0f/%.0f grid-aligned trials at 20 dB within one grid step (need 95%%)", ok, trials));
}

void constraint_invariants()
{
    const ArrayConfig array = ArrayConfig::half_wavelength(4, 2659.8e6);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<Real> ang(-80.0, 80.0);
    Real mvdr = 0.0, lcmv = 0.0;
    for (int t = 0; t < 100; ++t)
    {
        const CMatrix x = CMatrix::Random(4, 3 + t % 20);
        const Real th = ang(gen);
        const CVector a0 = steering_vector(array, th);
        const CVector w = mvdr_solve(loaded_covariance(x, relative_loading(x, 1e-3)), a0);
        mvdr = std::max(mvdr, std::abs(w.dot(a0) - 1.0));

        Real th1;
        do
            th1 = ang(gen);
        while (std::abs(th1 - th) < 5.0);
        dimred::ReducedSeries series;
        series.h = CMatrix::Random(4, 30);
        series.delta_t_cap = 90.0;
        lcmv = std::max(lcmv, extract::lcmv_weights(series, th1, th, array).max_residual(array));
    }
    bool shapes = true;
    for (int t = 0; t < 20; ++t)
    {
        const int M = std::uniform_int_distribution<int>(2, 8)(gen);
        const int N = std::uniform_int_distribution<int>(2, 200)(gen);
        const spectrum::SmoothingConfig sm{std::uniform_int_distribution<int>(1, M)(gen),
                                           std::uniform_int_distribution<int>(1, N)(gen)};
        const CMatrix hs = spectrum::smooth(CMatrix::Random(M, N), sm);
        shapes &= hs.rows() == (M - sm.m_s + 1) * (N - sm.n_s + 1) && hs.cols() == sm.m_s * sm.n_s;
    }
    report("Constraint invariants", mvdr < 1e-9 && lcmv < 1e-9 && shapes,
           fmt("max MVDR |w^H a0 - 1| = %.2g, max LCMV residual = %.2g (limit 1e-9), 20 smoothing shapes ", mvdr,
               lcmv) +
               (shapes ? "exact" : "WRONG"));
}

void calibration_recovery()
{
    const auto cfg = load("setup1.cfg");
    const CVector truth = cfg.errors->vector();
    Real gain_err = 0.0, phase_err = 0.0;
    for (int s = 0; s < 10; ++s)
    {
        const auto snap = synth_snapshot(cfg.array, {cfg.pilot_aoa()}, cfg.errors, noise_sigma_for_snr(30.0), 10000,
                                         300 + s);
        const auto est = calib::estimate_errors(snap, cfg.pilot_aoa(), cfg.array);
        for (int m = 0; m < cfg.array.m; ++m)
        {
            gain_err = std::max(gain_err, std::abs(std::abs(est.e(m)) / std::abs(truth(m)) - 1.0));
            phase_err = std::max(phase_err, std::abs(rad2deg(std::arg(est.e(m) * std::conj(truth(m))))));
        }
    }
    report("Calibration recovery", gain_err <= 0.01 && phase_err <= 0.5,
           fmt("10 seeds at 30 dB, G=10000: max gain err %.3g%% (limit 1%%), max phase err %.3g deg (limit 0.5)",
               100 * gain_err, phase_err));
}

void aoa_study()
{
    const auto pts = scene::aoa_variation_study(scene::Geometry::setup1(), 1.0, scene::distance_range(100, 1000, 1));
    bool monotone = true;
    Real at423 = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        if (i > 0)
            monotone &= pts[i].delta_aoa <= pts[i - 1].delta_aoa;
        if (pts[i].d_tr == 423.0)
            at423 = pts[i].delta_aoa;
    }
    report("AoA variation study", monotone && at423 >= 0.05 && at423 <= 0.35,
           std::string(monotone ? "monotone non-increasing" : "NOT monotone") +
               fmt(" over 100-1000 m; 1 m rise at 423 m changes the AoA by %.3f deg (range [0.05, 0.35])", at423));
}

void unit_conversions()
{
    RVector d(1);
    d << -1.0;
    const Real w = extract::water_level(d, 30.0).delta_w(0);
    const Real lambda = kSpeedOfLight / 2659.8e6;
    RVector psi(1);
    psi << -kTwoPi;
    const Real pd = extract::path_delta(psi, lambda)(0);
    report("Unit conversions", w == 1.0 && pd == lambda,
           fmt("water_level(-1 m, 30 deg) = %.17g, path_delta(-2pi) - lambda = %.3g", w, pd - lambda));
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void determinism()
{
    const fs::path dir = fs::temp_directory_path() / "hydrosense_acceptance";
    fs::remove_all(dir);
    auto cfg = load("setup1.cfg");
    cfg.sampling.k = 32;
    cfg.sampling.l = 32;
    cfg.sampling.n = 20;
    cfg.calibration.snapshot_size = 500;
    const auto a = pipeline::run_simulate(cfg, (dir / "a").string());
    const auto b = pipeline::run_simulate(cfg, (dir / "b").string());
    const bool same = slurp(a.csi) == slurp(b.csi) && slurp(a.truth) == slurp(b.truth) &&
                      slurp(a.snapshot) == slurp(b.snapshot);

    // read then write must reproduce the file byte for byte
    io::CsiReader reader(a.csi);
    const fs::path copy = dir / "copy.bin";
    {
        io::CsiWriter writer(copy.string(), reader.header());
        for (int i = 0; i < reader.size(); ++i)
            writer.write(reader.read(i));
        writer.commit();
    }
    const bool round_trip = slurp(copy) == slurp(a.csi);
    const auto bytes = fs::file_size(a.csi);
    fs::remove_all(dir);
    report("Determinism and round trip", same && round_trip,
           std::string("simulate outputs ") + (same ? "byte-identical" : "DIFFER") + " per seed; CSI file (" +
               std::to_string(bytes) + " bytes) read/write " + (round_trip ? "identity" : "NOT identity"));
}

} // namespace

int main()
{
    const std::pair<const char *, void (*)()> checks[] = {
        {"E2E-1", e2e_setup1},
        {"E2E-2", e2e_setup2},
        {"RPO restoration", rpo_restoration},
        {"MUSIC localization", music_localization},
        {"Constraint invariants", constraint_invariants},
        {"Calibration recovery", calibration_recovery},
        {"AoA variation study", aoa_study},
        {"Unit conversions", unit_conversions},
        {"Determinism and round trip", determinism},
    };
    for (const auto &[name, fn] : checks)
    {
        try
        {
            fn();
        }
        catch (const std::exception &e)
        {
            report(name, false, std::string("exception: ") + e.what());
        }
    }
    std::printf("%d criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
