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

#include "hydrosense/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <sstream>

#include "hydrosense/error.hpp"
#include "hydrosense/io.hpp"
#include "hydrosense/parallel.hpp"
#include "hydrosense/rpo.hpp"

namespace hydrosense::pipeline {

namespace {

std::string num(Real v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string join_path(const std::string &dir, const std::string &name)
{
    return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        fail(ErrorCode::Io, "cannot create output directory " + dir + ": " + ec.message(), "out");
}

spectrum::SmoothingConfig smoothing_for(const SenseConfig &cfg, int m, int n)
{
    auto sm = spectrum::SmoothingConfig::defaults(m, n);
    if (cfg.m_s > 0)
        sm.m_s = cfg.m_s;
    if (cfg.n_s > 0)
        sm.n_s = cfg.n_s;
    return sm;
}

} // namespace

dimred::ReducedSeries reduce_stream(const CaptureSource &source, int n, const ArrayConfig &array,
                                    const SamplingConfig &sampling,
                                    const std::optional<ArrayErrorModel> &calibration, Real theta0_deg,
                                    Real rpo_loading)
{
    require(n >= 1, "no captures to process", "sampling.n");
    if (calibration)
        require(calibration->m() == array.m, "calibration antenna count does not match the data", "calibration");

    dimred::ReducedSeries series;
    series.h.resize(array.m, n);
    series.delta_t_cap = sampling.delta_t_cap;
    series.range_bins.assign(n, 0);
    series.doppler_bins.assign(n, 0);

    parallel_for(n, [&](int i) {
        CsiCapture cap = source(i);
        if (cap.m() != array.m || cap.k() != sampling.k || cap.l() != sampling.l)
            fail(ErrorCode::Format, "capture " + std::to_string(i) + " dimensions differ from the header", "payload");
        if (calibration)
            cap = calib::calibrate(cap, *calibration);
        cap = rpo::compensate(cap, rpo::estimate_rpo(cap, theta0_deg, rpo_loading));
        int rb = 0, db = 0;
        series.h.col(i) = dimred::reduce_capture(cap, &rb, &db);
        series.range_bins[i] = rb;
        series.doppler_bins[i] = db;
    });
    return series;
}

PathSearch locate_paths(const dimred::ReducedSeries &raw, const ArrayConfig &array, Real theta0_deg,
                        const SenseConfig &cfg, std::ostream *log)
{
    require(raw.m() == array.m, "series rows must equal the antenna count", "array.m");
    PathSearch out;
    out.smoothing = smoothing_for(cfg, raw.m(), raw.n());
    if (!out.smoothing.validate(raw.m(), raw.n()) && log)
        *log << "warning: fewer virtual snapshots than the smoothed dimension\n";
    const int m_sub = raw.m() - out.smoothing.m_s + 1;
    const int n_sub = raw.n() - out.smoothing.n_s + 1;
    const auto theta_grid = spectrum::default_theta_grid(cfg.theta_step);
    const auto f_grid = spectrum::default_f_grid(raw.delta_t_cap, cfg.f_points);

    out.series = raw;
    Real prev = 0.0;
    for (int it = 0;; ++it)
    {
        const CMatrix rs = spectrum::smoothed_cov(spectrum::smooth(out.series.h, out.smoothing));
        const spectrum::MusicEstimator music(rs, cfg.sources, m_sub, n_sub, array, raw.delta_t_cap);
        out.grid = music.evaluate(theta_grid, f_grid);
        const auto peaks = spectrum::find_peaks(out.grid, cfg.sources);

        const spectrum::PeakEstimate *water = nullptr;
        out.los.reset();
        for (const auto &p : peaks)
        {
            if (p.label == spectrum::PathLabel::Water)
                water = &p;
            else if (p.label == spectrum::PathLabel::Los && !out.los)
                out.los = p;
        }
        if (!water)
        {
            std::ostringstream msg;
            msg << "no peak with non-zero Doppler among " << peaks.size() << ":";
            for (const auto &p : peaks)
                msg << " (" << p.aoa << " deg, " << p.doppler << " Hz)";
            fail(ErrorCode::PeakNotFound, msg.str(), "spectrum");
        }
        out.water = spectrum::refine_peak(music, *water, out.grid.theta_step(), out.grid.f_step(), cfg.refine_rounds);
        out.iterations = it + 1;
        if (log)
            *log << "iteration " << it << ": water_aoa_deg=" << out.water.aoa
                 << " water_doppler_hz=" << out.water.doppler << "\n";

        if ((it > 0 && std::abs(out.water.aoa - prev) < cfg.rereference_tolerance) ||
            it >= cfg.rereference_iterations)
            break;
        prev = out.water.aoa;
        out.series = rpo::rereference(raw, array, theta0_deg, out.water.aoa);
    }
    return out;
}

SenseResult sense_series(const dimred::ReducedSeries &raw, const ArrayConfig &array, Real theta_inc_deg,
                         Real theta0_deg, const SenseConfig &cfg, std::ostream *log)
{
    PathSearch ps = locate_paths(raw, array, theta0_deg, cfg, log);

    SenseResult r;
    r.theta0 = theta0_deg;
    r.theta1 = ps.water.aoa;
    r.water_doppler = ps.water.doppler;
    r.los = ps.los;
    r.iterations = ps.iterations;
    r.range_bins = raw.range_bins;
    r.doppler_bins = raw.doppler_bins;
    r.times.resize(raw.n());
    for (int i = 0; i < raw.n(); ++i)
        r.times[i] = i * raw.delta_t_cap;
    r.alpha = extract::grazing_from_aoa(theta_inc_deg, r.theta1);

    const auto clean = extract::lowpass(extract::remove_static(ps.series), cfg.cutoff, cfg.filter_order);
    const BeamWeights bw = extract::lcmv_weights(clean, r.theta1, theta0_deg, array, cfg.lcmv_loading);
    r.phase = extract::phase_series(extract::beamform(clean, bw.w));
    if (!r.phase.valid)
        fail(ErrorCode::Unwrap,
             "phase step of " + std::to_string(r.phase.max_step) + " rad between captures exceeds the unwrap limit",
             "phase");
    r.level = extract::water_level(extract::path_delta(r.phase.psi, array.lambda()), r.alpha);
    r.level.lambda_used = array.lambda();
    r.grid = std::move(ps.grid);
    return r;
}

SenseResult sense(const CaptureSource &source, int n, const ArrayConfig &array, const SamplingConfig &sampling,
                  const std::optional<ArrayErrorModel> &calibration, Real theta_inc_deg, Real theta0_deg,
                  const SenseConfig &cfg, std::ostream *log)
{
    const auto series = reduce_stream(source, n, array, sampling, calibration, theta0_deg, cfg.rpo_loading);
    return sense_series(series, array, theta_inc_deg, theta0_deg, cfg, log);
}

std::string truth_csv(const std::vector<TruthRecord> &truth)
{
    std::string s = "capture_index,time_s,water_m,d1_m,aoa_deg\n";
    for (const auto &t : truth)
        s += std::to_string(t.index) + "," + num(t.time) + "," + num(t.water) + "," + num(t.d1) + "," + num(t.aoa) +
             "\n";
    return s;
}

std::string water_level_csv(const SenseResult &r)
{
    std::string s = "capture_index,time_s,delta_w_m,path_delta_m,phase_rad\n";
    for (Eigen::Index i = 0; i < r.level.delta_w.size(); ++i)
        s += std::to_string(i) + "," + num(r.times[i]) + "," + num(r.level.delta_w(i)) + "," +
             num(r.level.path_delta(i)) + "," + num(r.phase.psi(i)) + "\n";
    return s;
}

std::string spectrum_csv(const spectrum::SpectrumGrid &g)
{
    // First row: Doppler axis; each later row: AoA then powers.
    std::string s = "theta_deg\\f_hz";
    for (Real f : g.f_axis)
        s += "," + num(f);
    s += "\n";
    for (std::size_t t = 0; t < g.theta_axis.size(); ++t)
    {
        s += num(g.theta_axis[t]);
        for (Eigen::Index f = 0; f < g.power.cols(); ++f)
            s += "," + num(g.power(static_cast<Eigen::Index>(t), f));
        s += "\n";
    }
    return s;
}

std::string study_csv(const std::vector<scene::AoaVariationPoint> &points)
{
    std::string s = "d_tr_m,delta_aoa_deg\n";
    for (const auto &p : points)
        s += num(p.d_tr) + "," + num(p.delta_aoa) + "\n";
    return s;
}

SimulateOutputs run_simulate(const RunConfig &cfg, const std::string &out_dir, std::ostream *log)
{
    cfg.validate();
    ensure_dir(out_dir);
    const Scenario sc = gen_scenario(cfg.scenario());
    SimulateOutputs out{join_path(out_dir, "csi.bin"), join_path(out_dir, "truth.csv"),
                        join_path(out_dir, "pilot_snapshot.bin")};

    io::CsiWriter writer(out.csi, io::CsiHeader{cfg.array, cfg.sampling});
    const int batch = static_cast<int>(std::max(1u, thread_count()));
    std::vector<CsiCapture> buf(batch);
    for (int start = 0; start < sc.size(); start += batch)
    {
        const int count = std::min(batch, sc.size() - start);
        parallel_for(count, [&](int j) { buf[j] = sc.capture(start + j); });
        for (int j = 0; j < count; ++j)
            writer.write(buf[j]);
    }
    writer.commit();
    io::write_text_atomic(out.truth, truth_csv(sc.truth));

    const Real snap_sigma = noise_sigma_for_snr(cfg.calibration.snapshot_snr_db);
    const auto snap = synth_snapshot(cfg.array, {cfg.pilot_aoa()}, cfg.errors, snap_sigma,
                                     cfg.calibration.snapshot_size, derive_seed(cfg.seed, 0xCA11B8A7ULL));
    io::write_snapshot(out.snapshot, snap, cfg.array);
    if (log)
        *log << "simulated " << sc.size() << " captures, theta0_deg=" << sc.theta0 << "\n";
    return out;
}

SenseResult run_sense(const std::string &csi_path, const RunConfig &cfg, const std::string &calibration_path,
                      bool emit_spectrum, const std::string &out_dir, std::ostream *log)
{
    cfg.validate();
    io::CsiReader reader(csi_path);
    const ArrayConfig array = reader.header().array;
    const SamplingConfig sampling = reader.header().sampling;

    std::optional<ArrayErrorModel> calibration;
    const std::string cal_path = calibration_path.empty() ? cfg.calibration.file : calibration_path;
    if (!cal_path.empty())
        calibration = io::read_calibration(cal_path);

    std::mutex mu;
    const CaptureSource source = [&](int i) {
        std::lock_guard<std::mutex> lock(mu);
        return reader.read(i);
    };
    const Real theta0 = cfg.theta0();
    SenseResult r = sense(source, reader.size(), array, sampling, calibration, cfg.geometry.theta_inc, theta0,
                          cfg.sense, log);

    ensure_dir(out_dir);
    io::write_text_atomic(join_path(out_dir, "water_level.csv"), water_level_csv(r));
    if (emit_spectrum)
        io::write_text_atomic(join_path(out_dir, "spectrum.csv"), spectrum_csv(r.grid));
    return r;
}

calib::ErrorEstimate run_calibrate(const std::string &snapshot_path, Real pilot_aoa_deg, const std::string &out_dir,
                                   std::ostream *log)
{
    ArrayConfig array;
    const BasebandSnapshot snap = io::read_snapshot(snapshot_path, &array);
    const auto est = calib::estimate_errors(snap, pilot_aoa_deg, array);
    ensure_dir(out_dir);
    io::write_calibration(join_path(out_dir, "calibration.json"), est.model, pilot_aoa_deg, est.eigenvalue);
    if (log)
        *log << "calibration eigenvalue=" << est.eigenvalue << "\n";
    return est;
}

std::vector<scene::AoaVariationPoint> run_study(const RunConfig &cfg, const std::string &out_dir)
{
    cfg.validate();
    const auto points = scene::aoa_variation_study(
        cfg.geometry, cfg.study.delta_w, scene::distance_range(cfg.study.d_first, cfg.study.d_last, cfg.study.d_step));
    ensure_dir(out_dir);
    io::write_text_atomic(join_path(out_dir, "aoa_study.csv"), study_csv(points));
    return points;
}

} // namespace hydrosense::pipeline
