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

#include "hydrosense/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "hydrosense/error.hpp"
#include "hydrosense/spectrum.hpp"

namespace hydrosense::pipeline {

namespace {

struct Entry
{
    std::string field; // section.key
    std::string value;
    int line = 0;
};

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s)
{
    for (auto &c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

class Parser
{
public:
    Parser(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void bad(const Entry &e, const std::string &what) const
    {
        fail(ErrorCode::Config, source_ + ":" + std::to_string(e.line) + ": " + e.field + ": " + what, e.field);
    }

    Real real(const Entry &e) const
    {
        const char *s = e.value.c_str();
        char *end = nullptr;
        errno = 0;
        const Real v = std::strtod(s, &end);
        if (end == s || *end != '\0' || errno == ERANGE || !std::isfinite(v))
            bad(e, "expected a number, got '" + e.value + "'");
        return v;
    }

    long long integer(const Entry &e) const
    {
        const char *s = e.value.c_str();
        char *end = nullptr;
        errno = 0;
        const long long v = std::strtoll(s, &end, 10);
        if (end == s || *end != '\0' || errno == ERANGE)
            bad(e, "expected an integer, got '" + e.value + "'");
        return v;
    }

    int int32(const Entry &e) const
    {
        const long long v = integer(e);
        if (v < -2147483647LL || v > 2147483647LL)
            bad(e, "integer out of range");
        return static_cast<int>(v);
    }

    std::vector<Real> reals(const Entry &e) const
    {
        std::vector<Real> out;
        std::stringstream ss(e.value);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            Entry sub = e;
            sub.value = trim(item);
            out.push_back(real(sub));
        }
        if (out.empty())
            bad(e, "expected a comma-separated list");
        return out;
    }

    bool is_none(const Entry &e) const { return lower(e.value) == "none" || lower(e.value) == "off"; }

private:
    std::string source_;
};

} // namespace

Real RunConfig::theta0() const
{
    return sense.theta0 ? *sense.theta0 : scene::los_aoa(geometry);
}

Real RunConfig::pilot_aoa() const
{
    return calibration.pilot_aoa ? *calibration.pilot_aoa : theta0();
}

Real RunConfig::noise_sigma() const
{
    return snr_db ? noise_sigma_for_snr(*snr_db, std::norm(los_gain)) : 0.0;
}

ScenarioConfig RunConfig::scenario() const
{
    ScenarioConfig sc;
    sc.geometry = geometry;
    sc.water = linear_ramp(geometry.h_w0 + water_start, water_delta, sampling.n);
    sc.array = array;
    sc.sampling = sampling;
    sc.rpo = rpo;
    sc.errors = errors;
    sc.noise_sigma = noise_sigma();
    sc.los_gain = los_gain;
    sc.reflected_gain = reflected_gain;
    sc.seed = seed;
    return sc;
}

void RunConfig::validate() const
{
    try
    {
        geometry.validate();
        array.validate();
        sampling.validate();
        if (errors)
        {
            errors->validate();
            require(errors->m() == array.m, "error model length must equal array.m", "errors.gains");
        }
        require(std::abs(los_gain) > 0.0, "LOS gain must be non-zero", "paths.los_gain");
        scene::reflected_path(geometry, geometry.h_w0 + water_start);
        scene::reflected_path(geometry, geometry.h_w0 + water_start + water_delta);
        const Real t0 = theta0();
        require(std::abs(t0) < 90.0, "LOS AoA must lie in (-90, 90)", "sense.theta0");
        require(sense.sources >= 1, "source count must be >= 1", "sense.sources");
        require(sense.theta_step > 0.0 && sense.theta_step <= 10.0, "theta step must lie in (0, 10]",
                "sense.theta_step");
        require(sense.f_points >= 3, "Doppler grid needs at least 3 points", "sense.f_points");
        require(sense.refine_rounds >= 0, "refine rounds must be >= 0", "sense.refine_rounds");
        require(sense.rpo_loading >= 0.0, "loading must be >= 0", "sense.rpo_loading");
        require(sense.lcmv_loading >= 0.0, "loading must be >= 0", "sense.lcmv_loading");
        require(sense.rereference_iterations >= 0, "iteration count must be >= 0", "sense.rereference_iterations");
        require(sense.rereference_tolerance > 0.0, "tolerance must be positive", "sense.rereference_tolerance");
        extract::butterworth_lowpass(sense.filter_order, sense.cutoff);
        if (sense.m_s != 0 || sense.n_s != 0)
        {
            const auto def = spectrum::SmoothingConfig::defaults(array.m, sampling.n);
            spectrum::SmoothingConfig sm{sense.m_s ? sense.m_s : def.m_s, sense.n_s ? sense.n_s : def.n_s};
            sm.validate(array.m, sampling.n);
        }
        require(calibration.snapshot_size >= 1, "snapshot size must be >= 1", "calibration.snapshot_size");
        require(study.d_step > 0.0 && study.d_first > 0.0 && study.d_last >= study.d_first,
                "study distances need 0 < d_first <= d_last and d_step > 0", "study");
        require(study.delta_w >= 0.0, "study delta_w must be >= 0", "study.delta_w");
    }
    catch (const Error &e)
    {
        if (e.code() == ErrorCode::InvalidArgument)
            fail(ErrorCode::Config, e.what(), e.field());
        throw;
    }
}

RunConfig parse_config(std::istream &in, const std::string &source)
{
    static const std::set<std::string> sections = {"run",   "geometry", "array",  "sampling",    "water", "paths",
                                                   "noise", "rpo",      "errors", "calibration", "sense", "study"};
    Parser p(source);
    std::vector<Entry> entries;
    std::set<std::string> seen;
    std::string section, raw;
    int lineno = 0;
    while (std::getline(in, raw))
    {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']')
                fail(ErrorCode::Config, source + ":" + std::to_string(lineno) + ": malformed section header", "config");
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (!sections.count(section))
                fail(ErrorCode::Config, source + ":" + std::to_string(lineno) + ": unknown section [" + section + "]",
                     section);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::Config, source + ":" + std::to_string(lineno) + ": expected key = value", "config");
        if (section.empty())
            fail(ErrorCode::Config, source + ":" + std::to_string(lineno) + ": key outside a section", "config");
        Entry e{section + "." + lower(trim(line.substr(0, eq))), trim(line.substr(eq + 1)), lineno};
        if (!seen.insert(e.field).second)
            p.bad(e, "duplicate key");
        entries.push_back(std::move(e));
    }

    RunConfig cfg;
    bool kappa_set = false;
    std::vector<Real> err_gains, err_phases;
    std::optional<Real> err_rco;
    std::optional<std::vector<int>> err_rco_ants;
    bool errors_enabled = false;

    for (const auto &e : entries)
        if (e.field == "geometry.preset")
        {
            const std::string v = lower(e.value);
            if (v == "setup1")
                cfg.geometry = scene::Geometry::setup1();
            else if (v == "setup2")
                cfg.geometry = scene::Geometry::setup2();
            else if (v == "setup3")
                cfg.geometry = scene::Geometry::setup3();
            else
                p.bad(e, "unknown preset '" + e.value + "' (setup1, setup2, setup3)");
        }

    RpoModel rpo_model;
    bool rpo_enabled = true;
    Real refl_mag = std::abs(cfg.reflected_gain), refl_phase = rad2deg(std::arg(cfg.reflected_gain));

    using Setter = std::function<void(const Entry &)>;
    const std::map<std::string, Setter> setters = {
        {"run.seed", [&](const Entry &e) {
             const long long v = p.integer(e);
             if (v < 0)
                 p.bad(e, "seed must be non-negative");
             cfg.seed = static_cast<std::uint64_t>(v);
         }},
        {"geometry.preset", [](const Entry &) {}},
        {"geometry.d_tr", [&](const Entry &e) { cfg.geometry.d_tr = p.real(e); }},
        {"geometry.d_rw", [&](const Entry &e) { cfg.geometry.d_rw = p.real(e); }},
        {"geometry.d_tw", [&](const Entry &e) { cfg.geometry.d_tw = p.real(e); }},
        {"geometry.h_t", [&](const Entry &e) { cfg.geometry.h_t = p.real(e); }},
        {"geometry.h_r", [&](const Entry &e) { cfg.geometry.h_r = p.real(e); }},
        {"geometry.h_w0", [&](const Entry &e) { cfg.geometry.h_w0 = p.real(e); }},
        {"geometry.theta_inc", [&](const Entry &e) { cfg.geometry.theta_inc = p.real(e); }},
        {"array.m", [&](const Entry &e) { cfg.array.m = p.int32(e); }},
        {"array.fc", [&](const Entry &e) { cfg.array.fc = p.real(e); }},
        {"array.kappa", [&](const Entry &e) {
             cfg.array.kappa = p.real(e);
             kappa_set = true;
         }},
        {"sampling.k", [&](const Entry &e) { cfg.sampling.k = p.int32(e); }},
        {"sampling.l", [&](const Entry &e) { cfg.sampling.l = p.int32(e); }},
        {"sampling.n", [&](const Entry &e) { cfg.sampling.n = p.int32(e); }},
        {"sampling.delta_f", [&](const Entry &e) { cfg.sampling.delta_f = p.real(e); }},
        {"sampling.delta_t", [&](const Entry &e) { cfg.sampling.delta_t = p.real(e); }},
        {"sampling.delta_t_cap", [&](const Entry &e) { cfg.sampling.delta_t_cap = p.real(e); }},
        {"water.start", [&](const Entry &e) { cfg.water_start = p.real(e); }},
        {"water.delta", [&](const Entry &e) { cfg.water_delta = p.real(e); }},
        {"paths.los_gain", [&](const Entry &e) { cfg.los_gain = p.real(e); }},
        {"paths.reflected_gain", [&](const Entry &e) { refl_mag = p.real(e); }},
        {"paths.reflected_phase_deg", [&](const Entry &e) { refl_phase = p.real(e); }},
        {"noise.snr_db", [&](const Entry &e) {
             if (p.is_none(e))
                 cfg.snr_db.reset();
             else
                 cfg.snr_db = p.real(e);
         }},
        {"rpo.mode", [&](const Entry &e) {
             const std::string v = lower(e.value);
             rpo_enabled = true;
             if (v == "none" || v == "off")
                 rpo_enabled = false;
             else if (v == "deterministic")
                 rpo_model.mode = RpoModel::Mode::Deterministic;
             else if (v == "random_walk")
                 rpo_model.mode = RpoModel::Mode::RandomWalk;
             else if (v == "iid")
                 rpo_model.mode = RpoModel::Mode::IidUniform;
             else
                 p.bad(e, "unknown mode '" + e.value + "' (none, deterministic, random_walk, iid)");
         }},
        {"rpo.cfo", [&](const Entry &e) { rpo_model.cfo = p.real(e); }},
        {"rpo.to", [&](const Entry &e) { rpo_model.to = p.real(e); }},
        {"rpo.init_phase_deg", [&](const Entry &e) { rpo_model.init_phase = deg2rad(p.real(e)); }},
        {"rpo.walk_std", [&](const Entry &e) { rpo_model.walk_std = p.real(e); }},
        {"errors.gains", [&](const Entry &e) {
             err_gains = p.reals(e);
             errors_enabled = true;
         }},
        {"errors.phases_deg", [&](const Entry &e) {
             err_phases = p.reals(e);
             errors_enabled = true;
         }},
        {"errors.rco_deg", [&](const Entry &e) {
             err_rco = p.real(e);
             errors_enabled = true;
         }},
        {"errors.rco_antennas", [&](const Entry &e) {
             std::vector<int> ants;
             for (Real v : p.reals(e))
             {
                 if (v != std::round(v))
                     p.bad(e, "antenna indices must be integers");
                 ants.push_back(static_cast<int>(v));
             }
             err_rco_ants = ants;
             errors_enabled = true;
         }},
        {"sense.theta0", [&](const Entry &e) { cfg.sense.theta0 = p.real(e); }},
        {"sense.sources", [&](const Entry &e) { cfg.sense.sources = p.int32(e); }},
        {"sense.m_s", [&](const Entry &e) { cfg.sense.m_s = p.int32(e); }},
        {"sense.n_s", [&](const Entry &e) { cfg.sense.n_s = p.int32(e); }},
        {"sense.theta_step", [&](const Entry &e) { cfg.sense.theta_step = p.real(e); }},
        {"sense.f_points", [&](const Entry &e) { cfg.sense.f_points = p.int32(e); }},
        {"sense.refine_rounds", [&](const Entry &e) { cfg.sense.refine_rounds = p.int32(e); }},
        {"sense.rpo_loading", [&](const Entry &e) { cfg.sense.rpo_loading = p.real(e); }},
        {"sense.lcmv_loading", [&](const Entry &e) { cfg.sense.lcmv_loading = p.real(e); }},
        {"sense.rereference_iterations", [&](const Entry &e) { cfg.sense.rereference_iterations = p.int32(e); }},
        {"sense.rereference_tolerance", [&](const Entry &e) { cfg.sense.rereference_tolerance = p.real(e); }},
        {"sense.cutoff", [&](const Entry &e) { cfg.sense.cutoff = p.real(e); }},
        {"sense.filter_order", [&](const Entry &e) { cfg.sense.filter_order = p.int32(e); }},
        {"calibration.file", [&](const Entry &e) { cfg.calibration.file = e.value; }},
        {"calibration.pilot_aoa", [&](const Entry &e) { cfg.calibration.pilot_aoa = p.real(e); }},
        {"calibration.snapshot_size", [&](const Entry &e) { cfg.calibration.snapshot_size = p.int32(e); }},
        {"calibration.snapshot_snr_db", [&](const Entry &e) { cfg.calibration.snapshot_snr_db = p.real(e); }},
        {"study.delta_w", [&](const Entry &e) { cfg.study.delta_w = p.real(e); }},
        {"study.d_first", [&](const Entry &e) { cfg.study.d_first = p.real(e); }},
        {"study.d_last", [&](const Entry &e) { cfg.study.d_last = p.real(e); }},
        {"study.d_step", [&](const Entry &e) { cfg.study.d_step = p.real(e); }},
    };

    for (const auto &e : entries)
    {
        const auto it = setters.find(e.field);
        if (it == setters.end())
            p.bad(e, "unknown key");
        it->second(e);
    }

    if (!kappa_set && cfg.array.fc > 0.0)
        cfg.array.kappa = 0.5 * cfg.array.lambda();
    cfg.reflected_gain = std::polar(refl_mag, deg2rad(refl_phase));
    if (rpo_enabled)
        cfg.rpo = rpo_model;
    else
        cfg.rpo.reset();

    if (errors_enabled)
    {
        const int m = cfg.array.m;
        if (m < 1)
            fail(ErrorCode::Config, source + ": array.m must be set before errors apply", "array.m");
        ArrayErrorModel em = ArrayErrorModel::identity(m);
        if (!err_gains.empty())
        {
            if (static_cast<int>(err_gains.size()) != m)
                fail(ErrorCode::Config, source + ": errors.gains needs " + std::to_string(m) + " values",
                     "errors.gains");
            em.gains = Eigen::Map<const RVector>(err_gains.data(), m);
        }
        if (!err_phases.empty())
        {
            if (static_cast<int>(err_phases.size()) != m)
                fail(ErrorCode::Config, source + ": errors.phases_deg needs " + std::to_string(m) + " values",
                     "errors.phases_deg");
            for (int i = 0; i < m; ++i)
                em.phases(i) = deg2rad(err_phases[i]);
        }
        em.rco = err_rco ? deg2rad(*err_rco) : 0.0;
        em.rco_antennas = err_rco_ants ? *err_rco_ants : ArrayErrorModel::default_rco_subset(m);
        cfg.errors = em;
    }

    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::Io, "cannot open config " + path, "config");
    return parse_config(in, path);
}

} // namespace hydrosense::pipeline
