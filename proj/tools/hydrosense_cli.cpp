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

// hydrosense command-line front end.
//
// Exit status: 0 success, 2 usage, otherwise error_exit_code() of the failure.
// Failures print one line to stderr:
//   error code=<name> exit=<status> field=<field> message="<text>"

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hydrosense/error.hpp"
#include "hydrosense/pipeline.hpp"

using namespace hydrosense;

namespace {

std::string quoted(const std::string &s)
{
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"' || c == '\\')
            out += '\\';
        out += (c == '\n') ? ' ' : c;
    }
    return out + "\"";
}

int report(ErrorCode code, const std::string &field, const std::string &msg)
{
    const int status = error_exit_code(code);
    std::cerr << "error code=" << error_code_name(code) << " exit=" << status
              << " field=" << (field.empty() ? "-" : field) << " message=" << quoted(msg) << "\n";
    return status;
}

pipeline::RunConfig config_or_default(const std::string &path)
{
    return path.empty() ? pipeline::RunConfig{} : pipeline::load_config(path);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"hydrosense: water-level sensing from bistatic downlink CSI"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", calibration_path, input;
    std::optional<std::uint64_t> seed;
    std::optional<double> pilot_aoa;
    bool emit_spectrum = false, verbose = false;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", config_path, "Run configuration file");
        sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
        sub->add_flag("--verbose", verbose, "Log per-stage details to stderr");
    };

    auto *sim = app.add_subcommand("simulate", "Synthesize a CSI file, ground truth and a pilot snapshot");
    add_common(sim);
    sim->add_option("--seed", seed, "Override the configured seed");

    auto *sense = app.add_subcommand("sense", "Estimate the water-level series from a CSI file");
    add_common(sense);
    sense->add_option("input", input, "CSI file")->required();
    sense->add_option("--calibration", calibration_path, "Calibration JSON from `calibrate`");
    sense->add_flag("--emit-spectrum", emit_spectrum, "Also write the MUSIC spectrum grid");

    auto *cal = app.add_subcommand("calibrate", "Estimate array errors from a pilot snapshot");
    add_common(cal);
    cal->add_option("input", input, "Pilot snapshot file")->required();
    cal->add_option("--pilot-aoa", pilot_aoa, "Pilot AoA in degrees")->required();

    auto *study = app.add_subcommand("study-aoa", "Reflected-path AoA change versus Tx-Rx distance");
    add_common(study);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        std::cerr << "error code=usage exit=2 field=- message=" << quoted(e.what()) << "\n";
        return 2;
    }

    std::ostream *log = verbose ? &std::cerr : nullptr;
    try
    {
        if (sim->parsed())
        {
            auto cfg = config_or_default(config_path);
            if (seed)
                cfg.seed = *seed;
            const auto out = pipeline::run_simulate(cfg, out_dir, log);
            std::cout << "csi=" << out.csi << " truth=" << out.truth << " snapshot=" << out.snapshot << "\n";
        }
        else if (sense->parsed())
        {
            const auto cfg = config_or_default(config_path);
            const auto r = pipeline::run_sense(input, cfg, calibration_path, emit_spectrum, out_dir, log);
            std::cout << "theta0_deg=" << r.theta0 << " theta1_deg=" << r.theta1 << " alpha_deg=" << r.alpha
                      << " water_doppler_hz=" << r.water_doppler << " range_bin=" << r.range_bins.front()
                      << " doppler_bin=" << r.doppler_bins.front() << " iterations=" << r.iterations
                      << " final_delta_w_m=" << r.level.delta_w(r.level.delta_w.size() - 1) << "\n";
        }
        else if (cal->parsed())
        {
            const auto est = pipeline::run_calibrate(input, *pilot_aoa, out_dir, log);
            std::cout << "eigenvalue=" << est.eigenvalue << " antennas=" << est.model.m() << "\n";
        }
        else if (study->parsed())
        {
            const auto cfg = config_or_default(config_path);
            const auto pts = pipeline::run_study(cfg, out_dir);
            std::cout << "points=" << pts.size() << "\n";
        }
    }
    catch (const Error &e)
    {
        return report(e.code(), e.field(), e.what());
    }
    catch (const std::exception &e)
    {
        return report(ErrorCode::Numerical, "", e.what());
    }
    return 0;
}
