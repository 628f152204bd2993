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

#ifndef HYDROSENSE_IO_HPP
#define HYDROSENSE_IO_HPP

#include <cstdint>
#include <fstream>
#include <string>

#include "hydrosense/csi_sim.hpp"
#include "hydrosense/types.hpp"

namespace hydrosense::io {

/// CSI file: 62-byte little-endian header followed by N captures of K*L*M
/// complex64 values (k fastest, then l, then m).
///
///   off  size  field
///     0     4  magic "CSIW"
///     4     2  version (1)
///     6    16  K, L, M, N (u32)
///    22    40  delta_f, delta_t, delta_t_cap, fc, kappa (f64)
struct CsiHeader
{
    static constexpr char kMagic[4] = {'C', 'S', 'I', 'W'};
    static constexpr std::uint16_t kVersion = 1;
    static constexpr std::size_t kSize = 62;

    ArrayConfig array;
    SamplingConfig sampling;

    std::uint64_t capture_bytes() const;
};

/// Writes to `path.tmp` and renames onto `path` on commit(). An uncommitted
/// writer removes its temporary file.
class CsiWriter
{
public:
    CsiWriter(const std::string &path, const CsiHeader &header);
    ~CsiWriter();
    CsiWriter(const CsiWriter &) = delete;
    CsiWriter &operator=(const CsiWriter &) = delete;

    void write(const CsiCapture &capture);
    void commit();

private:
    std::string path_, tmp_;
    CsiHeader header_;
    std::ofstream out_;
    std::uint32_t written_ = 0;
    bool committed_ = false;
};

/// Random-access reader. Validates magic, version, dimensions and file size on open.
class CsiReader
{
public:
    explicit CsiReader(const std::string &path);

    const CsiHeader &header() const { return header_; }
    int size() const { return header_.sampling.n; }

    /// Capture i with timestamp i * delta_t_cap.
    CsiCapture read(int i);

private:
    std::string path_;
    std::ifstream in_;
    CsiHeader header_;
};

/// Pilot snapshot file: "CSWS", version u16, M, G (u32), fc, kappa (f64),
/// then G snapshots of M complex64 values (antenna fastest).
void write_snapshot(const std::string &path, const BasebandSnapshot &snapshot, const ArrayConfig &array);
BasebandSnapshot read_snapshot(const std::string &path, ArrayConfig *array = nullptr);

/// Calibration JSON: {"pilot_aoa_deg", "eigenvalue", "antennas": [{"index", "gain", "phase_deg"}]}.
void write_calibration(const std::string &path, const ArrayErrorModel &model, Real pilot_aoa_deg,
                       Real eigenvalue);
ArrayErrorModel read_calibration(const std::string &path);

/// Atomic text write through a temporary file.
void write_text_atomic(const std::string &path, const std::string &text);

} // namespace hydrosense::io

#endif // HYDROSENSE_IO_HPP
