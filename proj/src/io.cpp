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

#include "hydrosense/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "hydrosense/error.hpp"

namespace hydrosense::io {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put(std::vector<char> &buf, T v)
{
    char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes, bytes + sizeof(T));
    buf.insert(buf.end(), bytes, bytes + sizeof(T));
}

template <typename T>
T get(const char *p)
{
    char bytes[sizeof(T)];
    std::memcpy(bytes, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes, bytes + sizeof(T));
    T v;
    std::memcpy(&v, bytes, sizeof(T));
    return v;
}

void encode_complex64(std::vector<char> &buf, const Complex *data, std::size_t n)
{
    buf.reserve(buf.size() + 8 * n);
    for (std::size_t i = 0; i < n; ++i)
    {
        put<float>(buf, static_cast<float>(data[i].real()));
        put<float>(buf, static_cast<float>(data[i].imag()));
    }
}

void decode_complex64(const char *p, Complex *out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        out[i] = Complex(get<float>(p + 8 * i), get<float>(p + 8 * i + 4));
}

std::vector<char> encode_header(const CsiHeader &h)
{
    std::vector<char> buf(CsiHeader::kMagic, CsiHeader::kMagic + 4);
    put<std::uint16_t>(buf, CsiHeader::kVersion);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(h.sampling.k));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(h.sampling.l));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(h.array.m));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(h.sampling.n));
    put<double>(buf, h.sampling.delta_f);
    put<double>(buf, h.sampling.delta_t);
    put<double>(buf, h.sampling.delta_t_cap);
    put<double>(buf, h.array.fc);
    put<double>(buf, h.array.kappa);
    return buf;
}

std::string tmp_path(const std::string &path)
{
    return path + ".tmp";
}

void atomic_rename(const std::string &from, const std::string &to)
{
    std::error_code ec;
    std::filesystem::rename(from, to, ec);
    if (ec)
        fail(ErrorCode::Io, "cannot rename " + from + " to " + to + ": " + ec.message(), "out");
}

std::uintmax_t file_size(const std::string &path)
{
    std::error_code ec;
    const auto n = std::filesystem::file_size(path, ec);
    if (ec)
        fail(ErrorCode::Io, "cannot stat " + path + ": " + ec.message(), "input");
    return n;
}

} // namespace

std::uint64_t CsiHeader::capture_bytes() const
{
    return static_cast<std::uint64_t>(sampling.k) * sampling.l * array.m * 8;
}

CsiWriter::CsiWriter(const std::string &path, const CsiHeader &header)
    : path_(path), tmp_(tmp_path(path)), header_(header)
{
    header_.array.validate();
    header_.sampling.validate();
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_)
        fail(ErrorCode::Io, "cannot open " + tmp_ + " for writing", "out");
    const auto buf = encode_header(header_);
    out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

CsiWriter::~CsiWriter()
{
    if (!committed_)
    {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(tmp_, ec);
    }
}

void CsiWriter::write(const CsiCapture &capture)
{
    require(static_cast<int>(written_) < header_.sampling.n, "more captures than declared in the header");
    require(capture.k() == header_.sampling.k && capture.l() == header_.sampling.l &&
                capture.m() == header_.array.m && capture.data.cols() == header_.sampling.l * header_.array.m,
            "capture dimensions do not match the file header");
    std::vector<char> buf;
    encode_complex64(buf, capture.data.data(), static_cast<std::size_t>(capture.data.size()));
    out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out_)
        fail(ErrorCode::Io, "write failed on " + tmp_, "out");
    ++written_;
}

void CsiWriter::commit()
{
    require(static_cast<int>(written_) == header_.sampling.n,
            "wrote " + std::to_string(written_) + " of " + std::to_string(header_.sampling.n) + " captures");
    out_.flush();
    out_.close();
    if (!out_)
        fail(ErrorCode::Io, "write failed on " + tmp_, "out");
    atomic_rename(tmp_, path_);
    committed_ = true;
}

CsiReader::CsiReader(const std::string &path) : path_(path)
{
    in_.open(path, std::ios::binary);
    if (!in_)
        fail(ErrorCode::Io, "cannot open " + path, "input");
    char raw[CsiHeader::kSize];
    in_.read(raw, CsiHeader::kSize);
    if (in_.gcount() != static_cast<std::streamsize>(CsiHeader::kSize))
        fail(ErrorCode::Format, path + ": truncated header", "header");
    if (std::memcmp(raw, CsiHeader::kMagic, 4) != 0)
        fail(ErrorCode::Format, path + ": bad magic (not a CSIW file)", "header.magic");
    const auto version = get<std::uint16_t>(raw + 4);
    if (version != CsiHeader::kVersion)
        fail(ErrorCode::Format, path + ": unsupported version " + std::to_string(version), "header.version");

    const auto k = get<std::uint32_t>(raw + 6);
    const auto l = get<std::uint32_t>(raw + 10);
    const auto m = get<std::uint32_t>(raw + 14);
    const auto n = get<std::uint32_t>(raw + 18);
    constexpr std::uint32_t kMaxDim = 1u << 24;
    if (k == 0 || l == 0 || m == 0 || n == 0 || k > kMaxDim || l > kMaxDim || m > kMaxDim || n > kMaxDim)
        fail(ErrorCode::Format, path + ": invalid dimensions in header", "header.dims");
    header_.sampling.k = static_cast<int>(k);
    header_.sampling.l = static_cast<int>(l);
    header_.array.m = static_cast<int>(m);
    header_.sampling.n = static_cast<int>(n);
    header_.sampling.delta_f = get<double>(raw + 22);
    header_.sampling.delta_t = get<double>(raw + 30);
    header_.sampling.delta_t_cap = get<double>(raw + 38);
    header_.array.fc = get<double>(raw + 46);
    header_.array.kappa = get<double>(raw + 54);
    try
    {
        header_.array.validate();
        header_.sampling.validate();
    }
    catch (const Error &e)
    {
        fail(ErrorCode::Format, path + ": invalid header: " + e.what(), "header");
    }

    const std::uintmax_t expected = CsiHeader::kSize + header_.capture_bytes() * n;
    const std::uintmax_t actual = file_size(path);
    if (actual != expected)
        fail(ErrorCode::Format,
             path + ": size " + std::to_string(actual) + " bytes, header implies " + std::to_string(expected),
             "payload");
}

CsiCapture CsiReader::read(int i)
{
    require(i >= 0 && i < size(), "capture index out of range", "capture_index");
    CsiCapture cap(header_.array, header_.sampling, i * header_.sampling.delta_t_cap);
    const std::uint64_t bytes = header_.capture_bytes();
    std::vector<char> buf(bytes);
    in_.seekg(static_cast<std::streamoff>(CsiHeader::kSize + bytes * static_cast<std::uint64_t>(i)));
    in_.read(buf.data(), static_cast<std::streamsize>(bytes));
    if (in_.gcount() != static_cast<std::streamsize>(bytes))
        fail(ErrorCode::Io, path_ + ": short read at capture " + std::to_string(i), "payload");
    decode_complex64(buf.data(), cap.data.data(), static_cast<std::size_t>(cap.data.size()));
    return cap;
}

void write_snapshot(const std::string &path, const BasebandSnapshot &snapshot, const ArrayConfig &array)
{
    snapshot.validate();
    require(snapshot.data.rows() == array.m, "snapshot rows must equal the antenna count", "array.m");
    std::vector<char> buf = {'C', 'S', 'W', 'S'};
    put<std::uint16_t>(buf, 1);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(snapshot.data.rows()));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(snapshot.data.cols()));
    put<double>(buf, array.fc);
    put<double>(buf, array.kappa);
    encode_complex64(buf, snapshot.data.data(), static_cast<std::size_t>(snapshot.data.size()));
    write_text_atomic(path, std::string(buf.begin(), buf.end()));
}

BasebandSnapshot read_snapshot(const std::string &path, ArrayConfig *array)
{
    constexpr std::size_t kHeader = 4 + 2 + 8 + 16;
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::Io, "cannot open " + path, "snapshot");
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (raw.size() < kHeader || std::memcmp(raw.data(), "CSWS", 4) != 0)
        fail(ErrorCode::Format, path + ": not a snapshot file", "snapshot.magic");
    if (get<std::uint16_t>(raw.data() + 4) != 1)
        fail(ErrorCode::Format, path + ": unsupported snapshot version", "snapshot.version");
    const auto m = get<std::uint32_t>(raw.data() + 6);
    const auto g = get<std::uint32_t>(raw.data() + 10);
    if (m == 0 || g == 0 || raw.size() != kHeader + static_cast<std::uint64_t>(m) * g * 8)
        fail(ErrorCode::Format, path + ": snapshot size does not match header", "snapshot.payload");
    if (array)
    {
        array->m = static_cast<int>(m);
        array->fc = get<double>(raw.data() + 14);
        array->kappa = get<double>(raw.data() + 22);
    }
    BasebandSnapshot s;
    s.data.resize(m, g);
    decode_complex64(raw.data() + kHeader, s.data.data(), static_cast<std::size_t>(s.data.size()));
    return s;
}

void write_calibration(const std::string &path, const ArrayErrorModel &model, Real pilot_aoa_deg,
                       Real eigenvalue)
{
    model.validate();
    const CVector e = model.vector();
    nlohmann::ordered_json j;
    j["pilot_aoa_deg"] = pilot_aoa_deg;
    j["eigenvalue"] = eigenvalue;
    j["antennas"] = nlohmann::ordered_json::array();
    for (int m = 0; m < model.m(); ++m)
        j["antennas"].push_back({{"index", m}, {"gain", std::abs(e(m))}, {"phase_deg", rad2deg(-std::arg(e(m)))}});
    write_text_atomic(path, j.dump(2) + "\n");
}

ArrayErrorModel read_calibration(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::Io, "cannot open " + path, "calibration");
    nlohmann::json j;
    try
    {
        in >> j;
        const auto &ants = j.at("antennas");
        if (!ants.is_array() || ants.empty())
            fail(ErrorCode::Format, path + ": antennas must be a non-empty array", "calibration.antennas");
        const int m = static_cast<int>(ants.size());
        ArrayErrorModel model = ArrayErrorModel::identity(m);
        std::vector<bool> seen(m, false);
        for (const auto &a : ants)
        {
            const int idx = a.at("index").get<int>();
            if (idx < 0 || idx >= m || seen[idx])
                fail(ErrorCode::Format, path + ": bad antenna index " + std::to_string(idx), "calibration.index");
            seen[idx] = true;
            model.gains(idx) = a.at("gain").get<Real>();
            model.phases(idx) = deg2rad(a.at("phase_deg").get<Real>());
        }
        model.validate();
        return model;
    }
    catch (const nlohmann::json::exception &e)
    {
        fail(ErrorCode::Format, path + ": " + e.what(), "calibration");
    }
    catch (const Error &e)
    {
        if (e.code() == ErrorCode::InvalidArgument)
            fail(ErrorCode::Format, path + ": " + e.what(), "calibration");
        throw;
    }
}

void write_text_atomic(const std::string &path, const std::string &text)
{
    const std::string tmp = tmp_path(path);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            fail(ErrorCode::Io, "cannot open " + tmp + " for writing", "out");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.close();
        if (!out)
        {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            fail(ErrorCode::Io, "write failed on " + tmp, "out");
        }
    }
    atomic_rename(tmp, path);
}

} // namespace hydrosense::io
