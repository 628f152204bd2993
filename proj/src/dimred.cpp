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

#include "hydrosense/dimred.hpp"

#include <string>

#include <unsupported/Eigen/FFT>

#include "hydrosense/error.hpp"

namespace hydrosense::dimred {

namespace {

int argmax_lowest(const RVector &p)
{
    int best = 0;
    for (int i = 1; i < p.size(); ++i)
        if (p(i) > p(best))
            best = i;
    return best;
}

} // namespace

RangeReduction range_reduce(const CsiCapture &capture)
{
    capture.validate();
    const int K = capture.k();
    const Eigen::Index cols = capture.data.cols();

    Eigen::FFT<Real> fft;
    fft.SetFlag(Eigen::FFT<Real>::Unscaled);
    CMatrix profile(K, cols);
    CVector in(K), out(K);
    for (Eigen::Index c = 0; c < cols; ++c)
    {
        in = capture.data.col(c);
        fft.inv(out, in);
        profile.col(c) = out;
    }

    RangeReduction r;
    r.bin_power = profile.cwiseAbs2().rowwise().sum();
    r.bin = argmax_lowest(r.bin_power);
    r.values = profile.row(r.bin).transpose();
    return r;
}

DopplerReduction doppler_reduce(const CVector &v, int l, int m)
{
    require(l >= 1 && m >= 1 && v.size() == static_cast<Eigen::Index>(l) * m, "Doppler input must hold L*M samples");
    Eigen::FFT<Real> fft;
    CMatrix spec(l, m);
    CVector in(l), out(l);
    for (int mm = 0; mm < m; ++mm)
    {
        in = v.segment(static_cast<Eigen::Index>(l) * mm, l);
        fft.fwd(out, in);
        spec.col(mm) = out;
    }

    DopplerReduction d;
    d.bin_power = spec.cwiseAbs2().rowwise().sum();
    d.bin = argmax_lowest(d.bin_power);
    d.values = spec.row(d.bin).transpose();
    return d;
}

CVector reduce_capture(const CsiCapture &capture, int *range_bin, int *doppler_bin)
{
    const RangeReduction r = range_reduce(capture);
    const DopplerReduction d = doppler_reduce(r.values, capture.l(), capture.m());
    if (range_bin)
        *range_bin = r.bin;
    if (doppler_bin)
        *doppler_bin = d.bin;
    return d.values;
}

SeriesBuilder::SeriesBuilder(int m, int n, Real delta_t_cap)
{
    require(m >= 1 && n >= 1, "series dimensions must be positive");
    series_.h = CMatrix::Zero(m, n);
    series_.delta_t_cap = delta_t_cap;
    series_.range_bins.assign(n, -1);
    series_.doppler_bins.assign(n, -1);
}

void SeriesBuilder::set(int i, const CsiCapture &capture)
{
    require(i >= 0 && i < series_.n(), "capture index out of range", "index");
    if (capture.m() != series_.m())
        fail(ErrorCode::InvalidArgument, "capture " + std::to_string(i) + " antenna count differs", "array.m");
    if (!have_ref_)
    {
        k_ = capture.k();
        l_ = capture.l();
        delta_f_ = capture.sampling.delta_f;
        delta_t_ = capture.sampling.delta_t;
        fc_ = capture.array.fc;
        kappa_ = capture.array.kappa;
        have_ref_ = true;
    }
    else if (capture.k() != k_ || capture.l() != l_ || capture.sampling.delta_f != delta_f_ ||
             capture.sampling.delta_t != delta_t_ || capture.array.fc != fc_ || capture.array.kappa != kappa_)
    {
        fail(ErrorCode::InvalidArgument, "capture " + std::to_string(i) + " configuration differs from capture 0",
             "sampling");
    }
    series_.h.col(i) = reduce_capture(capture, &series_.range_bins[i], &series_.doppler_bins[i]);
}

ReducedSeries SeriesBuilder::finish() const
{
    return series_;
}

ReducedSeries reduce_series(const std::vector<CsiCapture> &captures)
{
    require(!captures.empty(), "no captures to reduce");
    SeriesBuilder b(captures.front().m(), static_cast<int>(captures.size()),
                    captures.front().sampling.delta_t_cap);
    for (std::size_t i = 0; i < captures.size(); ++i)
        b.set(static_cast<int>(i), captures[i]);
    return b.finish();
}

} // namespace hydrosense::dimred
