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

#include <gtest/gtest.h>

#include <cmath>

#include "hydrosense/csi_sim.hpp"
#include "hydrosense/dimred.hpp"
#include "hydrosense/error.hpp"

using namespace hydrosense;
using namespace hydrosense::dimred;

namespace {

ArrayConfig arr()
{
    return ArrayConfig::half_wavelength(4, 2659.8e6);
}

SamplingConfig smp(int k = 16, int l = 64)
{
    SamplingConfig s;
    s.k = k;
    s.l = l;
    s.n = 8;
    return s;
}

CsiCapture one_path(const PathParams &p, const SamplingConfig &s = smp())
{
    return synth_capture({p}, arr(), s, std::nullopt, std::nullopt, 0.0, 1);
}

} // namespace

TEST(Range, DelayLandsInBin)
{
    const auto s = smp();
    for (int q : {0, 1, 5, 15})
    {
        const Real tau = q / (s.k * s.delta_f);
        EXPECT_EQ(range_reduce(one_path({{1.0, 0.0}, tau, 0.0, 20.0}, s)).bin, q);
    }
}

TEST(Range, SameCellKeepsEnergy)
{
    const auto s = smp();
    const Real cell = 1.0 / (s.k * s.delta_f);
    const auto cap = synth_capture({{{1.0, 0.0}, 3 * cell, 0.0, 47.5}, {std::polar(0.5, 1.0), 3.02 * cell, 0.0, 35.0}},
                                   arr(), s, std::nullopt, std::nullopt, 0.0, 1);
    const auto rr = range_reduce(cap);
    EXPECT_EQ(rr.bin, 3);
    EXPECT_GT(rr.bin_power(3) / rr.bin_power.sum(), 0.95);
}

TEST(Range, TieGoesToLowestBin)
{
    auto s = smp(8, 4);
    CsiCapture cap(arr(), s);
    cap.data.setZero();
    EXPECT_EQ(range_reduce(cap).bin, 0);
}

TEST(Doppler, ShiftLandsInBin)
{
    const auto s = smp();
    const Real df = 1.0 / (s.l * s.delta_t);
    for (int q : {0, 2, 7})
    {
        int rb = -1, db = -1;
        reduce_capture(one_path({{1.0, 0.0}, 0.0, q * df, 20.0}, s), &rb, &db);
        EXPECT_EQ(db, q);
    }
    int db = -1;
    reduce_capture(one_path({{1.0, 0.0}, 0.0, -3 * df, 20.0}, s), nullptr, &db);
    EXPECT_EQ(db, s.l - 3);
}

TEST(Doppler, StrongStaticBeatsWeakMover)
{
    const auto s = smp();
    const auto cap = synth_capture({{{1.0, 0.0}, 0.0, 0.0, 47.5}, {{0.5, 0.0}, 0.0, 300.0, 20.0}}, arr(), s,
                                   std::nullopt, std::nullopt, 0.0, 1);
    int rb = -1, db = -1;
    reduce_capture(cap, &rb, &db);
    EXPECT_EQ(rb, 0);
    EXPECT_EQ(db, 0);
}

TEST(Reduce, StaticUnitPathIsScaledSteering)
{
    const auto s = smp();
    const CVector v = reduce_capture(one_path({{1.0, 0.0}, 0.0, 0.0, 33.0}, s));
    const CVector expect = static_cast<Real>(s.k * s.l) * steering_vector(arr(), 33.0);
    EXPECT_LT((v - expect).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Reduce, Linear)
{
    const auto s = smp();
    const auto a = one_path({{1.0, 0.0}, 0.0, 0.0, 10.0}, s);
    auto b = a;
    b.data *= Complex(0.0, 2.0);
    EXPECT_LT((reduce_capture(b) - Complex(0.0, 2.0) * reduce_capture(a)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Series, IdenticalCapturesIdenticalColumns)
{
    const auto s = smp();
    const auto cap = one_path({{1.0, 0.0}, 2e-7, 0.0, 30.0}, s);
    const auto series = reduce_series({cap, cap, cap});
    EXPECT_EQ(series.n(), 3);
    EXPECT_EQ(series.m(), 4);
    EXPECT_TRUE(series.h.col(0) == series.h.col(1));
    EXPECT_TRUE(series.h.col(0) == series.h.col(2));
}

TEST(Series, ColumnPhaseStepFollowsPath)
{
    const auto s = smp();
    std::vector<CsiCapture> caps;
    const Real step = 0.37;
    for (int n = 0; n < 6; ++n)
        caps.push_back(one_path({std::polar(1.0, step * n), 0.0, 0.0, 30.0}, s));
    const auto series = reduce_series(caps);
    for (int n = 1; n < 6; ++n)
    {
        const Complex ip = series.h.col(n - 1).dot(series.h.col(n));
        EXPECT_NEAR(std::arg(ip), step, 1e-9);
        EXPECT_GT(std::abs(ip) / (series.h.col(n - 1).norm() * series.h.col(n).norm()), 0.999);
    }
}

TEST(Series, CollinearUnderNoise)
{
    const auto s = smp();
    std::vector<CsiCapture> caps;
    for (int n = 0; n < 4; ++n)
        caps.push_back(synth_capture({{std::polar(1.0, 0.5 * n), 1e-7, 0.0, -25.0}}, arr(), s, std::nullopt,
                                     std::nullopt, noise_sigma_for_snr(10.0), 40 + n));
    const auto series = reduce_series(caps);
    const CVector a = steering_vector(arr(), -25.0);
    for (int n = 0; n < 4; ++n)
        EXPECT_GT(std::abs(a.dot(series.h.col(n))) / (a.norm() * series.h.col(n).norm()), 0.999);
}

TEST(Series, ConfigMismatchRejected)
{
    const auto a = one_path({{1.0, 0.0}, 0.0, 0.0, 30.0}, smp(16, 64));
    const auto b = one_path({{1.0, 0.0}, 0.0, 0.0, 30.0}, smp(16, 32));
    SeriesBuilder builder(4, 2, 90.0);
    builder.set(0, a);
    EXPECT_THROW(builder.set(1, b), Error);
    EXPECT_THROW(builder.set(2, a), Error);
    EXPECT_THROW(reduce_series({a, b}), Error);
}
