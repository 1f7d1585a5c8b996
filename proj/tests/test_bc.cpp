// SPDX-License-Identifier: Apache-2.0
//
// nfcap: capacity of near-field line-of-sight multiuser channels
// Copyright (C) 2026 The nfcap authors
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

#include "nfcap/bc.hpp"
#include "nfcap/channel_stats.hpp"
#include "nfcap/oracle.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nfcap;
using nfcap::testing::pi;

namespace
{
    const BcConfig unit_noise(1000.0, {1.0, 1.0});

    LinkStats default_stats(const UserLocation &u2 = nfcap::testing::ut2_dd())
    {
        return link_stats_streaming(ChannelModel::near_field, nfcap::testing::default_array(), nfcap::testing::ut1(), u2);
    }

    double min_eigenvalue(const Eigen::MatrixXcd &m) { return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues().minCoeff(); }
}

TEST(BcAllocation, SymmetricUsersSplitEvenly)
{
    const PowerAllocation a = bc_power_allocation_two_user(0.1, 0.1, 0.3, unit_noise);
    EXPECT_NEAR(a.p[0], 500.0, 1e-9);
    EXPECT_NEAR(a.p[1], 500.0, 1e-9);
    EXPECT_FALSE(a.degenerate);
}

TEST(BcAllocation, VanishingSecondUser)
{
    const PowerAllocation a = bc_power_allocation_two_user(0.1, 1e-12, 0.3, unit_noise);
    EXPECT_EQ(a.p[0], 1000.0);
    EXPECT_EQ(a.p[1], 0.0);
    const PowerAllocation z = bc_power_allocation_two_user(0.1, 0.0, 0.3, unit_noise);
    EXPECT_EQ(z.p[0], 1000.0);
    EXPECT_NEAR(bc_capacity_two_user(0.1, 1e-12, 0.3, unit_noise), std::log2(1.0 + 100.0), 1e-12);
}

TEST(BcAllocation, ParallelChannelsFallBackToStrongerUser)
{
    const BcConfig cfg(10.0, {1.0, 0.25});
    const PowerAllocation a = bc_power_allocation_two_user(0.2, 0.1, 1.0, cfg);
    EXPECT_TRUE(a.degenerate);
    EXPECT_EQ(a.p[0], 0.0);
    EXPECT_EQ(a.p[1], 10.0);
    EXPECT_TRUE(bc_power_allocation_two_user(0.2, 0.1, 1.0 - 1e-11, cfg).degenerate);
}

TEST(BcAllocation, DefaultScenarioMatchesGrid)
{
    const LinkStats st = default_stats();
    const PowerAllocation a = bc_power_allocation_two_user(st.gain_1, st.gain_2, st.ccf_rho, unit_noise);
    EXPECT_NEAR(a.p[0], 380.636, 1e-3);
    EXPECT_NEAR(a.p[1], 619.364, 1e-3);
    EXPECT_NEAR(a.total(), 1000.0, 1e-9);
    const double c = bc_capacity_two_user(st.gain_1, st.gain_2, st.ccf_rho, unit_noise);
    EXPECT_NEAR(c, 4.26794284577, 1e-10);
    EXPECT_GE(c, oracle::bc_power_grid_oracle(st.gain_1, st.gain_2, st.ccf_rho, unit_noise).value - 1e-6);
}

TEST(BcAllocation, KktAgainstFineGrid)
{
    const LinkStats st = default_stats(nfcap::testing::ut2_sd());
    const double c = bc_capacity_two_user(st.gain_1, st.gain_2, st.ccf_rho, unit_noise);
    for (int i = 0; i <= 10000; ++i)
    {
        const double p1 = 1000.0 * i / 10000.0;
        ASSERT_GE(c, dual_mac_sum_rate(st.gain_1, st.gain_2, st.ccf_rho, p1, 1000.0 - p1, unit_noise) - 1e-9) << "p1 = " << p1;
    }
}

TEST(BcCapacity, BranchValues)
{
    const BcConfig cfg(100.0, {2.0, 0.5});
    // user 2 far weaker: all power to user 1
    EXPECT_NEAR(bc_capacity_two_user(0.5, 1e-6, 0.2, cfg), std::log2(1.0 + 100.0 * 0.5 / 2.0), 1e-12);
    EXPECT_NEAR(bc_capacity_two_user(0.01, 0.01, 0.0, unit_noise), 2.0 * std::log2(1.0 + 1000.0 * 0.01 / 2.0), 1e-12);
}

TEST(BcCapacity, SaturatedNearFieldValue)
{
    const double g = asymptotic_nf_gain(1.0 / pi);
    EXPECT_NEAR(bc_capacity_two_user(g, g, 0.0, unit_noise), 2.0 * std::log2(1.0 + 1000.0 * g / 2.0), 1e-12);
    EXPECT_NEAR(bc_capacity_two_user(g, g, 0.0, unit_noise), 12.66, 0.005);
}

TEST(BcCapacity, AtLeastBestSingleUser)
{
    nfcap::testing::Gen gen(12);
    for (int i = 0; i < 300; ++i)
    {
        const BcConfig cfg(gen.log_uniform(1.0, 1e4), {gen.log_uniform(0.1, 10.0), gen.log_uniform(0.1, 10.0)});
        const double g1 = gen.gain(), g2 = gen.gain(), rho = gen.rho();
        const double c = bc_capacity_two_user(g1, g2, rho, cfg);
        EXPECT_GE(c, std::log2(1.0 + cfg.total_power * g1 / cfg.noise_var[0]) - 1e-12);
        EXPECT_GE(c, std::log2(1.0 + cfg.total_power * g2 / cfg.noise_var[1]) - 1e-12);
    }
}

TEST(BcCovariance, SingleActiveUserIsMrt)
{
    const auto [h1, h2] = oracle::synthesize_two_user(0.3, 0.2, 0.4, 6, 9);
    PowerAllocation a;
    a.p = {7.0, 0.0};
    const BcConfig cfg(7.0, {1.0, 1.0});
    const CovariancePair cov = bc_covariance_recovery(h1, h2, a, cfg);
    const Eigen::MatrixXcd ref = 7.0 * h1.entries * h1.entries.adjoint() / h1.entries.squaredNorm();
    EXPECT_NEAR((cov.sigma1 - ref).norm(), 0.0, 1e-12);
    EXPECT_NEAR(cov.sigma2.norm(), 0.0, 1e-15);
}

TEST(BcCovariance, ZeroPowerGivesZeroMatrices)
{
    const auto [h1, h2] = oracle::synthesize_two_user(0.3, 0.2, 0.4, 4, 9);
    PowerAllocation a;
    a.p = {0.0, 0.0};
    const CovariancePair cov = bc_covariance_recovery(h1, h2, a, BcConfig(1.0, {1.0, 1.0}));
    EXPECT_EQ(cov.sigma1.norm(), 0.0);
    EXPECT_EQ(cov.sigma2.norm(), 0.0);
}

TEST(BcCovariance, OrthogonalChannelsGiveSingleUserRates)
{
    const auto [h1, h2] = oracle::synthesize_two_user(0.3, 0.2, 0.0, 5, 4);
    const BcConfig cfg(50.0, {0.5, 2.0});
    const PowerAllocation a = bc_power_allocation_two_user(0.3, 0.2, 0.0, cfg);
    const RatePoint r = downlink_dpc_rates(h1, h2, bc_covariance_recovery(h1, h2, a, cfg), cfg);
    EXPECT_NEAR(r[0], std::log2(1.0 + a.p[0] * 0.3 / 0.5), 1e-10);
    EXPECT_NEAR(r[1], std::log2(1.0 + a.p[1] * 0.2 / 2.0), 1e-10);
}

TEST(BcCovariance, DualityAtReducedArray)
{
    const ArrayGeometry g = nfcap::testing::default_array(21);
    const ChannelVector h1 = nf_channel_vector(g, nfcap::testing::ut1()), h2 = nf_channel_vector(g, nfcap::testing::ut2_sd());
    const LinkStats st = link_stats_exact(h1, h2);
    for (const BcConfig &cfg : {unit_noise, BcConfig(1000.0, {0.5, 3.0})})
    {
        const PowerAllocation a = bc_power_allocation_two_user(st.gain_1, st.gain_2, st.ccf_rho, cfg);
        const CovariancePair cov = bc_covariance_recovery(h1, h2, a, cfg);
        const RatePoint dl = downlink_dpc_rates(h1, h2, cov, cfg);
        const RatePoint ul = sic_rates_two_user(st.gain_1, st.gain_2, st.ccf_rho, a.p[0] / cfg.noise_var[0], a.p[1] / cfg.noise_var[1],
                                                SicOrder::U1_first);
        EXPECT_NEAR(dl[0], ul[0], 1e-9);
        EXPECT_NEAR(dl[1], ul[1], 1e-9);
        const double tr = std::real(cov.sigma1.trace() + cov.sigma2.trace());
        EXPECT_NEAR(tr, cfg.total_power, 1e-6 * cfg.total_power);
        for (const Eigen::MatrixXcd *s : {&cov.sigma1, &cov.sigma2})
        {
            EXPECT_NEAR((*s - s->adjoint()).norm(), 0.0, 1e-9 * cfg.total_power);
            EXPECT_GE(min_eigenvalue(*s), -1e-9 * std::real(s->trace()));
        }
    }
}

TEST(BcRegion, ContainsDualMacCorners)
{
    const double g1 = 0.02, g2 = 0.03, rho = 0.4;
    const BcConfig cfg(100.0, {1.0, 1.0});
    const RateRegion r = bc_region_two_user(g1, g2, rho, cfg, 41);
    EXPECT_EQ(r.kind, RegionKind::hull);
    EXPECT_TRUE(r.is_convex());
    for (int i = 0; i <= 40; ++i)
    {
        const double p1 = 100.0 * i / 40.0;
        for (SicOrder o : {SicOrder::U1_first, SicOrder::U2_first})
            EXPECT_TRUE(r.contains(sic_rates_two_user(g1, g2, rho, p1, 100.0 - p1, o), 1e-9));
    }
    // rectangle of the equal-split corners
    const RatePoint a = sic_rates_two_user(g1, g2, rho, 50.0, 50.0, SicOrder::U1_first);
    const RatePoint b = sic_rates_two_user(g1, g2, rho, 50.0, 50.0, SicOrder::U2_first);
    EXPECT_TRUE(r.contains({{std::min(a[0], b[0]), std::min(a[1], b[1])}}, 1e-9));
    EXPECT_TRUE(r.contains({{std::log2(1.0 + 100.0 * g1), 0.0}}, 1e-9));
    EXPECT_NEAR(r.max_rate(0), std::log2(1.0 + 100.0 * g1), 1e-12);
    EXPECT_FALSE(r.contains({{std::log2(1.0 + 100.0 * g1) + 0.01, 0.0}}, 1e-9));
}

TEST(BcRegion, UncorrelatedSaturatedIsNearlyRectangular)
{
    const double g = asymptotic_nf_gain(1.0 / pi);
    const RateRegion r = bc_region_two_user(g, g, 0.0, unit_noise, 101);
    const double c = bc_capacity_two_user(g, g, 0.0, unit_noise);
    // the equal split point lies on the boundary and the axes stop at the single-user rates
    EXPECT_TRUE(r.contains({{c / 2.0, c / 2.0}}, 1e-9));
    EXPECT_FALSE(r.contains({{c / 2.0 + 1e-3, c / 2.0 + 1e-3}}, 1e-9));
    EXPECT_NEAR(r.max_rate(0), std::log2(1.0 + 1000.0 * g), 1e-12);
}

TEST(BcRegion, VectorOverloadMatchesStats)
{
    const auto [h1, h2] = oracle::synthesize_two_user(0.02, 0.03, 0.4, 6, 2);
    const BcConfig cfg(100.0, {1.0, 1.0});
    const RateRegion a = bc_region_two_user(h1, h2, cfg, 21), b = bc_region_two_user(0.02, 0.03, 0.4, cfg, 21);
    ASSERT_EQ(a.vertices.size(), b.vertices.size());
    for (std::size_t i = 0; i < a.vertices.size(); ++i)
    {
        EXPECT_NEAR(a.vertices[i][0], b.vertices[i][0], 1e-10);
        EXPECT_NEAR(a.vertices[i][1], b.vertices[i][1], 1e-10);
    }
}

TEST(BcGeneral, SingleUser)
{
    const auto hs = oracle::random_channels({0.4}, 8, 3);
    const BcSolution s = bc_capacity_general(hs, BcConfig(20.0, {2.0}));
    EXPECT_NEAR(s.capacity, std::log2(1.0 + 20.0 * 0.4 / 2.0), 1e-12);
    EXPECT_NEAR(s.allocation.p[0], 20.0, 1e-12);
}

TEST(BcGeneral, TwoUsersMatchClosedForm)
{
    const ArrayGeometry g = nfcap::testing::default_array(33);
    const std::vector<ChannelVector> hs = {nf_channel_vector(g, nfcap::testing::ut1()), nf_channel_vector(g, nfcap::testing::ut2_sd())};
    const LinkStats st = link_stats_exact(hs[0], hs[1]);
    EXPECT_NEAR(bc_capacity_general(hs, unit_noise).capacity, bc_capacity_two_user(st.gain_1, st.gain_2, st.ccf_rho, unit_noise), 1e-8);
}

TEST(BcGeneral, ThreeUsersAgainstSimplexGrid)
{
    const auto hs = oracle::random_channels({0.3, 0.1, 0.2}, 16, 29);
    const BcConfig cfg(20.0, {1.0, 0.5, 2.0});
    const double v = bc_capacity_general(hs, cfg).capacity;
    double best = 0.0;
    for (int i = 0; i <= 200; ++i)
        for (int j = 0; i + j <= 200; ++j)
        {
            const double p1 = 20.0 * i / 200.0, p2 = 20.0 * j / 200.0, p3 = 20.0 - p1 - p2;
            best = std::max(best, oracle::logdet_capacity_oracle(hs, {p1 / 1.0, p2 / 0.5, p3 / 2.0}));
        }
    EXPECT_NEAR(v, best, 2e-3);
    EXPECT_GE(v, best - 1e-9);
}

TEST(BcGeneral, InvariantUnderUserReordering)
{
    const auto hs = oracle::random_channels({0.3, 0.1, 0.2}, 12, 30);
    const double a = bc_capacity_general(hs, BcConfig(20.0, {1.0, 0.5, 2.0})).capacity;
    const double b = bc_capacity_general({hs[2], hs[0], hs[1]}, BcConfig(20.0, {2.0, 1.0, 0.5})).capacity;
    EXPECT_NEAR(a, b, 1e-8);
}

TEST(BcGeneral, NonConvergenceCarriesBestIterate)
{
    const auto hs = oracle::random_channels({0.3, 0.1, 0.2}, 12, 30);
    try
    {
        bc_capacity_general(hs, BcConfig(20.0, {1.0, 0.5, 2.0}), 1e-300, 2);
        FAIL() << "expected ConvergenceError";
    }
    catch (const ConvergenceError &e)
    {
        EXPECT_GT(e.value, 0.0);
        EXPECT_NEAR(e.allocation.total(), 20.0, 1e-9);
    }
}

TEST(LinearPrecoders, EndpointCorrelations)
{
    for (Precoder p : {Precoder::mrt, Precoder::zf})
        EXPECT_NEAR(linear_precoder_sum_rate(p, 0.3, 0.1, 0.0, 5.0, 7.0), std::log2(2.5) + std::log2(1.7), 1e-14) << to_string(p);
    EXPECT_NEAR(linear_precoder_sum_rate(Precoder::zf, 0.3, 0.1, 1.0, 5.0, 7.0), 0.0, 1e-14);
}

TEST(LinearPrecoders, DefaultScenarioRatio)
{
    const LinkStats st = default_stats();
    for (Precoder p : {Precoder::mrt, Precoder::zf})
    {
        const double r = downlink_rate_ratio(p, st.gain_1, st.gain_2, st.ccf_rho, 500.0, 500.0);
        EXPECT_GT(r, 0.9);
        EXPECT_LE(r, 1.0);
    }
}

TEST(LinearPrecoders, DpcDominatesEqualSplit)
{
    nfcap::testing::Gen gen(55);
    for (int i = 0; i < 200; ++i)
    {
        const double g1 = gen.gain(), g2 = gen.gain(), rho = gen.rho(), p = gen.snr();
        const BcConfig cfg(p, {1.0, 1.0});
        const double c = bc_capacity_two_user(g1, g2, rho, cfg);
        for (Precoder s : {Precoder::mrt, Precoder::zf})
            EXPECT_GE(c, linear_precoder_sum_rate(s, g1, g2, rho, p / 2.0, p / 2.0) - 1e-12);
    }
}

TEST(BcAsymptotics, Variants)
{
    AsymptoticParams p;
    p.xi = 1.0 / pi;
    EXPECT_NEAR(bc_asymptotics(AsymptoticVariant::nf_upa, unit_noise, p), 12.664609261, 1e-8);

    const ArrayGeometry g = nfcap::testing::default_array(1).with_counts(1, 10000001);
    p.xi = g.occupation_ratio();
    p.pitch = g.pitch();
    p.users = {nfcap::testing::ut1(), nfcap::testing::ut2_dd()};
    const double large_m = bc_capacity_two_user(ula_gain_closed(g, p.users[0]), ula_gain_closed(g, p.users[1]), 0.0, unit_noise);
    EXPECT_NEAR(bc_asymptotics(AsymptoticVariant::nf_ula, unit_noise, p), large_m, 0.05);

    for (double m : {1e3, 1e6})
    {
        const FfAsymptote f = bc_asymptotic_ff(m, g.element_area(), unit_noise, nfcap::testing::ut1(), nfcap::testing::ut2_dd());
        EXPECT_GT(f.gap, 0.0);
        EXPECT_NEAR(f.different_direction - f.same_direction, f.gap, 1e-9);
    }
    EXPECT_THROW(bc_asymptotics(AsymptoticVariant::ff, unit_noise, AsymptoticParams{}), ConfigError);
}
