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

#include "nfcap/experiments/experiments.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace nfcap;
using namespace nfcap::experiments;
using nfcap::testing::pi;

namespace
{
    std::string csv(const SweepResult &r)
    {
        std::ostringstream out;
        write_csv(r, out);
        return out.str();
    }

    std::size_t column(const SweepResult &r, const std::string &name)
    {
        for (std::size_t i = 0; i < r.columns.size(); ++i)
            if (r.columns[i] == name)
                return i;
        throw std::out_of_range("no column " + name);
    }

    double num(const Cell &c) { return std::holds_alternative<double>(c) ? std::get<double>(c) : double(std::get<long long>(c)); }

    std::string error_of(const std::string &text)
    {
        try
        {
            parse_scenario(text);
        }
        catch (const ScenarioError &e)
        {
            return e.what();
        }
        return "";
    }
}

TEST(Scenario, EmptyFileGivesDefaults)
{
    const Scenario s = parse_scenario("");
    EXPECT_EQ(s.mx, 65);
    EXPECT_EQ(s.mz, 65);
    const ArrayGeometry g = s.geometry();
    EXPECT_NEAR(g.wavelength(), speed_of_light / 2.4e9, 1e-15);
    EXPECT_NEAR(g.pitch(), g.wavelength() / 2.0, 1e-15);
    EXPECT_NEAR(g.occupation_ratio(), 1.0 / pi, 1e-12);
    ASSERT_EQ(s.users.size(), 2u);
    EXPECT_EQ(s.users[0].range, 10.0);
    EXPECT_NEAR(s.users[0].theta, pi / 3, 1e-15);
    EXPECT_NEAR(s.users[0].phi, 2 * pi / 3, 1e-15);
    EXPECT_EQ(s.users[1].range, 5.0);
    EXPECT_NEAR(s.users[1].theta, 2 * pi / 3, 1e-15);
    EXPECT_NEAR(s.users[1].phi, pi / 3, 1e-15);
    EXPECT_NEAR(s.snr_linear()[0], 1000.0, 1e-9);
    EXPECT_NEAR(s.total_power(), 1000.0, 1e-9);
    EXPECT_EQ(s.model, ChannelModel::near_field);
    EXPECT_FALSE(s.sweep);
}

TEST(Scenario, PartialOverrideKeepsDefaults)
{
    const Scenario s = parse_scenario("r2: 20\n");
    EXPECT_EQ(s.users[1].range, 20.0);
    EXPECT_EQ(s.users[0].range, 10.0);
    EXPECT_EQ(s.mx, 65);
    EXPECT_NEAR(s.users[1].theta, 2 * pi / 3, 1e-15);
}

TEST(Scenario, AngleSyntax)
{
    const Scenario s = parse_scenario("users:\n  - {range: 3, theta: pi/4, phi: 0.5}\n  - {range: 7, theta: 2pi/3, phi: 0.25*pi}\n");
    EXPECT_NEAR(s.users[0].theta, pi / 4, 1e-15);
    EXPECT_NEAR(s.users[0].phi, 0.5, 1e-15);
    EXPECT_NEAR(s.users[1].theta, 2 * pi / 3, 1e-15);
    EXPECT_NEAR(s.users[1].phi, pi / 4, 1e-15);
    EXPECT_NEAR(parse_scenario("layout: same-direction\n").users[1].theta, pi / 3, 1e-15);
}

TEST(Scenario, Rejections)
{
    const std::string zero = error_of("users:\n  - {range: 10, theta: 0, phi: pi/2}\n");
    EXPECT_NE(zero.find("open interval (0, pi)"), std::string::npos) << zero;
    EXPECT_NE(zero.find("users[0].theta"), std::string::npos) << zero;
    EXPECT_NE(zero.find("line 2"), std::string::npos) << zero;
    EXPECT_NE(error_of("users:\n  - {range: 10, theta: 60deg, phi: pi/2}\n").find("degrees"), std::string::npos);
    EXPECT_NE(error_of("array: {n_side: 64}\n").find("odd"), std::string::npos);
    EXPECT_NE(error_of("colour: red\n").find("unknown key 'colour'"), std::string::npos);
    EXPECT_NE(error_of("sweep: {variable: temperature, values: [1]}\n").find("sweep.variable"), std::string::npos);
    EXPECT_NE(error_of("noise_var: [1, -1]\n").find("noise_var"), std::string::npos);
    EXPECT_NE(error_of("array: {pitch: 0.5lambda, element_side: 0.6lambda}\n").find("element side"), std::string::npos);
    const std::string bad = error_of("r1: [1, \n");
    EXPECT_NE(bad.find("parse error"), std::string::npos) << bad;
    EXPECT_NE(bad.find("line"), std::string::npos) << bad;
}

TEST(Scenario, SweepIsSortedAndValidated)
{
    const Scenario s = parse_scenario("sweep: {variable: n_side, values: [9, 3, 5, 3]}\n");
    ASSERT_TRUE(s.sweep);
    EXPECT_EQ(s.sweep->values, (std::vector<double>{3, 5, 9}));
    const Scenario r = parse_scenario("sweep: {variable: r2, from: 1, to: 3, step: 0.5}\n");
    EXPECT_EQ(r.sweep->values.size(), 5u);
    const Scenario a = parse_scenario("sweep: {variable: theta2, from: pi/20, to: 19pi/20, step: pi/20}\n");
    EXPECT_EQ(a.sweep->values.size(), 19u);
    EXPECT_NE(error_of("sweep: {variable: n_side, values: [3, 4]}\n").find("odd"), std::string::npos);
    EXPECT_THROW(s.with("n_side", 6), ScenarioError);
}

TEST(Scenario, YamlEchoRoundTrips)
{
    const Scenario s = parse_scenario("array: {n_side: 9}\nr2: 7.5\nmodel: FF\nsnr_db: [20, 25]\n");
    const std::string y = s.to_yaml();
    EXPECT_NE(y.find(tool_version), std::string::npos);
    EXPECT_EQ(y, s.to_yaml());
}

TEST(Csv, FormattingAndHeaderOnly)
{
    SweepResult r;
    r.columns = {"a", "b", "c"};
    EXPECT_EQ(csv(r), "a,b,c\n");
    r.rows.push_back({3LL, 1.0 / 3.0, std::string("x,y")});
    EXPECT_EQ(csv(r), "a,b,c\n3,0.333333333333,\"x,y\"\n");
    r.rows.push_back({1LL});
    EXPECT_THROW(csv(r), ConfigError);
}

TEST(Csv, EmptySweepGivesHeaderOnly)
{
    const Scenario s = parse_scenario("sweep: {variable: r2, values: []}\n");
    const SweepResult r = run_mac(s);
    EXPECT_TRUE(r.rows.empty());
    const std::string text = csv(r);
    EXPECT_EQ(text.substr(0, 5), "r2,M,");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST(Csv, SidecarHoldsProvenance)
{
    Scenario s = parse_scenario("array: {n_side: 5}\nsweep: {variable: r2, values: [4, 6]}\n");
    const SweepResult r = run_channel(s);
    const std::string path = ::testing::TempDir() + "nfcap_sidecar.csv";
    emit_csv(r, path);
    std::ifstream side(sidecar_path(path));
    std::stringstream ss;
    ss << side.rdbuf();
    EXPECT_NE(ss.str().find("command: channel"), std::string::npos);
    EXPECT_NE(ss.str().find("variable: r2"), std::string::npos);
    std::remove(path.c_str());
    std::remove(sidecar_path(path).c_str());
}

TEST(Runs, DeterministicAcrossThreadCounts)
{
    const Scenario s = parse_scenario("array: {n_side: 9}\nsweep: {variable: r2, from: 2, to: 8, step: 1}\n");
    RunOptions one, four;
    four.threads = 4;
    EXPECT_EQ(csv(run_mac(s, one)), csv(run_mac(s, four)));
    EXPECT_EQ(csv(run_bc(s, one)), csv(run_bc(s, one)));
}

TEST(Runs, ColumnsAndSortedRows)
{
    const Scenario s = parse_scenario("sweep: {variable: n_side, values: [33, 3, 9]}\n");
    const SweepResult r = run_mac(s);
    ASSERT_EQ(r.rows.size(), 3u);
    for (const auto &row : r.rows)
        EXPECT_EQ(row.size(), r.columns.size());
    EXPECT_EQ(std::get<long long>(r.rows[0][0]), 3);
    EXPECT_EQ(std::get<long long>(r.rows[2][0]), 33);
    EXPECT_EQ(std::get<long long>(r.rows[2][column(r, "M")]), 1089);
}

TEST(Runs, DownlinkRatioWithinUnitInterval)
{
    const SweepResult r = run_bc(parse_scenario("sweep: {variable: n_side, values: [3, 9, 33, 65, 129, 257]}\n"));
    for (const char *c : {"Gamma_mrt", "Gamma_zf"})
        for (const auto &row : r.rows)
        {
            EXPECT_GT(num(row[column(r, c)]), 0.0);
            EXPECT_LE(num(row[column(r, c)]), 1.0);
        }
}

TEST(Runs, MulticastPeaksAtCoLocatedUsers)
{
    // flat for r2 < r1, where user 1 alone sets the rate
    const Scenario s = parse_scenario("layout: same-direction\narray: {n_side: 65}\nsweep: {variable: r2, values: [9.5, 10, 10.5]}\n");
    const SweepResult r = run_mc(s);
    const std::size_t c = column(r, "C_mc");
    EXPECT_GE(num(r.rows[1][c]), num(r.rows[0][c]) - 1e-12);
    EXPECT_GT(num(r.rows[1][c]), num(r.rows[2][c]));
}

TEST(Runs, ErrorsCarrySweepContext)
{
    // r2 below the pitch makes epsilon exceed one
    Scenario s = parse_scenario("array: {n_side: 3}\n");
    s.sweep = SweepSpec{"r2", {0.01, 1.0}};
    try
    {
        run_mac(s);
        FAIL() << "expected an error";
    }
    catch (const std::exception &e)
    {
        EXPECT_NE(std::string(e.what()).find("r2"), std::string::npos) << e.what();
    }
}

TEST(Runs, ManyUsers)
{
    const Scenario s = parse_scenario("array: {n_side: 9}\nusers:\n  - {range: 10, theta: pi/3, phi: 2pi/3}\n  - {range: 5, theta: 2pi/3, phi: pi/3}\n"
                                      "  - {range: 7, theta: pi/2, phi: pi/2}\n");
    EXPECT_EQ(run_mac(s).columns, (std::vector<std::string>{"point", "M", "K", "C_mac"}));
    EXPECT_EQ(run_bc(s).rows.size(), 1u);
    EXPECT_EQ(run_mc(s).rows.size(), 1u);
    EXPECT_THROW(run_region(s), ScenarioError);
}

TEST(Runs, RegionRowsAreFlattenedVertices)
{
    const SweepResult r = run_region(parse_scenario("array: {n_side: 9}\nregion_samples: 5\n"));
    EXPECT_EQ(r.columns, (std::vector<std::string>{"point", "M", "set", "kind", "index", "R1", "R2"}));
    std::size_t mac = 0, ts = 0;
    for (const auto &row : r.rows)
    {
        mac += std::get<std::string>(row[2]) == "mac";
        ts += std::get<std::string>(row[2]) == "mac_time_sharing";
    }
    EXPECT_GE(mac, 4u);
    EXPECT_EQ(ts, 5u);
}

TEST(Verify, PassesAtSmallArrayAndFlagsFailures)
{
    const Scenario s = parse_scenario("array: {n_side: 9}\n");
    RunOptions o;
    o.verify = true;
    const SweepResult v = run_verify(s, o);
    EXPECT_FALSE(v.verification_failed);
    EXPECT_GE(v.rows.size(), 10u);
    for (const auto &row : v.rows)
        EXPECT_EQ(std::get<long long>(row.back()), 1) << std::get<std::string>(row[0]);

    SweepResult r = run_mac(parse_scenario("array: {n_side: 9}\nsweep: {variable: r2, values: [4, 6]}\n"), o);
    EXPECT_EQ(std::get<std::string>(r.rows[0][column(r, "verify")]), "pass");
    EXPECT_FALSE(r.verification_failed);
}

TEST(Verify, LargeArraysAreReduced)
{
    RunOptions o;
    o.verify = true;
    const SweepResult r = run_mac(parse_scenario("sweep: {variable: n_side, values: [9, 67]}\n"), o);
    EXPECT_EQ(std::get<std::string>(r.rows[1][column(r, "verify")]), "skipped");
    bool noted = false;
    for (const auto &n : r.notes)
        noted = noted || n.find("M <= 4225") != std::string::npos;
    EXPECT_TRUE(noted);
}

TEST(Presets, NamesAndColumns)
{
    EXPECT_EQ(preset_names().size(), 11u);
    EXPECT_THROW(reproduce("nope", Scenario{}), ConfigError);
    Scenario small;
    small.mx = small.mz = 9;
    const SweepResult r = reproduce("ccf-vs-direction", small);
    EXPECT_EQ(r.columns, (std::vector<std::string>{"theta2", "phi2", "rho_nf", "rho_nf_quadrature", "rho_ff"}));
    EXPECT_EQ(r.rows.size(), 361u);
}

TEST(Presets, MacVersusMColumns)
{
    const SweepResult r = reproduce("mac-vs-M", Scenario{});
    EXPECT_EQ(r.columns, (std::vector<std::string>{"M", "C_nf_dd", "C_nf_sd", "C_ff_dd", "C_ff_sd", "C_asym"}));
    EXPECT_EQ(r.rows.size(), 11u);
    EXPECT_EQ(std::get<long long>(r.rows.back()[0]), 2001LL * 2001LL);
    EXPECT_EQ(csv(r), csv(reproduce("mac-vs-M", Scenario{})));
}
