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

#ifndef NFCAP_EXPERIMENTS_EXPERIMENTS_HPP
#define NFCAP_EXPERIMENTS_EXPERIMENTS_HPP

#include "../bc.hpp"
#include "../channel_stats.hpp"
#include "../geometry.hpp"
#include "../mac.hpp"
#include "../mc.hpp"
#include "../oracle.hpp"
#include "../region.hpp"
#include "csv.hpp"
#include "scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace nfcap::experiments
{
    // Exact-vector oracles run only up to this many elements (65 x 65).
    inline constexpr double oracle_max_elements = 4225.0;
    // Explicit M x M downlink covariances are formed only up to 33 x 33.
    inline constexpr double covariance_max_elements = 1089.0;

    struct RunOptions
    {
        bool verify = false;
        unsigned threads = 1;
        std::optional<int> quadrature_T;
    };

    namespace detail
    {
        using Row = std::vector<Cell>;

        // Evaluates f(i) for i in [0, n) on a small thread pool; rows are returned in index order.
        inline std::vector<Row> parallel_rows(std::size_t n, unsigned threads, const std::function<Row(std::size_t)> &f)
        {
            std::vector<Row> rows(n);
            std::vector<std::exception_ptr> errors(n);
            std::atomic<std::size_t> next{0};
            auto worker = [&]
            {
                for (std::size_t i = next++; i < n; i = next++)
                {
                    try
                    {
                        rows[i] = f(i);
                    }
                    catch (...)
                    {
                        errors[i] = std::current_exception();
                    }
                }
            };
            const unsigned t = std::max(1u, std::min<unsigned>(threads, unsigned(std::max<std::size_t>(n, 1))));
            std::vector<std::thread> pool;
            for (unsigned i = 1; i < t; ++i)
                pool.emplace_back(worker);
            worker();
            for (auto &th : pool)
                th.join();
            for (auto &e : errors)
                if (e)
                    std::rethrow_exception(e);
            return rows;
        }

        struct SweepPoint
        {
            std::string label;
            Cell value;
            Scenario scenario;
        };

        inline Cell sweep_cell(const std::string &variable, double v)
        {
            if (variable == "n_side" || variable == "mx" || variable == "mz")
                return static_cast<long long>(v);
            return v;
        }

        inline std::vector<SweepPoint> sweep_points(const Scenario &s)
        {
            std::vector<SweepPoint> out;
            if (!s.sweep)
            {
                Scenario base = s;
                out.push_back({"point", 0LL, base});
                return out;
            }
            for (double v : s.sweep->values)
            {
                const Cell c = sweep_cell(s.sweep->variable, v);
                try
                {
                    out.push_back({s.sweep->variable, c, s.with(s.sweep->variable, v)});
                }
                catch (const std::exception &e)
                {
                    throw ConfigError("sweep point " + s.sweep->variable + "=" + format_cell(c) + ": " + e.what());
                }
            }
            return out;
        }

        inline void require_two_users(const Scenario &s, const char *what)
        {
            if (s.users.size() != 2)
                throw ScenarioError(std::string(what) + ": exactly two users required (scenario has " + std::to_string(s.users.size()) + ")");
        }

        inline int nodes(const Scenario &s, const RunOptions &o) { return o.quadrature_T.value_or(s.quadrature_T); }

        // Closed-form gain for the scenario's model.
        inline double model_gain(ChannelModel model, const ArrayGeometry &g, const UserLocation &u)
        {
            if (model == ChannelModel::far_field)
                return double(g.size()) * g.element_area() * u.dir_y() / (4.0 * std::numbers::pi * u.range() * u.range());
            return g.m_x() == 1 ? ula_gain_closed(g, u) : nf_gain_closed(g, u);
        }

        // Gains from the closed forms; CCF according to the configured method.
        inline LinkStats model_stats(ChannelModel model, const ArrayGeometry &g, const UserLocation &u1, const UserLocation &u2,
                                     CcfMethod method, int nodes_T)
        {
            LinkStats st{model_gain(model, g, u1), model_gain(model, g, u2), 0.0};
            if (model == ChannelModel::far_field)
                st.ccf_rho = ff_ccf_closed(g, u1, u2).value;
            else if (method == CcfMethod::quadrature || (method == CcfMethod::automatic && double(g.size()) > exact_ccf_max_elements))
                st.ccf_rho = nf_ccf_quadrature(g, u1, u2, nodes_T).value;
            else
                st.ccf_rho = link_stats_streaming(model, g, u1, u2).ccf_rho;
            return st;
        }

        inline LinkStats scenario_stats(const Scenario &s, const RunOptions &o, ChannelModel model)
        {
            const auto users = s.user_locations();
            return model_stats(model, s.geometry(), users.at(0), users.at(1), s.ccf_method, nodes(s, o));
        }

        inline AsymptoticParams asym_params(const Scenario &s)
        {
            const ArrayGeometry g = s.geometry();
            AsymptoticParams p;
            p.xi = g.occupation_ratio();
            p.pitch = g.pitch();
            p.element_area = g.element_area();
            p.m = double(g.size());
            p.users = s.user_locations();
            p.same_direction = p.users.size() == 2 && p.users[0].same_direction(p.users[1]);
            return p;
        }

        inline AsymptoticVariant asym_variant(const Scenario &s, ChannelModel model)
        {
            if (model == ChannelModel::far_field)
                return AsymptoticVariant::ff;
            return s.mx == 1 ? AsymptoticVariant::nf_ula : AsymptoticVariant::nf_upa;
        }

        inline bool oracle_sized(const ArrayGeometry &g) { return double(g.size()) <= oracle_max_elements; }

        inline std::vector<ChannelVector> channels(const Scenario &s, ChannelModel model)
        {
            const ArrayGeometry g = s.geometry();
            std::vector<ChannelVector> out;
            for (const auto &u : s.user_locations())
                out.push_back(channel_vector(model, g, u));
            return out;
        }

        inline std::string provenance(const Scenario &s, const std::string &command, const RunOptions &o)
        {
            std::string out = "command: " + command + "\n";
            out += fmt::format("verify: {}\n", o.verify ? "true" : "false");
            if (o.quadrature_T)
                out += fmt::format("quadrature_T_override: {}\n", *o.quadrature_T);
            out += "scenario:\n";
            std::string body = s.to_yaml();
            std::size_t pos = 0;
            while (pos < body.size())
            {
                const std::size_t nl = body.find('\n', pos);
                const std::string line = body.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
                if (!line.empty())
                    out += "  " + line + "\n";
                pos = nl == std::string::npos ? body.size() : nl + 1;
            }
            return out;
        }

        inline void append_checks(SweepResult &r, const std::vector<oracle::OracleReport> &checks, const std::string &where)
        {
            for (const auto &c : checks)
                if (!c.ok())
                {
                    r.verification_failed = true;
                    r.notes.push_back(fmt::format("verification failed at {}: {} closed={:.12g} oracle={:.12g} diff={:.3g} tol={:.3g}", where,
                                                  c.quantity_name, c.closed_form_value, c.oracle_value, c.abs_diff, c.tolerance));
                }
        }

        // Verification columns shared by the run_* drivers: worst ratio diff/tolerance and a pass flag.
        inline void verify_cells(Row &row, const std::vector<oracle::OracleReport> &checks)
        {
            if (checks.empty())
            {
                row.push_back(std::string("skipped"));
                row.push_back(std::string(""));
                return;
            }
            double worst = 0.0;
            bool ok = true;
            for (const auto &c : checks)
            {
                const double excess = c.one_sided ? std::max(0.0, c.oracle_value - c.closed_form_value) : c.abs_diff;
                worst = std::max(worst, c.tolerance > 0.0 ? excess / c.tolerance : excess);
                ok = ok && c.ok();
            }
            row.push_back(std::string(ok ? "pass" : "FAIL"));
            row.push_back(worst);
        }
    }

    // Oracle checks for a two-user scenario at its own geometry (caller limits M).
    inline std::vector<oracle::OracleReport> oracle_checks(const Scenario &s, const RunOptions &o, const std::string &scope)
    {
        using oracle::make_report;
        std::vector<oracle::OracleReport> out;
        const ArrayGeometry g = s.geometry();
        const auto users = s.user_locations();
        const auto hs = detail::channels(s, s.model);
        const double g1 = gain_exact(hs[0]);
        out.push_back(make_report("gain_1 closed vs element sum (rel)", detail::model_gain(s.model, g, users[0]) / g1, 1.0, 1e-2));
        if (users.size() < 2)
            return out;
        const double g2 = gain_exact(hs[1]);
        const double rho = ccf_exact(hs[0], hs[1]);
        out.push_back(make_report("gain_2 closed vs element sum (rel)", detail::model_gain(s.model, g, users[1]) / g2, 1.0, 1e-2));
        if (s.model == ChannelModel::near_field)
        {
            const double ref = oracle::ccf_sum_oracle(g, users[0], users[1]);
            out.push_back(make_report("rho exact vs 3-D element sum", rho, ref, 1e-12));
            out.push_back(make_report("rho quadrature vs 3-D element sum", nf_ccf_quadrature(g, users[0], users[1], detail::nodes(s, o)).value, ref, 0.02));
        }
        else
            out.push_back(make_report("rho FF closed vs inner product", ff_ccf_closed(g, users[0], users[1]).value, rho, 1e-9));

        if (scope == "channel")
            return out;
        const auto snr = s.snr_linear();
        const std::vector<double> gam = {snr[0], snr[1]};
        if (scope == "mac" || scope == "all")
        {
            const double c = mac_capacity_two_user(g1, g2, rho, gam[0], gam[1]);
            out.push_back(make_report("MAC sum capacity vs M x M log-det", c, oracle::logdet_capacity_oracle(hs, gam), 1e-9));
            const auto c12 = sic_rates_two_user(g1, g2, rho, gam[0], gam[1], SicOrder::U1_first);
            const auto ref = oracle::logdet_corner_rates_oracle(hs, gam, {1, 0});
            out.push_back(make_report("MAC corner R1 (user 1 decoded first) vs log-det", c12[0], ref[0], 1e-9));
            out.push_back(make_report("MAC corner R2 (user 1 decoded first) vs log-det", c12[1], ref[1], 1e-9));
        }
        const BcConfig bc = s.bc_cfg();
        if (scope == "bc" || scope == "all")
        {
            const double c = bc_capacity_two_user(g1, g2, rho, bc);
            out.push_back(make_report("BC capacity vs power grid (1e5 points)", c, oracle::bc_power_grid_oracle(g1, g2, rho, bc).value, 1e-6, true));
            out.push_back(make_report("BC capacity vs iterative water-filling", c, bc_capacity_general(hs, bc).capacity, 1e-8));
            if (double(g.size()) <= covariance_max_elements)
            {
                const auto alloc = bc_power_allocation_two_user(g1, g2, rho, bc);
                const auto cov = bc_covariance_recovery(hs[0], hs[1], alloc, bc);
                const auto dl = downlink_dpc_rates(hs[0], hs[1], cov, bc);
                const auto ul = sic_rates_two_user(g1, g2, rho, alloc.p[0] / bc.noise_var[0], alloc.p[1] / bc.noise_var[1], SicOrder::U1_first);
                out.push_back(make_report("downlink DPC R1 vs dual MAC", dl[0], ul[0], 1e-9));
                out.push_back(make_report("downlink DPC R2 vs dual MAC", dl[1], ul[1], 1e-9));
                out.push_back(make_report("covariance trace vs P (rel)", std::real(cov.sigma1.trace() + cov.sigma2.trace()) / bc.total_power, 1.0, 1e-6));
            }
        }
        if (scope == "mc" || scope == "all")
        {
            const auto nv = s.noise_vars();
            const double sd1 = std::sqrt(nv[0]), sd2 = std::sqrt(nv[1]);
            const double c = mc_capacity_two_user(g1, g2, rho, sd1, sd2, bc.total_power);
            const auto w = mc_beamformer_two_user(hs[0], hs[1], sd1, sd2);
            out.push_back(make_report("MC capacity vs min-rate of optimal beamformer", c, mc_rate_given_beamformer(w, hs, {nv[0], nv[1]}, bc.total_power), 1e-9));
            out.push_back(make_report("MC capacity vs beam grid (400x400x64)", c, oracle::mc_beam_grid_oracle(hs[0], hs[1], {nv[0], nv[1]}, bc.total_power).value, 1e-3, true));
            out.push_back(make_report("MC upper bound minus capacity", mc_upper_bound({g1, g2}, {nv[0], nv[1]}, bc.total_power), c, 0.0, true));
        }
        return out;
    }

    namespace detail
    {
        template <class RowFn>
        SweepResult run_sweep(const Scenario &s, const RunOptions &o, const std::string &command, std::vector<std::string> columns,
                              const std::string &verify_scope, RowFn row_fn)
        {
            SweepResult r;
            const auto pts = sweep_points(s);
            r.columns.push_back(pts.empty() ? s.sweep->variable : pts.front().label);
            for (auto &c : columns)
                r.columns.push_back(std::move(c));
            if (o.verify)
            {
                r.columns.push_back("verify");
                r.columns.push_back("verify_worst_ratio");
            }
            r.provenance = provenance(s, command, o);
            std::mutex mtx;
            std::vector<std::vector<oracle::OracleReport>> checks(pts.size());
            r.rows = parallel_rows(pts.size(), o.threads, [&](std::size_t i)
                                   {
                Row row{pts[i].value};
                try
                {
                    for (auto &c : row_fn(pts[i].scenario))
                        row.push_back(std::move(c));
                    if (o.verify)
                    {
                        if (oracle_sized(pts[i].scenario.geometry()))
                            checks[i] = oracle_checks(pts[i].scenario, o, verify_scope);
                        verify_cells(row, checks[i]);
                    }
                }
                catch (const std::exception &e)
                {
                    throw ConfigError(fmt::format("sweep point {}={}: {}", pts[i].label, format_cell(pts[i].value), e.what()));
                }
                return row; });
            if (o.verify)
            {
                bool skipped = false;
                for (std::size_t i = 0; i < pts.size(); ++i)
                {
                    if (checks[i].empty())
                        skipped = true;
                    append_checks(r, checks[i], fmt::format("{}={}", pts[i].label, format_cell(pts[i].value)));
                }
                r.notes.push_back(fmt::format("exact-vector oracles run only for M <= {:.0f} (65x65){}", oracle_max_elements,
                                              skipped ? "; larger sweep points were not verified" : ""));
            }
            return r;
        }
    }

    inline SweepResult run_channel(const Scenario &s, const RunOptions &o = {})
    {
        const bool two = s.users.size() >= 2;
        std::vector<std::string> cols = {"M", "model", "g1", "g1_exact"};
        if (two)
        {
            cols.insert(cols.end(), {"g2", "g2_exact", "rho"});
            cols.push_back(s.model == ChannelModel::near_field ? "rho_quadrature" : "rho_printed");
        }
        return detail::run_sweep(s, o, "channel", cols, "channel", [&](const Scenario &p)
                                 {
            const ArrayGeometry g = p.geometry();
            const auto users = p.user_locations();
            detail::Row row{static_cast<long long>(g.size()), std::string(to_string(p.model))};
            if (!two)
            {
                const auto h = channel_vector(p.model, g, users[0]);
                row.push_back(detail::model_gain(p.model, g, users[0]));
                row.push_back(gain_exact(h));
                return row;
            }
            const LinkStats ex = link_stats_streaming(p.model, g, users[0], users[1]);
            const LinkStats st = detail::model_stats(p.model, g, users[0], users[1], p.ccf_method, detail::nodes(p, o));
            row.insert(row.end(), {st.gain_1, ex.gain_1, st.gain_2, ex.gain_2, st.ccf_rho});
            if (p.model == ChannelModel::near_field)
                row.push_back(nf_ccf_quadrature(g, users[0], users[1], detail::nodes(p, o)).value);
            else
                row.push_back(ff_ccf_closed(g, users[0], users[1]).printed);
            return row; });
    }

    inline SweepResult run_mac(const Scenario &s, const RunOptions &o = {})
    {
        if (s.users.size() > 2)
            return detail::run_sweep(s, o, "mac", {"M", "K", "C_mac"}, "none", [&](const Scenario &p)
                                     {
                const auto hs = detail::channels(p, p.model);
                return detail::Row{static_cast<long long>(p.geometry().size()), static_cast<long long>(hs.size()), mac_capacity_general(hs, p.mac_cfg())}; });
        detail::require_two_users(s, "mac");
        return detail::run_sweep(s, o, "mac",
                                 {"M", "g1", "g2", "rho", "C_mac", "R1_u1_first", "R2_u1_first", "R1_u2_first", "R2_u2_first", "R_opt", "R_mrc",
                                  "R_zf", "C_bound", "C_asym"},
                                 "mac", [&](const Scenario &p)
                                 {
            const LinkStats st = detail::scenario_stats(p, o, p.model);
            const auto gam = p.snr_linear();
            const auto c12 = sic_rates_two_user(st.gain_1, st.gain_2, st.ccf_rho, gam[0], gam[1], SicOrder::U1_first);
            const auto c21 = sic_rates_two_user(st.gain_1, st.gain_2, st.ccf_rho, gam[0], gam[1], SicOrder::U2_first);
            return detail::Row{static_cast<long long>(p.geometry().size()), st.gain_1, st.gain_2, st.ccf_rho,
                               mac_capacity_two_user(st.gain_1, st.gain_2, st.ccf_rho, gam[0], gam[1]), c12[0], c12[1], c21[0], c21[1],
                               linear_combiner_sum_rate(Combiner::opt, st.gain_1, st.gain_2, st.ccf_rho, gam[0], gam[1]),
                               linear_combiner_sum_rate(Combiner::mrc, st.gain_1, st.gain_2, st.ccf_rho, gam[0], gam[1]),
                               linear_combiner_sum_rate(Combiner::zf, st.gain_1, st.gain_2, st.ccf_rho, gam[0], gam[1]),
                               mac_interference_free_bound(st.gain_1, st.gain_2, gam[0], gam[1]),
                               mac_asymptotics(detail::asym_variant(p, p.model), p.mac_cfg(), detail::asym_params(p))}; });
    }

    inline SweepResult run_bc(const Scenario &s, const RunOptions &o = {})
    {
        if (s.users.size() > 2)
            return detail::run_sweep(s, o, "bc", {"M", "K", "C_bc", "iterations"}, "none", [&](const Scenario &p)
                                     {
                const auto hs = detail::channels(p, p.model);
                const auto sol = bc_capacity_general(hs, p.bc_cfg());
                return detail::Row{static_cast<long long>(p.geometry().size()), static_cast<long long>(hs.size()), sol.capacity,
                                   static_cast<long long>(sol.iterations)}; });
        detail::require_two_users(s, "bc");
        return detail::run_sweep(s, o, "bc",
                                 {"M", "g1", "g2", "rho", "p1", "p2", "C_bc", "degenerate", "R_mrt", "R_zf", "Gamma_mrt", "Gamma_zf", "Gamma_dpc", "C_asym"},
                                 "bc", [&](const Scenario &p)
                                 {
            const LinkStats st = detail::scenario_stats(p, o, p.model);
            const BcConfig bc = p.bc_cfg();
            const auto a = bc_power_allocation_two_user(st.gain_1, st.gain_2, st.ccf_rho, bc);
            const double s1 = bc.total_power / 2.0 / bc.noise_var[0], s2 = bc.total_power / 2.0 / bc.noise_var[1];
            return detail::Row{static_cast<long long>(p.geometry().size()), st.gain_1, st.gain_2, st.ccf_rho, a.p[0], a.p[1],
                               bc_capacity_two_user(st.gain_1, st.gain_2, st.ccf_rho, bc), static_cast<long long>(a.degenerate),
                               linear_precoder_sum_rate(Precoder::mrt, st.gain_1, st.gain_2, st.ccf_rho, s1, s2),
                               linear_precoder_sum_rate(Precoder::zf, st.gain_1, st.gain_2, st.ccf_rho, s1, s2),
                               downlink_rate_ratio(Precoder::mrt, st.gain_1, st.gain_2, st.ccf_rho, s1, s2),
                               downlink_rate_ratio(Precoder::zf, st.gain_1, st.gain_2, st.ccf_rho, s1, s2),
                               downlink_dpc_ratio(st.gain_1, st.gain_2, st.ccf_rho, bc),
                               bc_asymptotics(detail::asym_variant(p, p.model), bc, detail::asym_params(p))}; });
    }

    inline const char *to_string(McBranch b)
    {
        return b == McBranch::user1_only ? "user1" : b == McBranch::user2_only ? "user2"
                                                                               : "balanced";
    }

    inline SweepResult run_mc(const Scenario &s, const RunOptions &o = {})
    {
        if (s.users.size() > 2)
            return detail::run_sweep(s, o, "mc", {"M", "K", "C_bound"}, "none", [&](const Scenario &p)
                                     {
                const ArrayGeometry g = p.geometry();
                std::vector<double> gains;
                for (const auto &u : p.user_locations())
                    gains.push_back(detail::model_gain(p.model, g, u));
                return detail::Row{static_cast<long long>(g.size()), static_cast<long long>(gains.size()), mc_upper_bound(gains, p.noise_vars(), p.total_power())}; });
        detail::require_two_users(s, "mc");
        return detail::run_sweep(s, o, "mc", {"M", "g1", "g2", "rho", "C_mc", "branch", "C_bound", "C_single_min", "C_asym"}, "mc",
                                 [&](const Scenario &p)
                                 {
            const LinkStats st = detail::scenario_stats(p, o, p.model);
            const auto nv = p.noise_vars();
            const double pw = p.total_power();
            const auto sol = mc_solution_two_user(st.gain_1, st.gain_2, st.ccf_rho, std::sqrt(nv[0]), std::sqrt(nv[1]));
            const double single = std::min(std::log2(1.0 + pw * st.gain_1 / nv[0]), std::log2(1.0 + pw * st.gain_2 / nv[1]));
            return detail::Row{static_cast<long long>(p.geometry().size()), st.gain_1, st.gain_2, st.ccf_rho,
                               mc_capacity_two_user(st.gain_1, st.gain_2, st.ccf_rho, std::sqrt(nv[0]), std::sqrt(nv[1]), pw),
                               std::string(to_string(sol.branch)), mc_upper_bound({st.gain_1, st.gain_2}, {nv[0], nv[1]}, pw), single,
                               mc_asymptotics(detail::asym_variant(p, p.model), p.mc_cfg(), detail::asym_params(p))}; });
    }

    namespace detail
    {
        inline void append_region(std::vector<Row> &rows, const Row &prefix, const std::string &set, const RateRegion &region)
        {
            const auto emit = [&](const std::string &name, const std::vector<RatePoint> &pts)
            {
                for (std::size_t i = 0; i < pts.size(); ++i)
                {
                    Row r = prefix;
                    r.insert(r.end(), {name, std::string(to_string(region.kind)), static_cast<long long>(i), pts[i][0], pts[i][1]});
                    rows.push_back(std::move(r));
                }
            };
            emit(set, region.vertices);
            if (!region.time_sharing.empty())
                emit(set + "_time_sharing", region.time_sharing);
        }
    }

    // MAC pentagon (with time-sharing samples) and BC hull for each sweep point, one vertex per row.
    inline SweepResult run_region(const Scenario &s, const RunOptions &o = {})
    {
        detail::require_two_users(s, "region");
        SweepResult r;
        const auto pts = detail::sweep_points(s);
        r.columns = {pts.empty() ? s.sweep->variable : pts.front().label, "M", "set", "kind", "index", "R1", "R2"};
        r.provenance = detail::provenance(s, "region", o);
        const auto blocks = detail::parallel_rows(pts.size(), o.threads, [&](std::size_t i)
                                                  {
            const Scenario &p = pts[i].scenario;
            const LinkStats st = detail::scenario_stats(p, o, p.model);
            const auto gam = p.snr_linear();
            std::vector<detail::Row> rows;
            const detail::Row prefix{pts[i].value, static_cast<long long>(p.geometry().size())};
            detail::append_region(rows, prefix, "mac", mac_region_two_user(st.gain_1, st.gain_2, st.ccf_rho, gam[0], gam[1], p.region_samples));
            detail::append_region(rows, prefix, "bc", bc_region_two_user(st.gain_1, st.gain_2, st.ccf_rho, p.bc_cfg(), p.region_samples));
            detail::Row packed;
            for (auto &row : rows)
                for (auto &c : row)
                    packed.push_back(std::move(c));
            return packed; });
        const std::size_t width = r.columns.size();
        for (const auto &b : blocks)
            for (std::size_t k = 0; k + width <= b.size(); k += width)
                r.rows.emplace_back(b.begin() + long(k), b.begin() + long(k + width));
        return r;
    }

    // Oracle report for a scenario; geometries above 65 x 65 are reduced to 65 x 65.
    inline SweepResult run_verify(const Scenario &s, const RunOptions &o = {})
    {
        detail::require_two_users(s, "verify");
        Scenario v = s;
        v.sweep.reset();
        SweepResult r;
        r.columns = {"quantity", "M", "closed_form", "oracle", "abs_diff", "rel_diff", "tolerance", "one_sided", "ok"};
        if (!detail::oracle_sized(v.geometry()))
        {
            r.notes.push_back(fmt::format("array reduced from {}x{} to 65x65 for the exact-vector oracles", v.mx, v.mz));
            v.mx = std::min(v.mx, 65);
            v.mz = std::min(v.mz, 65);
            if (!detail::oracle_sized(v.geometry()))
                v.mx = v.mz = 65;
        }
        if (double(v.geometry().size()) > covariance_max_elements)
            r.notes.push_back(fmt::format("downlink covariance checks need M <= {:.0f} and were skipped", covariance_max_elements));
        r.provenance = detail::provenance(v, "verify", o);
        const auto checks = oracle_checks(v, o, "all");
        for (const auto &c : checks)
            r.rows.push_back({c.quantity_name, static_cast<long long>(v.geometry().size()), c.closed_form_value, c.oracle_value, c.abs_diff,
                              c.rel_diff, c.tolerance, static_cast<long long>(c.one_sided), static_cast<long long>(c.ok())});
        detail::append_checks(r, checks, "verify");
        return r;
    }

    // ---------------------------------------------------------------- figure presets

    namespace detail
    {
        inline const std::vector<double> &m_sweep_sides()
        {
            static const std::vector<double> v = {3, 5, 9, 17, 33, 65, 129, 257, 513, 1001, 2001};
            return v;
        }

        inline Scenario same_direction(Scenario s)
        {
            s.users[1].theta = s.users[0].theta;
            s.users[1].phi = s.users[0].phi;
            return s;
        }

        inline Scenario different_direction(Scenario s)
        {
            s.users[1].theta = 2.0 * std::numbers::pi / 3.0;
            s.users[1].phi = std::numbers::pi / 3.0;
            return s;
        }

        inline Scenario with_side(Scenario s, double n)
        {
            s.mx = s.mz = int(n);
            return s;
        }

        using Capacity = std::function<double(const Scenario &, const LinkStats &)>;

        inline Capacity mac_capacity_fn()
        {
            return [](const Scenario &s, const LinkStats &st)
            {
                const auto g = s.snr_linear();
                return mac_capacity_two_user(st.gain_1, st.gain_2, st.ccf_rho, g[0], g[1]);
            };
        }

        inline Capacity bc_capacity_fn()
        {
            return [](const Scenario &s, const LinkStats &st)
            { return bc_capacity_two_user(st.gain_1, st.gain_2, st.ccf_rho, s.bc_cfg()); };
        }

        inline Capacity mc_capacity_fn()
        {
            return [](const Scenario &s, const LinkStats &st)
            {
                const auto nv = s.noise_vars();
                return mc_capacity_two_user(st.gain_1, st.gain_2, st.ccf_rho, std::sqrt(nv[0]), std::sqrt(nv[1]), s.total_power());
            };
        }

        // C for (NF, FF) x (different, same direction) at one scenario.
        inline Row four_curves(const Scenario &s, const RunOptions &o, const Capacity &cap)
        {
            Row row;
            for (ChannelModel m : {ChannelModel::near_field, ChannelModel::far_field})
                for (bool same : {false, true})
                {
                    const Scenario p = same ? same_direction(s) : different_direction(s);
                    row.push_back(cap(p, scenario_stats(p, o, m)));
                }
            return row;
        }

        inline SweepResult capacity_vs_m(const Scenario &base, const RunOptions &o, const std::string &name, const Capacity &cap,
                                         const std::function<double(const Scenario &)> &asym)
        {
            detail::require_two_users(base, name.c_str());
            SweepResult r;
            r.columns = {"M", "C_nf_dd", "C_nf_sd", "C_ff_dd", "C_ff_sd", "C_asym"};
            r.provenance = provenance(base, "reproduce " + name, o);
            const auto &sides = m_sweep_sides();
            r.rows = parallel_rows(sides.size(), o.threads, [&](std::size_t i)
                                   {
                const Scenario s = with_side(base, sides[i]);
                Row row{static_cast<long long>(s.geometry().size())};
                for (auto &c : four_curves(s, o, cap))
                    row.push_back(std::move(c));
                row.push_back(asym(s));
                return row; });
            return r;
        }

        inline SweepResult preset_mac_vs_m(const Scenario &base, const RunOptions &o)
        {
            return capacity_vs_m(base, o, "mac-vs-M", mac_capacity_fn(), [](const Scenario &s)
                                 { return mac_asymptotic_nf_upa(s.geometry().occupation_ratio(), s.mac_cfg()); });
        }

        inline SweepResult preset_bc_vs_m(const Scenario &base, const RunOptions &o)
        {
            return capacity_vs_m(base, o, "bc-vs-M", bc_capacity_fn(), [](const Scenario &s)
                                 { return bc_asymptotics(AsymptoticVariant::nf_upa, s.bc_cfg(), asym_params(s)); });
        }

        inline SweepResult preset_mc_vs_m(const Scenario &base, const RunOptions &o)
        {
            detail::require_two_users(base, "mc-vs-M");
            SweepResult r;
            r.columns = {"M", "xi", "C_nf_dd", "C_nf_sd", "C_ff_dd", "C_ff_sd", "C_asym"};
            r.provenance = provenance(base, "reproduce mc-vs-M", o);
            const std::vector<double> xis = {0.25, 1.0 / std::numbers::pi, 0.5};
            const auto &sides = m_sweep_sides();
            r.rows = parallel_rows(sides.size() * xis.size(), o.threads, [&](std::size_t i)
                                   {
                Scenario s = with_side(base, sides[i / xis.size()]);
                s.xi = xis[i % xis.size()];
                Row row{static_cast<long long>(s.geometry().size()), *s.xi};
                for (auto &c : four_curves(s, o, mc_capacity_fn()))
                    row.push_back(std::move(c));
                row.push_back(mc_asymptotics(AsymptoticVariant::nf_upa, s.mc_cfg(), asym_params(s)));
                return row; });
            return r;
        }

        inline SweepResult preset_mc_vs_r2(const Scenario &base, const RunOptions &o)
        {
            detail::require_two_users(base, "mc-vs-r2");
            SweepResult r;
            r.columns = {"r2", "C_nf_dd", "C_nf_sd", "C_ff_dd", "C_ff_sd", "gap_ff_asym"};
            r.provenance = provenance(base, "reproduce mc-vs-r2", o);
            std::vector<double> r2;
            for (int i = 2; i <= 40; ++i)
                r2.push_back(0.5 * i);
            r.rows = parallel_rows(r2.size(), o.threads, [&](std::size_t i)
                                   {
                Scenario s = with_side(base, 551);
                s.users[1].range = r2[i];
                Row row{r2[i]};
                for (auto &c : four_curves(s, o, mc_capacity_fn()))
                    row.push_back(std::move(c));
                const auto p = asym_params(s);
                row.push_back(mc_asymptotic_ff(*p.m, *p.element_area, s.total_power(), s.noise_vars(), p.users[0], p.users[1]).gap);
                return row; });
            return r;
        }

        inline SweepResult preset_ccf_vs_direction(const Scenario &base, const RunOptions &o)
        {
            detail::require_two_users(base, "ccf-vs-direction");
            SweepResult r;
            r.columns = {"theta2", "phi2", "rho_nf", "rho_nf_quadrature", "rho_ff"};
            r.provenance = provenance(base, "reproduce ccf-vs-direction", o);
            const int n = 19;
            r.rows = parallel_rows(std::size_t(n * n), o.threads, [&](std::size_t i)
                                   {
                Scenario s = with_side(base, 65);
                s.users[1].theta = std::numbers::pi * double(i / n + 1) / 20.0;
                s.users[1].phi = std::numbers::pi * double(i % n + 1) / 20.0;
                const ArrayGeometry g = s.geometry();
                const auto u = s.user_locations();
                return Row{s.users[1].theta, s.users[1].phi, link_stats_streaming(ChannelModel::near_field, g, u[0], u[1]).ccf_rho,
                           nf_ccf_quadrature(g, u[0], u[1], nodes(s, o)).value, ff_ccf_closed(g, u[0], u[1]).value}; });
            return r;
        }

        inline SweepResult preset_angle_perturbation(const Scenario &base, const RunOptions &o)
        {
            detail::require_two_users(base, "angle-perturbation");
            SweepResult r;
            r.columns = {"dtheta", "dphi", "C_mac_nf", "C_mac_ff"};
            r.provenance = provenance(base, "reproduce angle-perturbation", o);
            const int n = 11;
            r.rows = parallel_rows(std::size_t(n * n), o.threads, [&](std::size_t i)
                                   {
                Scenario s = same_direction(with_side(base, 45));
                const double dt = std::numbers::pi / 600.0 * double(i / n), dp = std::numbers::pi / 600.0 * double(i % n);
                s.users[1].theta += dt;
                s.users[1].phi += dp;
                const auto cap = mac_capacity_fn();
                return Row{dt, dp, cap(s, scenario_stats(s, o, ChannelModel::near_field)), cap(s, scenario_stats(s, o, ChannelModel::far_field))}; });
            return r;
        }

        // Region vertices for (model, layout) combinations at the given sides.
        inline SweepResult regions(const Scenario &base, const RunOptions &o, const std::string &name, const std::vector<double> &sides,
                                   bool mac, bool bc)
        {
            detail::require_two_users(base, name.c_str());
            SweepResult r;
            r.columns = {"M", "channel", "model", "layout", "kind", "index", "R1", "R2"};
            r.provenance = provenance(base, "reproduce " + name, o);
            struct Job
            {
                double side;
                ChannelModel model;
                bool same;
            };
            std::vector<Job> jobs;
            for (double n : sides)
                for (ChannelModel m : {ChannelModel::near_field, ChannelModel::far_field})
                    for (bool same : {false, true})
                        jobs.push_back({n, m, same});
            const std::size_t width = r.columns.size();
            const auto blocks = parallel_rows(jobs.size(), o.threads, [&](std::size_t i)
                                              {
                const Job &j = jobs[i];
                const Scenario s = j.same ? same_direction(with_side(base, j.side)) : different_direction(with_side(base, j.side));
                const LinkStats st = scenario_stats(s, o, j.model);
                const auto gam = s.snr_linear();
                Row packed;
                const auto emit = [&](const char *channel, const RateRegion &reg)
                {
                    for (std::size_t k = 0; k < reg.vertices.size(); ++k)
                    {
                        const Row row{static_cast<long long>(s.geometry().size()), std::string(channel), std::string(to_string(j.model)),
                                      std::string(j.same ? "SD" : "DD"), std::string(to_string(reg.kind)), static_cast<long long>(k),
                                      reg.vertices[k][0], reg.vertices[k][1]};
                        packed.insert(packed.end(), row.begin(), row.end());
                    }
                };
                if (mac)
                    emit("mac", mac_region_two_user(st.gain_1, st.gain_2, st.ccf_rho, gam[0], gam[1], s.region_samples));
                if (bc)
                    emit("bc", bc_region_two_user(st.gain_1, st.gain_2, st.ccf_rho, s.bc_cfg(), s.region_samples));
                return packed; });
            for (const auto &b : blocks)
                for (std::size_t k = 0; k + width <= b.size(); k += width)
                    r.rows.emplace_back(b.begin() + long(k), b.begin() + long(k + width));
            return r;
        }

        // Linear-scheme ratios against the interference-free bound, UT 2 co-directional or slightly offset.
        inline SweepResult linear_vs_m(const Scenario &base, const RunOptions &o, bool uplink)
        {
            const std::string name = uplink ? "combiners-vs-M" : "precoders-vs-M";
            detail::require_two_users(base, name.c_str());
            SweepResult r;
            r.columns = uplink ? std::vector<std::string>{"M", "layout", "Gamma_opt", "Gamma_mrc", "Gamma_zf", "Gamma_capacity"}
                               : std::vector<std::string>{"M", "layout", "Gamma_mrt", "Gamma_zf", "Gamma_dpc"};
            r.provenance = provenance(base, "reproduce " + name, o);
            const auto &sides = m_sweep_sides();
            r.rows = parallel_rows(sides.size() * 2, o.threads, [&](std::size_t i)
                                   {
                Scenario s = same_direction(with_side(base, sides[i / 2]));
                const bool offset = i % 2 == 1;
                if (offset)
                {
                    s.users[1].theta += std::numbers::pi / 60.0;
                    s.users[1].phi += std::numbers::pi / 60.0;
                }
                const LinkStats st = scenario_stats(s, o, ChannelModel::near_field);
                Row row{static_cast<long long>(s.geometry().size()), std::string(offset ? "offset" : "SD")};
                if (uplink)
                {
                    const auto g = s.snr_linear();
                    const double bound = mac_interference_free_bound(st.gain_1, st.gain_2, g[0], g[1]);
                    for (Combiner c : {Combiner::opt, Combiner::mrc, Combiner::zf})
                        row.push_back(linear_combiner_sum_rate(c, st.gain_1, st.gain_2, st.ccf_rho, g[0], g[1]) / bound);
                    row.push_back(mac_capacity_two_user(st.gain_1, st.gain_2, st.ccf_rho, g[0], g[1]) / bound);
                }
                else
                {
                    const BcConfig bc = s.bc_cfg();
                    const double s1 = bc.total_power / 2.0 / bc.noise_var[0], s2 = bc.total_power / 2.0 / bc.noise_var[1];
                    row.push_back(downlink_rate_ratio(Precoder::mrt, st.gain_1, st.gain_2, st.ccf_rho, s1, s2));
                    row.push_back(downlink_rate_ratio(Precoder::zf, st.gain_1, st.gain_2, st.ccf_rho, s1, s2));
                    row.push_back(downlink_dpc_ratio(st.gain_1, st.gain_2, st.ccf_rho, bc));
                }
                return row; });
            return r;
        }
    }

    inline const std::vector<std::string> &preset_names()
    {
        static const std::vector<std::string> v = {"ccf-vs-direction", "mac-vs-M",  "bc-vs-M",        "mc-vs-M",        "mc-vs-r2",          "angle-perturbation",
                                                   "mac-regions",      "bc-regions", "regions-vs-M", "combiners-vs-M", "precoders-vs-M"};
        return v;
    }

    // Figure data named after the figure captions. `base` supplies everything except the swept quantities.
    inline SweepResult reproduce(const std::string &preset, const Scenario &base, const RunOptions &o = {})
    {
        Scenario b = base;
        b.sweep.reset();
        if (preset == "ccf-vs-direction")
            return detail::preset_ccf_vs_direction(b, o);
        if (preset == "mac-vs-M")
            return detail::preset_mac_vs_m(b, o);
        if (preset == "bc-vs-M")
            return detail::preset_bc_vs_m(b, o);
        if (preset == "mc-vs-M")
            return detail::preset_mc_vs_m(b, o);
        if (preset == "mc-vs-r2")
            return detail::preset_mc_vs_r2(b, o);
        if (preset == "angle-perturbation")
            return detail::preset_angle_perturbation(b, o);
        if (preset == "mac-regions")
            return detail::regions(b, o, preset, {65}, true, false);
        if (preset == "bc-regions")
            return detail::regions(b, o, preset, {65}, false, true);
        if (preset == "regions-vs-M")
            return detail::regions(b, o, preset, {9, 33, 65, 129, 257}, true, true);
        if (preset == "combiners-vs-M")
            return detail::linear_vs_m(b, o, true);
        if (preset == "precoders-vs-M")
            return detail::linear_vs_m(b, o, false);
        throw ConfigError("unknown preset '" + preset + "'");
    }
}

#endif
