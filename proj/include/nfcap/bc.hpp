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

#ifndef NFCAP_BC_HPP
#define NFCAP_BC_HPP

#include "channel_stats.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "mac.hpp"
#include "region.hpp"
#include "types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace nfcap
{
    // Iterative solver stopped without meeting its tolerance; carries the best iterate found.
    class ConvergenceError : public NumericError
    {
    public:
        ConvergenceError(const std::string &what, double best_value, PowerAllocation best_allocation)
            : NumericError(what), value(best_value), allocation(std::move(best_allocation)) {}

        double value;
        PowerAllocation allocation;
    };

    namespace detail
    {
        inline void check_two_user_bc(const BcConfig &cfg, const char *where)
        {
            cfg.validate();
            if (cfg.noise_var.size() != 2)
                throw ConfigError(std::string(where) + ": two noise variances required");
        }
    }

    // Sum-power optimal dual-MAC allocation for two users.
    inline PowerAllocation bc_power_allocation_two_user(double g1, double g2, double rho, const BcConfig &cfg)
    {
        constexpr const char *where = "bc_power_allocation_two_user";
        detail::check_two_user_bc(cfg, where);
        detail::check_nonneg(g1, "g1", where);
        detail::check_nonneg(g2, "g2", where);
        detail::check_rho(rho, where);
        const double p = cfg.total_power;
        const double a1 = g1 / cfg.noise_var[0], a2 = g2 / cfg.noise_var[1];

        PowerAllocation out;
        if (a1 == 0.0 && a2 == 0.0)
        {
            out.p = {p / 2.0, p / 2.0};
            return out;
        }
        if (a2 == 0.0)
        {
            out.p = {p, 0.0};
            return out;
        }
        if (a1 == 0.0)
        {
            out.p = {0.0, p};
            return out;
        }
        const double c = 1.0 - rho;
        if (c < 1e-9)
        {
            out.p = a1 >= a2 ? std::vector<double>{p, 0.0} : std::vector<double>{0.0, p};
            out.degenerate = true;
            return out;
        }
        const double kappa1 = (p * a1 * a2 * c - a1 + a2) / (2.0 * a1 * c);
        const double kappa2 = (p * a1 * a2 * c + a1 - a2) / (2.0 * a2 * c);
        if (kappa1 <= 0.0)
            out.p = {p, 0.0};
        else if (kappa2 <= 0.0)
            out.p = {0.0, p};
        else
            out.p = {kappa2 / a1, kappa1 / a2};
        return out;
    }

    // Dual-MAC sum rate log2(1 + t1 g1 + t2 g2 + t1 t2 g1 g2 (1 - rho)) with t_k = p_k / sigma_k^2.
    inline double dual_mac_sum_rate(double g1, double g2, double rho, double p1, double p2, const BcConfig &cfg)
    {
        detail::check_two_user_bc(cfg, "dual_mac_sum_rate");
        return mac_capacity_two_user(g1, g2, rho, p1 / cfg.noise_var[0], p2 / cfg.noise_var[1]);
    }

    inline double bc_capacity_two_user(double g1, double g2, double rho, const BcConfig &cfg)
    {
        const PowerAllocation a = bc_power_allocation_two_user(g1, g2, rho, cfg);
        return dual_mac_sum_rate(g1, g2, rho, a.p[0], a.p[1], cfg);
    }

    // Downlink covariances reproducing the dual-MAC rates, encoding order 2 -> 1.
    // Works on noise-normalized channels h_k / sigma_k.
    inline CovariancePair bc_covariance_recovery(const ChannelVector &h1, const ChannelVector &h2, const PowerAllocation &alloc,
                                                 const BcConfig &cfg)
    {
        constexpr const char *where = "bc_covariance_recovery";
        detail::check_two_user_bc(cfg, where);
        if (alloc.p.size() != 2)
            throw ConfigError(std::string(where) + ": two powers required");
        if (h1.entries.size() != h2.entries.size())
            throw ConfigError(std::string(where) + ": channel vectors differ in length");
        const Eigen::Index m = h1.entries.size();
        const double p1 = alloc.p[0], p2 = alloc.p[1];
        detail::check_nonneg(p1, "p1", where);
        detail::check_nonneg(p2, "p2", where);

        CovariancePair out{Eigen::MatrixXcd::Zero(m, m), Eigen::MatrixXcd::Zero(m, m)};
        const Eigen::VectorXcd b1 = h1.entries / std::sqrt(cfg.noise_var[0]);
        const Eigen::VectorXcd b2 = h2.entries / std::sqrt(cfg.noise_var[1]);
        const double gb2 = b2.squaredNorm();

        if (p1 > 0.0)
        {
            // Lambda h1 = h1 - p2 h2 (h2^H h1) / (1 + p2 |h2|^2)
            const Eigen::VectorXcd lb1 = b1 - (p2 * b2.dot(b1) / (1.0 + p2 * gb2)) * b2;
            const double q = std::real(b1.dot(lb1));
            if (!(q > 0.0))
                throw DomainError(std::string(where) + ": user 1 channel is zero");
            out.sigma1 = (p1 / q) * lb1 * lb1.adjoint();
        }
        if (p2 > 0.0)
        {
            if (!(gb2 > 0.0))
                throw DomainError(std::string(where) + ": user 2 channel is zero");
            const double x = std::real(b2.dot(out.sigma1 * b2));
            out.sigma2 = (p2 * (1.0 + x) / gb2) * b2 * b2.adjoint();
        }
        return out;
    }

    // Downlink DPC rates for encoding order 2 -> 1: user 1 is interference-free, user 2 sees Sigma_1.
    inline RatePoint downlink_dpc_rates(const ChannelVector &h1, const ChannelVector &h2, const CovariancePair &cov, const BcConfig &cfg)
    {
        detail::check_two_user_bc(cfg, "downlink_dpc_rates");
        const double s11 = std::real(h1.entries.dot(cov.sigma1 * h1.entries)) / cfg.noise_var[0];
        const double s21 = std::real(h2.entries.dot(cov.sigma1 * h2.entries)) / cfg.noise_var[1];
        const double s22 = std::real(h2.entries.dot(cov.sigma2 * h2.entries)) / cfg.noise_var[1];
        return {{detail::log2_1p(std::max(s11, 0.0)), detail::log2_1p(std::max(s22, 0.0) / (1.0 + std::max(s21, 0.0)))}};
    }

    // Dual-MAC region for a fixed split; its corners lie on the BC boundary.
    inline RateRegion bc_dual_mac_region(double g1, double g2, double rho, double p1, double p2, const BcConfig &cfg,
                                         int time_share_samples = 101)
    {
        detail::check_two_user_bc(cfg, "bc_dual_mac_region");
        return mac_region_two_user(g1, g2, rho, p1 / cfg.noise_var[0], p2 / cfg.noise_var[1], time_share_samples);
    }

    // BC region as the convex hull of the dual-MAC regions over p1 in {0, P/(n-1), ..., P}, p2 = P - p1.
    inline RateRegion bc_region_two_user(double g1, double g2, double rho, const BcConfig &cfg, int power_splits = 101)
    {
        constexpr const char *where = "bc_region_two_user";
        detail::check_two_user_bc(cfg, where);
        if (power_splits < 2)
            throw ConfigError(std::string(where) + ": at least 2 power splits required");
        std::vector<RatePoint> corners;
        corners.reserve(2 * std::size_t(power_splits));
        for (int i = 0; i < power_splits; ++i)
        {
            const double p1 = cfg.total_power * double(i) / double(power_splits - 1);
            const double p2 = cfg.total_power * double(power_splits - 1 - i) / double(power_splits - 1);
            const double t1 = p1 / cfg.noise_var[0], t2 = p2 / cfg.noise_var[1];
            corners.push_back(sic_rates_two_user(g1, g2, rho, t1, t2, SicOrder::U1_first));
            corners.push_back(sic_rates_two_user(g1, g2, rho, t1, t2, SicOrder::U2_first));
        }
        RateRegion region;
        region.kind = RegionKind::hull;
        region.vertices = comprehensive_hull(corners);
        return region;
    }

    inline RateRegion bc_region_two_user(const ChannelVector &h1, const ChannelVector &h2, const BcConfig &cfg, int power_splits = 101)
    {
        return bc_region_two_user(gain_exact(h1), gain_exact(h2), ccf_exact(h1, h2), cfg, power_splits);
    }

    struct BcSolution
    {
        double capacity = 0.0;
        PowerAllocation allocation;
        int iterations = 0;
    };

    namespace detail
    {
        // log2 det(I + sum_k p_k hbar_k hbar_k^H) from the Gram matrix of noise-normalized channels.
        inline double dual_mac_objective(const Eigen::MatrixXcd &gram, const std::vector<double> &p)
        {
            const auto k = gram.rows();
            Eigen::VectorXd s(k);
            for (Eigen::Index i = 0; i < k; ++i)
                s[i] = std::sqrt(p[std::size_t(i)]);
            return logdet_i_plus(s.asDiagonal() * gram * s.asDiagonal()) / std::numbers::ln2;
        }

        // Effective single-user gains hbar_k^H (I + sum_{j != k} p_j hbar_j hbar_j^H)^{-1} hbar_k.
        inline std::vector<double> effective_gains(const Eigen::MatrixXcd &gram, const std::vector<double> &p)
        {
            const auto kk = gram.rows();
            std::vector<double> out(static_cast<std::size_t>(kk));
            for (Eigen::Index k = 0; k < kk; ++k)
            {
                const Eigen::Index n = kk - 1;
                double g = std::real(gram(k, k));
                if (n > 0)
                {
                    Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(n, n);
                    Eigen::VectorXcd a(n);
                    for (Eigen::Index i = 0, ii = 0; i < kk; ++i)
                    {
                        if (i == k)
                            continue;
                        const double si = std::sqrt(p[std::size_t(i)]);
                        a[ii] = si * gram(i, k);
                        for (Eigen::Index j = 0, jj = 0; j < kk; ++j)
                        {
                            if (j == k)
                                continue;
                            b(ii, jj) += si * std::sqrt(p[std::size_t(j)]) * gram(i, j);
                            ++jj;
                        }
                        ++ii;
                    }
                    Eigen::LLT<Eigen::MatrixXcd> llt(b);
                    g -= std::real(a.dot(llt.solve(a)));
                }
                out[std::size_t(k)] = std::max(g, 0.0);
            }
            return out;
        }

        // Water-filling of total power over parallel channels with gains g: p_k = max(0, nu - 1/g_k).
        inline std::vector<double> water_fill(const std::vector<double> &g, double total)
        {
            std::vector<std::size_t> idx;
            for (std::size_t k = 0; k < g.size(); ++k)
                if (g[k] > 0.0)
                    idx.push_back(k);
            std::vector<double> p(g.size(), 0.0);
            if (idx.empty())
            {
                std::fill(p.begin(), p.end(), total / double(g.size()));
                return p;
            }
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b)
                      { return g[a] > g[b] || (g[a] == g[b] && a < b); });
            double nu = 0.0;
            std::size_t active = idx.size();
            for (; active >= 1; --active)
            {
                double inv = 0.0;
                for (std::size_t i = 0; i < active; ++i)
                    inv += 1.0 / g[idx[i]];
                nu = (total + inv) / double(active);
                if (nu - 1.0 / g[idx[active - 1]] > 0.0)
                    break;
            }
            for (std::size_t i = 0; i < active; ++i)
                p[idx[i]] = std::max(0.0, nu - 1.0 / g[idx[i]]);
            return p;
        }
    }

    inline constexpr double default_iwf_tolerance = 1e-10;
    inline constexpr int default_iwf_max_iter = 100000;

    // Sum-power iterative water-filling on the dual MAC. Each step water-fills against the current
    // interference and moves 1/K of the way towards the result.
    inline BcSolution bc_capacity_general(const std::vector<ChannelVector> &channels, const BcConfig &cfg,
                                          double tol = default_iwf_tolerance, int max_iter = default_iwf_max_iter)
    {
        constexpr const char *where = "bc_capacity_general";
        cfg.validate();
        if (cfg.noise_var.size() != channels.size())
            throw ConfigError(std::string(where) + ": one noise variance per channel required");
        if (!(tol > 0.0) || max_iter < 1)
            throw ConfigError(std::string(where) + ": tolerance must be positive and max_iter at least 1");
        std::vector<double> inv_noise(cfg.noise_var.size());
        for (std::size_t k = 0; k < inv_noise.size(); ++k)
            inv_noise[k] = 1.0 / cfg.noise_var[k];
        const Eigen::MatrixXcd hb = detail::scaled_columns(channels, inv_noise, where);
        const Eigen::MatrixXcd gram = hb.adjoint() * hb;
        const std::size_t k_users = channels.size();
        const double kd = double(k_users);

        BcSolution sol;
        sol.allocation.p.assign(k_users, cfg.total_power / kd);
        if (k_users == 1)
        {
            sol.capacity = detail::dual_mac_objective(gram, sol.allocation.p);
            return sol;
        }
        double value = detail::dual_mac_objective(gram, sol.allocation.p);
        double best = value;
        PowerAllocation best_alloc = sol.allocation;
        for (int it = 1; it <= max_iter; ++it)
        {
            const auto g = detail::effective_gains(gram, sol.allocation.p);
            const auto target = detail::water_fill(g, cfg.total_power);
            for (std::size_t k = 0; k < k_users; ++k)
                sol.allocation.p[k] = target[k] / kd + (kd - 1.0) / kd * sol.allocation.p[k];
            const double next = detail::dual_mac_objective(gram, sol.allocation.p);
            if (next > best)
            {
                best = next;
                best_alloc = sol.allocation;
            }
            if (std::abs(next - value) < tol)
            {
                sol.capacity = best;
                sol.allocation = best_alloc;
                sol.iterations = it;
                return sol;
            }
            value = next;
        }
        throw ConvergenceError(std::string(where) + ": no convergence after " + std::to_string(max_iter) + " iterations", best, best_alloc);
    }

    enum class Precoder
    {
        mrt,
        zf
    };

    inline const char *to_string(Precoder p) { return p == Precoder::mrt ? "mrt" : "zf"; }

    // Sum rate of a two-user linear precoder: sum_k log2(1 + s_k g_k (1 - f(s_k' g_k, rho))), s_k = p_k / sigma_k^2.
    inline double linear_precoder_sum_rate(Precoder scheme, double g1, double g2, double rho, double snr1, double snr2)
    {
        constexpr const char *where = "linear_precoder_sum_rate";
        detail::check_nonneg(g1, "g1", where);
        detail::check_nonneg(g2, "g2", where);
        detail::check_nonneg(snr1, "snr1", where);
        detail::check_nonneg(snr2, "snr2", where);
        detail::check_rho(rho, where);
        auto f = [scheme](double x, double z)
        { return scheme == Precoder::mrt ? x * z / (1.0 + x * z) : z; };
        return detail::log2_1p(snr1 * g1 * (1.0 - f(snr2 * g1, rho))) + detail::log2_1p(snr2 * g2 * (1.0 - f(snr1 * g2, rho)));
    }

    // Ratio of a linear-precoder sum rate to the interference-free bound sum_k log2(1 + s_k g_k).
    inline double downlink_rate_ratio(Precoder scheme, double g1, double g2, double rho, double snr1, double snr2)
    {
        const double bound = detail::log2_1p(snr1 * g1) + detail::log2_1p(snr2 * g2);
        if (!(bound > 0.0))
            throw DomainError("downlink_rate_ratio: interference-free bound is zero");
        return linear_precoder_sum_rate(scheme, g1, g2, rho, snr1, snr2) / bound;
    }

    // Same ratio for the DPC sum capacity against the equal-split bound.
    inline double downlink_dpc_ratio(double g1, double g2, double rho, const BcConfig &cfg)
    {
        detail::check_two_user_bc(cfg, "downlink_dpc_ratio");
        const double s1 = cfg.total_power / 2.0 / cfg.noise_var[0], s2 = cfg.total_power / 2.0 / cfg.noise_var[1];
        const double bound = detail::log2_1p(s1 * g1) + detail::log2_1p(s2 * g2);
        if (!(bound > 0.0))
            throw DomainError("downlink_dpc_ratio: interference-free bound is zero");
        return bc_capacity_two_user(g1, g2, rho, cfg) / bound;
    }

    // Large-M FF asymptotes of the two-user BC.
    inline FfAsymptote bc_asymptotic_ff(double m, double area, const BcConfig &cfg, const UserLocation &u1, const UserLocation &u2)
    {
        detail::check_two_user_bc(cfg, "bc_asymptotic_ff");
        if (!(m > 0.0) || !(area > 0.0))
            throw ConfigError("bc_asymptotic_ff: M and A must be positive");
        const double x = m * cfg.total_power * area / (4.0 * std::numbers::pi);
        const double c1 = u1.range() * u1.range() * cfg.noise_var[0] / u1.dir_y();
        const double c2 = u2.range() * u2.range() * cfg.noise_var[1] / u2.dir_y();
        FfAsymptote out;
        out.same_direction = std::log2(x / std::min(c1, c2));
        out.different_direction = std::log2((x + c1 + c2) * (x + c1 + c2) / (4.0 * c1 * c2) - 1.0);
        const double t = x - std::abs(c1 - c2);
        out.gap = std::log2(1.0 + t * t / (4.0 * x * std::max(c1, c2)));
        return out;
    }

    inline double bc_asymptotics(AsymptoticVariant variant, const BcConfig &cfg, const AsymptoticParams &p)
    {
        constexpr const char *where = "bc_asymptotics";
        detail::check_two_user_bc(cfg, where);
        switch (variant)
        {
        case AsymptoticVariant::nf_upa:
        {
            const double g = asymptotic_nf_gain(detail::require(p.xi, "xi", where));
            return bc_capacity_two_user(g, g, 0.0, cfg);
        }
        case AsymptoticVariant::nf_ula:
        {
            detail::require_users(p, 2, where);
            const double xi = detail::require(p.xi, "xi", where), d = detail::require(p.pitch, "pitch", where);
            return bc_capacity_two_user(ula_gain_limit(xi, d / p.users[0].range(), p.users[0]),
                                        ula_gain_limit(xi, d / p.users[1].range(), p.users[1]), 0.0, cfg);
        }
        default:
        {
            detail::require_users(p, 2, where);
            const auto f = bc_asymptotic_ff(detail::require(p.m, "m", where), detail::require(p.element_area, "element_area", where),
                                            cfg, p.users[0], p.users[1]);
            return p.same_direction ? f.same_direction : f.different_direction;
        }
        }
    }
}

#endif
