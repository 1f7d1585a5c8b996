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

#ifndef NFCAP_MC_HPP
#define NFCAP_MC_HPP

#include "channel_stats.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "mac.hpp"
#include "types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace nfcap
{
    // log2(1 + P min_k |h_k^H w|^2 / sigma_k^2) for a unit-norm beamformer.
    inline double mc_rate_given_beamformer(const Beamformer &w, const std::vector<ChannelVector> &channels,
                                           const std::vector<double> &noise_vars, double power)
    {
        constexpr const char *where = "mc_rate_given_beamformer";
        if (channels.empty())
            throw ConfigError(std::string(where) + ": at least one channel required");
        if (noise_vars.size() != channels.size())
            throw ConfigError(std::string(where) + ": one noise variance per channel required");
        if (!(power >= 0.0))
            throw ConfigError(std::string(where) + ": power must be non-negative");
        if (std::abs(w.weights().norm() - 1.0) > 1e-12)
            throw DomainError(std::string(where) + ": beamformer must have unit norm");
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < channels.size(); ++k)
        {
            if (channels[k].entries.size() != w.weights().size())
                throw ConfigError(std::string(where) + ": beamformer and channel lengths differ");
            if (!(noise_vars[k] > 0.0))
                throw ConfigError(std::string(where) + ": noise variances must be positive");
            worst = std::min(worst, std::norm(channels[k].entries.dot(w.weights())) / noise_vars[k]);
        }
        return detail::log2_1p(power * worst);
    }

    enum class McBranch
    {
        user1_only, // g1/sigma1^2 <= rho g2/sigma2^2
        user2_only, // g2/sigma2^2 <= rho g1/sigma1^2
        balanced
    };

    // Coefficients of the two-user max-min beamformer; sigma_k are noise standard deviations.
    struct McSolution
    {
        McBranch branch = McBranch::balanced;
        double mu1 = 0.0, mu2 = 0.0, eta = 0.0, chi = 0.0;
    };

    inline McSolution mc_solution_two_user(double g1, double g2, double rho, double sigma1, double sigma2)
    {
        constexpr const char *where = "mc_solution_two_user";
        detail::check_nonneg(g1, "g1", where);
        detail::check_nonneg(g2, "g2", where);
        detail::check_rho(rho, where);
        if (!(sigma1 > 0.0) || !(sigma2 > 0.0))
            throw ConfigError(std::string(where) + ": noise standard deviations must be positive");
        McSolution s;
        const double s1 = sigma1 * sigma1, s2 = sigma2 * sigma2;
        if (g1 / s1 <= rho * g2 / s2)
        {
            s.branch = McBranch::user1_only;
            return s;
        }
        if (g2 / s2 <= rho * g1 / s1)
        {
            s.branch = McBranch::user2_only;
            return s;
        }
        const double cross = sigma1 * sigma2 * std::sqrt(g1 * g2 * rho);
        s.chi = s2 * g1 + s1 * g2 - 2.0 * cross;
        if (!(s.chi > 0.0))
        {
            s.branch = g1 / s1 <= g2 / s2 ? McBranch::user1_only : McBranch::user2_only;
            s.chi = 0.0;
            return s;
        }
        s.mu1 = (s1 * g2 - cross) / s.chi;
        s.mu2 = (s2 * g1 - cross) / s.chi;
        s.eta = std::min(g1 * g2 * (1.0 - rho) / s.chi, std::min(g1 / s1, g2 / s2));
        return s;
    }

    inline double mc_capacity_two_user(double g1, double g2, double rho, double sigma1, double sigma2, double power)
    {
        if (!(power >= 0.0))
            throw ConfigError("mc_capacity_two_user: power must be non-negative");
        const McSolution s = mc_solution_two_user(g1, g2, rho, sigma1, sigma2);
        switch (s.branch)
        {
        case McBranch::user1_only:
            return detail::log2_1p(power * g1 / (sigma1 * sigma1));
        case McBranch::user2_only:
            return detail::log2_1p(power * g2 / (sigma2 * sigma2));
        default:
            return detail::log2_1p(power * s.eta);
        }
    }

    // Optimal two-user multicast beamformer; sigma_k are noise standard deviations.
    inline Beamformer mc_beamformer_two_user(const ChannelVector &h1, const ChannelVector &h2, double sigma1, double sigma2)
    {
        constexpr const char *where = "mc_beamformer_two_user";
        if (h1.entries.size() != h2.entries.size())
            throw ConfigError(std::string(where) + ": channel vectors differ in length");
        const double g1 = h1.entries.squaredNorm(), g2 = h2.entries.squaredNorm();
        if (!(g1 > 0.0) || !(g2 > 0.0))
            throw DomainError(std::string(where) + ": zero channel vector");
        const std::complex<double> inner = h1.entries.dot(h2.entries);
        const double rho = std::clamp(std::norm(inner) / (g1 * g2), 0.0, 1.0);
        const McSolution s = mc_solution_two_user(g1, g2, rho, sigma1, sigma2);
        switch (s.branch)
        {
        case McBranch::user1_only:
            return Beamformer::normalized(h1.entries);
        case McBranch::user2_only:
            return Beamformer::normalized(h2.entries);
        default:
        {
            const std::complex<double> phase = std::abs(inner) > 0.0 ? std::conj(inner) / std::abs(inner) : 1.0;
            const double se = std::sqrt(s.eta);
            const Eigen::VectorXcd w = (s.mu1 / (sigma1 * se)) * h1.entries + (s.mu2 / (sigma2 * se)) * phase * h2.entries;
            return Beamformer::normalized(w);
        }
        }
    }

    // log2(1 + (P/K) sum_k g_k / sigma_k^2).
    inline double mc_upper_bound(const std::vector<double> &gains, const std::vector<double> &noise_vars, double power)
    {
        if (gains.empty() || gains.size() != noise_vars.size())
            throw ConfigError("mc_upper_bound: one noise variance per gain required");
        double s = 0.0;
        for (std::size_t k = 0; k < gains.size(); ++k)
        {
            detail::check_nonneg(gains[k], "gain", "mc_upper_bound");
            if (!(noise_vars[k] > 0.0))
                throw ConfigError("mc_upper_bound: noise variances must be positive");
            s += gains[k] / noise_vars[k];
        }
        return detail::log2_1p(power / double(gains.size()) * s);
    }

    // Large-M FF asymptotes of the two-user MC; gap = F^s - F^d.
    inline FfAsymptote mc_asymptotic_ff(double m, double area, double power, const std::vector<double> &noise_vars,
                                        const UserLocation &u1, const UserLocation &u2)
    {
        if (noise_vars.size() != 2)
            throw ConfigError("mc_asymptotic_ff: two noise variances required");
        if (!(m > 0.0) || !(area > 0.0) || !(power > 0.0))
            throw ConfigError("mc_asymptotic_ff: M, A and P must be positive");
        const double x = m * power * area / (4.0 * std::numbers::pi);
        const double c1 = u1.range() * u1.range() * noise_vars[0] / u1.dir_y();
        const double c2 = u2.range() * u2.range() * noise_vars[1] / u2.dir_y();
        FfAsymptote out;
        out.same_direction = std::log2(x / std::max(c1, c2));
        out.different_direction = std::log2(x / (c1 + c2));
        out.gap = std::log2(1.0 + std::min(c1, c2) / std::max(c1, c2));
        return out;
    }

    struct McParams
    {
        double power = 1.0;
        std::vector<double> noise_vars; // sigma_k^2
    };

    inline double mc_asymptotics(AsymptoticVariant variant, const McParams &cfg, const AsymptoticParams &p)
    {
        constexpr const char *where = "mc_asymptotics";
        if (cfg.noise_vars.size() != 2)
            throw ConfigError(std::string(where) + ": two noise variances required");
        const double sd1 = std::sqrt(cfg.noise_vars[0]), sd2 = std::sqrt(cfg.noise_vars[1]);
        switch (variant)
        {
        case AsymptoticVariant::nf_upa:
        {
            const double g = asymptotic_nf_gain(detail::require(p.xi, "xi", where));
            return mc_capacity_two_user(g, g, 0.0, sd1, sd2, cfg.power);
        }
        case AsymptoticVariant::nf_ula:
        {
            detail::require_users(p, 2, where);
            const double xi = detail::require(p.xi, "xi", where), d = detail::require(p.pitch, "pitch", where);
            return mc_capacity_two_user(ula_gain_limit(xi, d / p.users[0].range(), p.users[0]),
                                        ula_gain_limit(xi, d / p.users[1].range(), p.users[1]), 0.0, sd1, sd2, cfg.power);
        }
        default:
        {
            detail::require_users(p, 2, where);
            const auto f = mc_asymptotic_ff(detail::require(p.m, "m", where), detail::require(p.element_area, "element_area", where),
                                            cfg.power, cfg.noise_vars, p.users[0], p.users[1]);
            return p.same_direction ? f.same_direction : f.different_direction;
        }
        }
    }
}

#endif
