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

#ifndef NFCAP_MAC_HPP
#define NFCAP_MAC_HPP

#include "channel_stats.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "region.hpp"
#include "types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace nfcap
{
    // SIC decoding order. U1_first decodes user 1 first (user 1 sees user 2 as interference).
    enum class SicOrder
    {
        U1_first,
        U2_first
    };

    inline RatePoint sic_rates_two_user(double g1, double g2, double rho, double gamma1, double gamma2, SicOrder order)
    {
        detail::check_nonneg(g1, "g1", "sic_rates_two_user");
        detail::check_nonneg(g2, "g2", "sic_rates_two_user");
        detail::check_nonneg(gamma1, "gamma1", "sic_rates_two_user");
        detail::check_nonneg(gamma2, "gamma2", "sic_rates_two_user");
        detail::check_rho(rho, "sic_rates_two_user");
        const double a1 = gamma1 * g1, a2 = gamma2 * g2;
        if (order == SicOrder::U1_first)
            return {{detail::log2_1p(a1 * (1.0 + a2 * (1.0 - rho)) / (1.0 + a2)), detail::log2_1p(a2)}};
        return {{detail::log2_1p(a1), detail::log2_1p(a2 * (1.0 + a1 * (1.0 - rho)) / (1.0 + a1))}};
    }

    inline double mac_capacity_two_user(double g1, double g2, double rho, double gamma1, double gamma2)
    {
        detail::check_nonneg(g1, "g1", "mac_capacity_two_user");
        detail::check_nonneg(g2, "g2", "mac_capacity_two_user");
        detail::check_nonneg(gamma1, "gamma1", "mac_capacity_two_user");
        detail::check_nonneg(gamma2, "gamma2", "mac_capacity_two_user");
        detail::check_rho(rho, "mac_capacity_two_user");
        const double a1 = gamma1 * g1, a2 = gamma2 * g2;
        return detail::log2_1p(a1 + a2 + a1 * a2 * (1.0 - rho));
    }

    namespace detail
    {
        // M x K matrix with columns sqrt(w_k) h_k.
        inline Eigen::MatrixXcd scaled_columns(const std::vector<ChannelVector> &channels, const std::vector<double> &w, const char *where)
        {
            if (channels.empty())
                throw ConfigError(std::string(where) + ": at least one channel required");
            if (w.size() != channels.size())
                throw ConfigError(std::string(where) + ": one weight per channel required");
            const Eigen::Index m = channels.front().entries.size();
            Eigen::MatrixXcd h(m, Eigen::Index(channels.size()));
            for (std::size_t k = 0; k < channels.size(); ++k)
            {
                if (channels[k].entries.size() != m)
                    throw ConfigError(std::string(where) + ": channel vectors differ in length");
                check_nonneg(w[k], "weight", where);
                h.col(Eigen::Index(k)) = std::sqrt(w[k]) * channels[k].entries;
            }
            return h;
        }

        // ln det(I + G) for a Hermitian PSD Gram matrix G.
        inline double logdet_i_plus(const Eigen::MatrixXcd &gram)
        {
            if (gram.rows() == 0)
                return 0.0;
            Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(gram.rows(), gram.cols()) + gram;
            Eigen::LLT<Eigen::MatrixXcd> llt(a);
            if (llt.info() != Eigen::Success)
                throw NumericError("logdet_i_plus: I + Gram not positive definite");
            double s = 0.0;
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                s += std::log(std::real(llt.matrixL()(i, i)));
            return 2.0 * s;
        }

        inline void check_permutation(const std::vector<std::size_t> &order, std::size_t k, const char *where)
        {
            if (order.size() != k)
                throw ConfigError(std::string(where) + ": order must list every user exactly once");
            std::vector<bool> seen(k, false);
            for (std::size_t u : order)
            {
                if (u >= k || seen[u])
                    throw ConfigError(std::string(where) + ": order is not a permutation of the users");
                seen[u] = true;
            }
        }
    }

    // log2 det(I_K + H^H H) on the K x K Gram matrix, columns sqrt(gamma_k) h_k.
    inline double mac_capacity_general(const std::vector<ChannelVector> &channels, const MacConfig &cfg)
    {
        const Eigen::MatrixXcd h = detail::scaled_columns(channels, cfg.snr, "mac_capacity_general");
        return detail::logdet_i_plus(h.adjoint() * h) / std::numbers::ln2;
    }

    // Corner point of the K-user region. order[0] is decoded last (interference-free), order.back() first.
    // Each rate is log2(1 + gamma_k (|h_k|^2 - a^H B^{-1} a)) with B = I + Gram of the users decoded later.
    inline RatePoint mac_corner_rates_general(const std::vector<ChannelVector> &channels, const MacConfig &cfg,
                                              const std::vector<std::size_t> &order)
    {
        const Eigen::MatrixXcd h = detail::scaled_columns(channels, cfg.snr, "mac_corner_rates_general");
        const std::size_t k_users = channels.size();
        detail::check_permutation(order, k_users, "mac_corner_rates_general");
        const Eigen::MatrixXcd gram = h.adjoint() * h;

        RatePoint out;
        out.rates.assign(k_users, 0.0);
        for (std::size_t pos = 0; pos < k_users; ++pos)
        {
            const auto k = Eigen::Index(order[pos]);
            double eff = std::real(gram(k, k));
            if (pos > 0)
            {
                const auto n = Eigen::Index(pos);
                Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(n, n);
                Eigen::VectorXcd a(n);
                for (Eigen::Index i = 0; i < n; ++i)
                {
                    const auto ui = Eigen::Index(order[std::size_t(i)]);
                    a[i] = gram(ui, k);
                    for (Eigen::Index j = 0; j < n; ++j)
                        b(i, j) += gram(ui, Eigen::Index(order[std::size_t(j)]));
                }
                Eigen::LLT<Eigen::MatrixXcd> llt(b);
                if (llt.info() != Eigen::Success)
                    throw NumericError("mac_corner_rates_general: interference matrix not positive definite");
                eff -= std::real(a.dot(llt.solve(a)));
            }
            out.rates[order[pos]] = detail::log2_1p(std::max(eff, 0.0));
        }
        return out;
    }

    // Pentagon (rectangle when the corners coincide) with the time-sharing face sampled at tau = 0 .. 1.
    inline RateRegion mac_region_two_user(double g1, double g2, double rho, double gamma1, double gamma2,
                                          int time_share_samples = 101)
    {
        if (time_share_samples < 2)
            throw ConfigError("mac_region_two_user: at least 2 time-sharing samples required");
        const RatePoint c12 = sic_rates_two_user(g1, g2, rho, gamma1, gamma2, SicOrder::U1_first);
        const RatePoint c21 = sic_rates_two_user(g1, g2, rho, gamma1, gamma2, SicOrder::U2_first);

        RateRegion region;
        const bool rect = std::abs(c12[0] - c21[0]) <= 1e-12 && std::abs(c12[1] - c21[1]) <= 1e-12;
        region.kind = rect ? RegionKind::rectangle : RegionKind::pentagon;
        region.vertices.push_back({{0.0, 0.0}});
        region.vertices.push_back({{c21[0], 0.0}});
        region.vertices.push_back(c21);
        if (!rect)
            region.vertices.push_back(c12);
        region.vertices.push_back({{0.0, c12[1]}});

        for (int i = 0; i < time_share_samples; ++i)
        {
            const double tau = double(i) / double(time_share_samples - 1);
            region.time_sharing.push_back({{tau * c12[0] + (1.0 - tau) * c21[0], tau * c12[1] + (1.0 - tau) * c21[1]}});
        }
        return region;
    }

    enum class Combiner
    {
        opt,
        mrc,
        zf
    };

    inline const char *to_string(Combiner c)
    {
        return c == Combiner::opt ? "opt" : c == Combiner::mrc ? "mrc"
                                                               : "zf";
    }

    // Sum rate of a two-user linear receiver: sum_k log2(1 + gamma_k g_k (1 - f(gamma_k' g_k', rho))).
    inline double linear_combiner_sum_rate(Combiner scheme, double g1, double g2, double rho, double gamma1, double gamma2)
    {
        detail::check_nonneg(g1, "g1", "linear_combiner_sum_rate");
        detail::check_nonneg(g2, "g2", "linear_combiner_sum_rate");
        detail::check_nonneg(gamma1, "gamma1", "linear_combiner_sum_rate");
        detail::check_nonneg(gamma2, "gamma2", "linear_combiner_sum_rate");
        detail::check_rho(rho, "linear_combiner_sum_rate");
        auto f = [scheme](double x, double z)
        {
            switch (scheme)
            {
            case Combiner::opt:
                return x * z / (1.0 + x);
            case Combiner::mrc:
                return x * z / (1.0 + x * z);
            default:
                return z;
            }
        };
        const double a1 = gamma1 * g1, a2 = gamma2 * g2;
        return detail::log2_1p(a1 * (1.0 - f(a2, rho))) + detail::log2_1p(a2 * (1.0 - f(a1, rho)));
    }

    // Upper bound sum_k log2(1 + gamma_k g_k), reached when rho = 0.
    inline double mac_interference_free_bound(double g1, double g2, double gamma1, double gamma2)
    {
        return detail::log2_1p(gamma1 * g1) + detail::log2_1p(gamma2 * g2);
    }

    // Saturation value of the NF MAC with a growing UPA: sum_k log2(1 + xi gamma_k / 2).
    inline double mac_asymptotic_nf_upa(double xi, const MacConfig &cfg)
    {
        const double g = asymptotic_nf_gain(xi);
        double c = 0.0;
        for (double gamma : cfg.snr)
            c += detail::log2_1p(gamma * g);
        return c;
    }

    // Saturation value of the NF MAC with a growing ULA along z.
    inline double mac_asymptotic_nf_ula(double xi, double pitch, const MacConfig &cfg, const std::vector<UserLocation> &users)
    {
        if (users.size() != cfg.snr.size())
            throw ConfigError("mac_asymptotic_nf_ula: one user location per SNR required");
        double c = 0.0;
        for (std::size_t k = 0; k < users.size(); ++k)
            c += detail::log2_1p(cfg.snr[k] * ula_gain_limit(xi, pitch / users[k].range(), users[k]));
        return c;
    }

    // Large-M FF asymptotes of the two-user MAC.
    struct FfAsymptote
    {
        double same_direction = 0.0;      // F^s
        double different_direction = 0.0; // F^d
        double gap = 0.0;                  // closed form of F^d - F^s (MAC, BC) or F^s - F^d (MC)
    };

    inline FfAsymptote mac_asymptotic_ff(double m, double area, const MacConfig &cfg, const UserLocation &u1, const UserLocation &u2)
    {
        if (cfg.snr.size() != 2)
            throw ConfigError("mac_asymptotic_ff: two users required");
        if (!(m > 0.0) || !(area > 0.0))
            throw ConfigError("mac_asymptotic_ff: M and A must be positive");
        const double a1 = cfg.snr[0] * u1.dir_y() / (u1.range() * u1.range());
        const double a2 = cfg.snr[1] * u2.dir_y() / (u2.range() * u2.range());
        const double x = m * area / (4.0 * std::numbers::pi);
        FfAsymptote out;
        out.same_direction = std::log2(x * (a1 + a2));
        out.different_direction = std::log2(x * (a1 + a2) + x * x * a1 * a2);
        out.gap = std::log2(1.0 + x / (1.0 / a1 + 1.0 / a2));
        return out;
    }

    enum class AsymptoticVariant
    {
        nf_upa,
        nf_ula,
        ff
    };

    // Optional inputs for the asymptotic dispatchers; each variant names what it needs.
    struct AsymptoticParams
    {
        std::optional<double> xi;
        std::optional<double> pitch;
        std::optional<double> element_area;
        std::optional<double> m;
        std::vector<UserLocation> users;
        bool same_direction = false; // selects F^s for the ff variant
    };

    namespace detail
    {
        template <class T>
        const T &require(const std::optional<T> &v, const char *name, const char *where)
        {
            if (!v)
                throw ConfigError(std::string(where) + ": missing parameter '" + name + "'");
            return *v;
        }

        inline void require_users(const AsymptoticParams &p, std::size_t n, const char *where)
        {
            if (p.users.size() != n)
                throw ConfigError(std::string(where) + ": missing parameter 'users' (" + std::to_string(n) + " locations required)");
        }
    }

    inline double mac_asymptotics(AsymptoticVariant variant, const MacConfig &cfg, const AsymptoticParams &p)
    {
        constexpr const char *where = "mac_asymptotics";
        switch (variant)
        {
        case AsymptoticVariant::nf_upa:
            return mac_asymptotic_nf_upa(detail::require(p.xi, "xi", where), cfg);
        case AsymptoticVariant::nf_ula:
            detail::require_users(p, cfg.snr.size(), where);
            return mac_asymptotic_nf_ula(detail::require(p.xi, "xi", where), detail::require(p.pitch, "pitch", where), cfg, p.users);
        default:
        {
            detail::require_users(p, 2, where);
            const auto f = mac_asymptotic_ff(detail::require(p.m, "m", where), detail::require(p.element_area, "element_area", where),
                                             cfg, p.users[0], p.users[1]);
            return p.same_direction ? f.same_direction : f.different_direction;
        }
        }
    }
}

#endif
