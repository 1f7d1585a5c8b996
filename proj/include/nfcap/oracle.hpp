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

#ifndef NFCAP_ORACLE_HPP
#define NFCAP_ORACLE_HPP

// Brute-force reference implementations. Only the geometry and plain data types are shared with the
// closed-form modules.

#include "error.hpp"
#include "geometry.hpp"
#include "types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace nfcap::oracle
{
    struct OracleReport
    {
        std::string quantity_name;
        double closed_form_value = 0.0;
        double oracle_value = 0.0;
        double abs_diff = 0.0;
        double rel_diff = 0.0;
        double tolerance = 0.0;
        bool one_sided = false; // closed form must not fall below the oracle by more than tolerance

        bool ok() const { return one_sided ? closed_form_value >= oracle_value - tolerance : abs_diff <= tolerance; }
    };

    inline OracleReport make_report(std::string name, double closed, double reference, double tolerance, bool one_sided = false)
    {
        OracleReport r;
        r.quantity_name = std::move(name);
        r.closed_form_value = closed;
        r.oracle_value = reference;
        r.abs_diff = std::abs(closed - reference);
        r.rel_diff = reference != 0.0 ? r.abs_diff / std::abs(reference) : r.abs_diff;
        r.tolerance = tolerance;
        r.one_sided = one_sided;
        return r;
    }

    namespace detail
    {
        inline double logdet2_hpd(const Eigen::MatrixXcd &a)
        {
            Eigen::LLT<Eigen::MatrixXcd> llt(a);
            if (llt.info() != Eigen::Success)
                throw NumericError("oracle: matrix is not positive definite");
            double s = 0.0;
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                s += std::log2(std::real(llt.matrixL()(i, i)));
            return 2.0 * s;
        }

        // I_M + sum_{k in users} w_k h_k h_k^H
        inline Eigen::MatrixXcd covariance(const std::vector<ChannelVector> &channels, const std::vector<double> &w,
                                           const std::vector<std::size_t> &users, Eigen::Index m)
        {
            Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(m, m);
            for (std::size_t k : users)
                a.selfadjointView<Eigen::Lower>().rankUpdate(channels[k].entries, w[k]);
            return a.selfadjointView<Eigen::Lower>();
        }

        inline Eigen::Index common_length(const std::vector<ChannelVector> &channels, const std::vector<double> &w)
        {
            if (w.size() != channels.size())
                throw ConfigError("oracle: one SNR per channel required");
            if (channels.empty())
                return 0;
            const Eigen::Index m = channels.front().entries.size();
            for (const auto &h : channels)
                if (h.entries.size() != m)
                    throw ConfigError("oracle: channel vectors differ in length");
            return m;
        }
    }

    // log2 det(I_M + sum_k gamma_k h_k h_k^H) on the full M x M matrix.
    inline double logdet_capacity_oracle(const std::vector<ChannelVector> &channels, const std::vector<double> &snrs)
    {
        const Eigen::Index m = detail::common_length(channels, snrs);
        if (channels.empty())
            return 0.0;
        std::vector<std::size_t> all(channels.size());
        for (std::size_t k = 0; k < all.size(); ++k)
            all[k] = k;
        return detail::logdet2_hpd(detail::covariance(channels, snrs, all, m));
    }

    // SIC corner point by chained M x M log-determinants. order[0] is decoded last.
    inline RatePoint logdet_corner_rates_oracle(const std::vector<ChannelVector> &channels, const std::vector<double> &snrs,
                                                const std::vector<std::size_t> &order)
    {
        const Eigen::Index m = detail::common_length(channels, snrs);
        if (order.size() != channels.size())
            throw ConfigError("oracle: order must list every user");
        RatePoint out;
        out.rates.assign(channels.size(), 0.0);
        std::vector<std::size_t> prefix;
        double prev = 0.0;
        for (std::size_t u : order)
        {
            if (u >= channels.size())
                throw ConfigError("oracle: user index out of range");
            prefix.push_back(u);
            const double cur = detail::logdet2_hpd(detail::covariance(channels, snrs, prefix, m));
            out.rates[u] = cur - prev;
            prev = cur;
        }
        return out;
    }

    struct PowerGridResult
    {
        double value = 0.0;
        PowerAllocation allocation;
    };

    // Exhaustive search of the two-user dual-MAC sum rate over p1 in {0, P/(n-1), ..., P}, p2 = P - p1.
    inline PowerGridResult bc_power_grid_oracle(double g1, double g2, double rho, const BcConfig &cfg, int points = 100001)
    {
        if (points < 2)
            throw ConfigError("bc_power_grid_oracle: at least 2 grid points required");
        if (cfg.noise_var.size() != 2)
            throw ConfigError("bc_power_grid_oracle: two noise variances required");
        PowerGridResult best;
        best.value = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < points; ++i)
        {
            const double p1 = cfg.total_power * double(i) / double(points - 1);
            const double p2 = cfg.total_power - p1;
            const double t1 = p1 * g1 / cfg.noise_var[0], t2 = p2 * g2 / cfg.noise_var[1];
            // det of the 2 x 2 matrix [[1 + t1, s], [s*, 1 + t2]] with |s|^2 = t1 t2 rho
            const double det = (1.0 + t1) * (1.0 + t2) - t1 * t2 * rho;
            const double v = std::log2(det);
            if (v > best.value)
            {
                best.value = v;
                best.allocation.p = {p1, p2};
            }
        }
        return best;
    }

    struct BeamGridSpec
    {
        int amplitude_points = 400;
        int phase_points = 64;
    };

    struct BeamGridResult
    {
        double value = 0.0;
        Eigen::VectorXcd weights;
    };

    // Max-min search over w = a u1 + b e^{j psi} u2 (u_k = h_k / |h_k|), renormalized.
    inline BeamGridResult mc_beam_grid_oracle(const ChannelVector &h1, const ChannelVector &h2, const std::vector<double> &noise_vars,
                                              double power, const BeamGridSpec &grid = {})
    {
        if (grid.amplitude_points < 2 || grid.phase_points < 1)
            throw ConfigError("mc_beam_grid_oracle: invalid grid");
        if (noise_vars.size() != 2)
            throw ConfigError("mc_beam_grid_oracle: two noise variances required");
        const double n1 = h1.entries.norm(), n2 = h2.entries.norm();
        if (!(n1 > 0.0) || !(n2 > 0.0))
            throw DomainError("mc_beam_grid_oracle: zero channel vector");
        const std::complex<double> c = h1.entries.dot(h2.entries) / (n1 * n2);
        const double w1 = n1 * n1 / noise_vars[0], w2 = n2 * n2 / noise_vars[1];

        double best = -1.0;
        double ba = 1.0, bb = 0.0, bpsi = 0.0;
        const int na = grid.amplitude_points;
        for (int ip = 0; ip < grid.phase_points; ++ip)
        {
            const double psi = 2.0 * std::numbers::pi * double(ip) / double(grid.phase_points);
            const std::complex<double> e = std::polar(1.0, psi);
            const std::complex<double> ec = e * c;
            for (int ia = 0; ia < na; ++ia)
            {
                const double a = double(ia) / double(na - 1);
                for (int ib = 0; ib < na; ++ib)
                {
                    const double b = double(ib) / double(na - 1);
                    const double nrm = a * a + b * b + 2.0 * a * b * std::real(ec);
                    if (!(nrm > 1e-300))
                        continue;
                    const double r1 = std::norm(a + b * ec) * w1;
                    const double r2 = std::norm(a * std::conj(c) + b * e) * w2;
                    const double v = std::min(r1, r2) / nrm;
                    if (v > best)
                    {
                        best = v;
                        ba = a;
                        bb = b;
                        bpsi = psi;
                    }
                }
            }
        }
        BeamGridResult out;
        out.value = std::log2(1.0 + power * best);
        Eigen::VectorXcd w = ba * h1.entries / n1 + bb * std::polar(1.0, bpsi) * h2.entries / n2;
        out.weights = w / w.norm();
        return out;
    }

    // NF CCF from vectors built with the 3-D Euclidean distance between user and element centres.
    inline double ccf_sum_oracle(const ArrayGeometry &geom, const UserLocation &u1, const UserLocation &u2)
    {
        const auto build = [&geom](const UserLocation &u)
        {
            const auto pos = u.position();
            const double k0 = 2.0 * std::numbers::pi / geom.wavelength();
            std::vector<std::complex<double>> h;
            h.reserve(geom.size());
            for (int mx = -geom.half_x(); mx <= geom.half_x(); ++mx)
                for (int mz = -geom.half_z(); mz <= geom.half_z(); ++mz)
                {
                    const double dx = pos[0] - mx * geom.pitch(), dy = pos[1], dz = pos[2] - mz * geom.pitch();
                    const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
                    // projected aperture A |e_y^T (s - r)| / |s - r| with free-space loss 1 / (4 pi dist^2)
                    const double amp = std::sqrt(geom.element_area() * dy / dist / (4.0 * std::numbers::pi * dist * dist));
                    h.push_back(std::polar(amp, -std::fmod(k0 * dist, 2.0 * std::numbers::pi)));
                }
            return h;
        };
        const auto h1 = build(u1), h2 = build(u2);
        std::complex<double> inner = 0.0;
        double e1 = 0.0, e2 = 0.0;
        for (std::size_t i = 0; i < h1.size(); ++i)
        {
            inner += std::conj(h1[i]) * h2[i];
            e1 += std::norm(h1[i]);
            e2 += std::norm(h2[i]);
        }
        return std::norm(inner) / (e1 * e2);
    }

    // Exact realization of target stats: h1 = sqrt(g1) e1, h2 = sqrt(g2) (sqrt(rho) e1 + sqrt(1 - rho) e2).
    // The orthonormal pair is a random rotation so the vectors are dense.
    inline std::pair<ChannelVector, ChannelVector> synthesize_two_user(double g1, double g2, double rho, Eigen::Index m,
                                                                       std::uint64_t seed = 1)
    {
        if (m < 2)
            throw ConfigError("synthesize_two_user: dimension must be at least 2");
        if (!(rho >= 0.0 && rho <= 1.0) || !(g1 >= 0.0) || !(g2 >= 0.0))
            throw DomainError("synthesize_two_user: invalid target stats");
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> n01;
        Eigen::MatrixXcd q(m, 2);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < 2; ++j)
                q(i, j) = {n01(rng), n01(rng)};
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(q);
        const Eigen::MatrixXcd basis = qr.householderQ() * Eigen::MatrixXcd::Identity(m, 2);
        ChannelVector h1, h2;
        h1.entries = std::sqrt(g1) * basis.col(0);
        h2.entries = std::sqrt(g2) * (std::sqrt(rho) * basis.col(0) + std::sqrt(1.0 - rho) * basis.col(1));
        return {h1, h2};
    }

    // K i.i.d. complex Gaussian channels of length m, each scaled to the given gain.
    inline std::vector<ChannelVector> random_channels(const std::vector<double> &gains, Eigen::Index m, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> n01;
        std::vector<ChannelVector> out(gains.size());
        for (std::size_t k = 0; k < gains.size(); ++k)
        {
            out[k].entries.resize(m);
            for (Eigen::Index i = 0; i < m; ++i)
                out[k].entries[i] = {n01(rng), n01(rng)};
            out[k].entries *= std::sqrt(gains[k]) / out[k].entries.norm();
        }
        return out;
    }
}

#endif
