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

#ifndef NFCAP_CHANNEL_STATS_HPP
#define NFCAP_CHANNEL_STATS_HPP

#include "error.hpp"
#include "geometry.hpp"
#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace nfcap
{
    inline constexpr int default_quadrature_nodes = 200;

    // Channel gain g = |h|^2.
    inline double gain_exact(const ChannelVector &h)
    {
        if (h.entries.size() == 0)
            throw ConfigError("gain_exact: empty channel vector");
        return h.entries.squaredNorm();
    }

    // Channel correlation factor |h1^H h2|^2 / (|h1|^2 |h2|^2), clamped to [0, 1].
    inline double ccf_exact(const ChannelVector &h1, const ChannelVector &h2)
    {
        if (h1.entries.size() != h2.entries.size())
            throw ConfigError("ccf_exact: channel vectors differ in length");
        const double n1 = h1.entries.squaredNorm(), n2 = h2.entries.squaredNorm();
        if (!(n1 > 0.0) || !(n2 > 0.0))
            throw DomainError("ccf_exact: zero-norm channel vector");
        const double rho = std::norm(h1.entries.dot(h2.entries)) / (n1 * n2);
        return std::clamp(rho, 0.0, 1.0);
    }

    inline LinkStats link_stats_exact(const ChannelVector &h1, const ChannelVector &h2)
    {
        return {gain_exact(h1), gain_exact(h2), ccf_exact(h1, h2)};
    }

    // Exact gains and CCF accumulated element by element, without storing the channel vectors.
    inline LinkStats link_stats_streaming(ChannelModel model, const ArrayGeometry &geom, const UserLocation &u1, const UserLocation &u2)
    {
        const double e1 = normalized_pitch(geom, u1), e2 = normalized_pitch(geom, u2);
        const double k0 = geom.wavenumber();
        const double two_pi = 2.0 * std::numbers::pi;
        const double c1 = geom.element_area() * u1.range() * u1.dir_y() / (4.0 * std::numbers::pi);
        const double c2 = geom.element_area() * u2.range() * u2.dir_y() / (4.0 * std::numbers::pi);
        std::complex<double> inner = 0.0;
        double n1 = 0.0, n2 = 0.0;
        for (int mx = -geom.half_x(); mx <= geom.half_x(); ++mx)
        {
            std::complex<double> row = 0.0;
            for (int mz = -geom.half_z(); mz <= geom.half_z(); ++mz)
            {
                const double x = double(mx), z = double(mz);
                double a1, a2, ph1, ph2;
                if (model == ChannelModel::near_field)
                {
                    const double d1 = u1.range() * std::sqrt((x * x + z * z) * e1 * e1 - 2.0 * x * e1 * u1.dir_x() - 2.0 * z * e1 * u1.dir_z() + 1.0);
                    const double d2 = u2.range() * std::sqrt((x * x + z * z) * e2 * e2 - 2.0 * x * e2 * u2.dir_x() - 2.0 * z * e2 * u2.dir_z() + 1.0);
                    a1 = c1 / (d1 * d1 * d1);
                    a2 = c2 / (d2 * d2 * d2);
                    ph1 = k0 * d1;
                    ph2 = k0 * d2;
                }
                else
                {
                    a1 = c1 / (u1.range() * u1.range() * u1.range());
                    a2 = c2 / (u2.range() * u2.range() * u2.range());
                    ph1 = k0 * u1.range() * (1.0 - x * e1 * u1.dir_x() - z * e1 * u1.dir_z());
                    ph2 = k0 * u2.range() * (1.0 - x * e2 * u2.dir_x() - z * e2 * u2.dir_z());
                }
                n1 += a1;
                n2 += a2;
                row += std::polar(std::sqrt(a1 * a2), std::fmod(ph1 - ph2, two_pi));
            }
            inner += row;
        }
        return {n1, n2, std::clamp(std::norm(inner) / (n1 * n2), 0.0, 1.0)};
    }

    // Closed-form NF gain of a UPA, obtained by replacing the element sum by an integral.
    inline double nf_gain_closed(const ArrayGeometry &geom, const UserLocation &u)
    {
        const double eps = normalized_pitch(geom, u);
        const double psi = u.dir_y();
        const double hx = geom.m_x() * eps / 2.0, hz = geom.m_z() * eps / 2.0;
        const double xs[2] = {hx + u.dir_x(), hx - u.dir_x()};
        const double zs[2] = {hz + u.dir_z(), hz - u.dir_z()};
        double s = 0.0;
        for (double x : xs)
            for (double z : zs)
                s += std::atan(x * z / (psi * std::sqrt(psi * psi + x * x + z * z)));
        return geom.occupation_ratio() / (4.0 * std::numbers::pi) * s;
    }

    // Closed-form NF gain of a ULA along z (m_x = 1).
    inline double ula_gain_closed(const ArrayGeometry &geom, const UserLocation &u)
    {
        if (geom.m_x() != 1)
            throw ConfigError("ula_gain_closed: geometry must be a ULA with m_x = 1 (got m_x = " + std::to_string(geom.m_x()) + ")");
        const double eps = normalized_pitch(geom, u);
        const double me = geom.m_z() * eps;
        const double c = std::cos(u.elevation());
        const double big_xi = (me - 2.0 * c) / std::sqrt(me * me - 4.0 * me * c + 4.0) +
                              (me + 2.0 * c) / std::sqrt(me * me + 4.0 * me * c + 4.0);
        return geom.occupation_ratio() * eps * std::sin(u.azimuth()) * big_xi / (4.0 * std::numbers::pi * std::sin(u.elevation()));
    }

    // Limit of ula_gain_closed as m_z grows.
    inline double ula_gain_limit(double xi, double eps, const UserLocation &u)
    {
        return xi * eps * std::sin(u.azimuth()) / (2.0 * std::numbers::pi * std::sin(u.elevation()));
    }

    // Limit of nf_gain_closed for an unbounded UPA.
    inline double asymptotic_nf_gain(double xi)
    {
        if (!(xi > 0.0 && xi <= 1.0))
            throw DomainError("asymptotic_nf_gain: occupation ratio must lie in (0, 1]");
        return xi / 2.0;
    }

    struct QuadratureCcf
    {
        double value = 0.0; // clamped to [0, 1]
        double raw = 0.0;
    };

    // NF CCF by product Chebyshev-Gauss quadrature with T nodes per axis.
    // The aperture is scaled by user 1's range; user 2's kernel is evaluated on the same nodes with ratio r1 / r2.
    inline QuadratureCcf nf_ccf_quadrature(const ArrayGeometry &geom, const UserLocation &u1, const UserLocation &u2,
                                           int nodes_T = default_quadrature_nodes)
    {
        if (nodes_T < 2)
            throw ConfigError("nf_ccf_quadrature: at least 2 nodes required");
        const double eps1 = normalized_pitch(geom, u1);
        normalized_pitch(geom, u2);
        const double k0 = geom.wavenumber();
        const double r1 = u1.range(), r2 = u2.range();
        const double ups = r1 / r2;
        const double hx = geom.m_x() * eps1 / 2.0, hz = geom.m_z() * eps1 / 2.0;

        const std::size_t T = std::size_t(nodes_T);
        std::vector<double> node(T), weight(T);
        for (std::size_t t = 0; t < T; ++t)
        {
            node[t] = std::cos((2.0 * double(t + 1) - 1.0) * std::numbers::pi / (2.0 * double(T)));
            weight[t] = std::sqrt(std::max(0.0, 1.0 - node[t] * node[t]));
        }

        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < T; ++i)
        {
            const double x = hx * node[i];
            std::complex<double> row = 0.0;
            for (std::size_t j = 0; j < T; ++j)
            {
                const double z = hz * node[j];
                const double q1 = x * x + z * z - 2.0 * u1.dir_x() * x - 2.0 * u1.dir_z() * z + 1.0;
                const double q2 = ups * ups * (x * x + z * z) - 2.0 * ups * u2.dir_x() * x - 2.0 * ups * u2.dir_z() * z + 1.0;
                const double mag = std::pow(q1, -0.75) * std::pow(q2, -0.75);
                const double phase = std::fmod(k0 * (r1 * std::sqrt(q1) - r2 * std::sqrt(q2)), 2.0 * std::numbers::pi);
                row += weight[j] * std::polar(mag, phase);
            }
            acc += weight[i] * row;
        }

        const double m = double(geom.size());
        const double tt = double(T) * double(T);
        double pref = 1.0;
        for (const UserLocation *u : {&u1, &u2})
        {
            const double g = nf_gain_closed(geom, *u);
            pref *= std::numbers::pi * m * geom.element_area() * u->dir_y() / (16.0 * u->range() * u->range() * g * tt);
        }
        QuadratureCcf out;
        out.raw = pref * std::norm(acc);
        out.value = std::clamp(out.raw, 0.0, 1.0);
        return out;
    }

    enum class FfCcfBranch
    {
        same_direction,   // dPhi = dOmega = 0
        equal_phi,        // dPhi = 0, dOmega != 0
        equal_omega,      // dPhi != 0, dOmega = 0
        generic           // both differ
    };

    struct FfCcf
    {
        double value = 0.0;   // exact FF correlation
        double printed = 0.0; // piecewise closed form, kept as a diagnostic
        FfCcfBranch branch = FfCcfBranch::generic;
        bool printed_disagrees = false;
    };

    namespace detail
    {
        // |sum_{m=-(N-1)/2}^{(N-1)/2} e^{j m D}|^2 / N^2
        inline double array_factor_sq(int n, double delta)
        {
            const double den = 1.0 - std::cos(delta);
            if (std::abs(den) < 1e-12)
                return 1.0;
            const double nn = double(n);
            return std::clamp((1.0 - std::cos(nn * delta)) / (nn * nn * den), 0.0, 1.0);
        }
    }

    // FF CCF from the geometric-series closed form.
    inline FfCcf ff_ccf_closed(const ArrayGeometry &geom, const UserLocation &u1, const UserLocation &u2)
    {
        normalized_pitch(geom, u1);
        normalized_pitch(geom, u2);
        const double kd = geom.wavenumber() * geom.pitch();
        const double d_phi = kd * (u1.dir_x() - u2.dir_x());
        const double d_omega = kd * (u1.dir_z() - u2.dir_z());
        const bool zero_phi = std::abs(1.0 - std::cos(d_phi)) < 1e-12;
        const bool zero_omega = std::abs(1.0 - std::cos(d_omega)) < 1e-12;

        FfCcf out;
        out.value = detail::array_factor_sq(geom.m_x(), d_phi) * detail::array_factor_sq(geom.m_z(), d_omega);

        const double mx = geom.m_x(), mz = geom.m_z(), m = double(geom.size());
        if (zero_phi && zero_omega)
        {
            out.branch = FfCcfBranch::same_direction;
            out.printed = 1.0;
        }
        else if (zero_phi)
        {
            out.branch = FfCcfBranch::equal_phi;
            out.printed = (1.0 - std::cos(mz * d_omega)) / (m * m * (1.0 - std::cos(d_omega)));
        }
        else if (zero_omega)
        {
            out.branch = FfCcfBranch::equal_omega;
            out.printed = (1.0 - std::cos(mx * d_phi)) / (m * m * (1.0 - std::cos(d_phi)));
        }
        else
        {
            out.branch = FfCcfBranch::generic;
            out.printed = 4.0 * (1.0 - std::cos(mx * d_phi)) * (1.0 - std::cos(mz * d_omega)) /
                          (m * m * (1.0 - std::cos(d_phi)) * (1.0 - std::cos(d_omega)));
        }
        out.printed_disagrees = std::abs(out.printed - out.value) > 1e-6 * std::max({out.printed, out.value, 1e-300});
        return out;
    }
}

#endif
