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

#ifndef NFCAP_GEOMETRY_HPP
#define NFCAP_GEOMETRY_HPP

#include "error.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>

namespace nfcap
{
    inline constexpr double speed_of_light = 299792458.0; // [m/s]

    // Uniform planar array on the x-z plane, centred at the origin, normal along +y.
    // Element (mx, mz) sits at [mx d, 0, mz d] with mx in {-(Mx-1)/2, ..., (Mx-1)/2}.
    // A ULA is the special case Mx = 1.
    class ArrayGeometry
    {
    public:
        ArrayGeometry(int m_x, int m_z, double pitch, double element_side, double wavelength)
            : m_x_(m_x), m_z_(m_z), pitch_(pitch), side_(element_side), wavelength_(wavelength)
        {
            if (m_x < 1 || m_z < 1)
                throw ConfigError("ArrayGeometry: element counts must be positive");
            if (m_x % 2 == 0 || m_z % 2 == 0)
                throw ConfigError("ArrayGeometry: element counts must be odd (got " + std::to_string(m_x) + " x " + std::to_string(m_z) + ")");
            if (!(pitch > 0.0) || !(element_side > 0.0) || !(wavelength > 0.0) ||
                !std::isfinite(pitch) || !std::isfinite(element_side) || !std::isfinite(wavelength))
                throw ConfigError("ArrayGeometry: pitch, element side and wavelength must be positive and finite");
            if (element_side > pitch * (1.0 + 1e-12))
                throw ConfigError("ArrayGeometry: element side sqrt(A) must not exceed the pitch d");
        }

        // Half-wavelength pitch and element area lambda^2 / (4 pi).
        static ArrayGeometry from_frequency(int m_x, int m_z, double frequency_hz)
        {
            if (!(frequency_hz > 0.0))
                throw ConfigError("ArrayGeometry: frequency must be positive");
            const double lambda = speed_of_light / frequency_hz;
            return ArrayGeometry(m_x, m_z, lambda / 2.0, lambda / std::sqrt(4.0 * std::numbers::pi), lambda);
        }

        ArrayGeometry with_counts(int m_x, int m_z) const { return ArrayGeometry(m_x, m_z, pitch_, side_, wavelength_); }

        int m_x() const { return m_x_; }
        int m_z() const { return m_z_; }
        int half_x() const { return (m_x_ - 1) / 2; }
        int half_z() const { return (m_z_ - 1) / 2; }
        std::size_t size() const { return std::size_t(m_x_) * std::size_t(m_z_); }
        double pitch() const { return pitch_; }
        double element_side() const { return side_; }
        double element_area() const { return side_ * side_; }
        double wavelength() const { return wavelength_; }
        double wavenumber() const { return 2.0 * std::numbers::pi / wavelength_; }
        double occupation_ratio() const { return element_area() / (pitch_ * pitch_); }

        bool contains(int mx, int mz) const { return std::abs(mx) <= half_x() && std::abs(mz) <= half_z(); }

        // Row-major, mz fastest.
        std::size_t index(int mx, int mz) const
        {
            if (!contains(mx, mz))
                throw RangeError("ArrayGeometry: element (" + std::to_string(mx) + ", " + std::to_string(mz) + ") outside the array");
            return std::size_t(mx + half_x()) * std::size_t(m_z_) + std::size_t(mz + half_z());
        }

    private:
        int m_x_, m_z_;
        double pitch_, side_, wavelength_;
    };

    // Single-antenna user at range r, azimuth theta and elevation phi (both in the open interval (0, pi)).
    class UserLocation
    {
    public:
        UserLocation(double range, double azimuth, double elevation)
            : range_(range), azimuth_(azimuth), elevation_(elevation)
        {
            if (!(range > 0.0) || !std::isfinite(range))
                throw ConfigError("UserLocation: range must be positive and finite");
            if (!(azimuth > 0.0 && azimuth < std::numbers::pi))
                throw ConfigError("UserLocation: azimuth theta must lie in the open interval (0, pi)");
            if (!(elevation > 0.0 && elevation < std::numbers::pi))
                throw ConfigError("UserLocation: elevation phi must lie in the open interval (0, pi)");
            dir_x_ = std::sin(elevation) * std::cos(azimuth);
            dir_y_ = std::sin(elevation) * std::sin(azimuth);
            dir_z_ = std::cos(elevation);
            if (dir_y_ <= 1e-9)
                throw ConfigError("UserLocation: user too close to the array plane (Psi <= 1e-9)");
        }

        double range() const { return range_; }
        double azimuth() const { return azimuth_; }
        double elevation() const { return elevation_; }
        double dir_x() const { return dir_x_; } // Phi   = sin(phi) cos(theta)
        double dir_y() const { return dir_y_; } // Psi   = sin(phi) sin(theta)
        double dir_z() const { return dir_z_; } // Omega = cos(phi)
        std::array<double, 3> position() const { return {range_ * dir_x_, range_ * dir_y_, range_ * dir_z_}; }

        UserLocation with_range(double r) const { return UserLocation(r, azimuth_, elevation_); }

        bool same_direction(const UserLocation &other, double tol = 1e-12) const
        {
            return std::abs(azimuth_ - other.azimuth_) <= tol && std::abs(elevation_ - other.elevation_) <= tol;
        }

    private:
        double range_, azimuth_, elevation_;
        double dir_x_, dir_y_, dir_z_;
    };

    // epsilon = d / r; every supported configuration has epsilon < 1.
    inline double normalized_pitch(const ArrayGeometry &geom, const UserLocation &user)
    {
        const double eps = geom.pitch() / user.range();
        if (!(eps < 1.0))
            throw ConfigError("user range must exceed the element pitch (d / r < 1)");
        return eps;
    }

    enum class ChannelModel
    {
        near_field,
        far_field
    };

    inline const char *to_string(ChannelModel m) { return m == ChannelModel::near_field ? "NF" : "FF"; }

    // Per-element channel response, indexed with ArrayGeometry::index().
    struct ChannelVector
    {
        Eigen::VectorXcd entries;
        ChannelModel model = ChannelModel::near_field;

        std::size_t size() const { return std::size_t(entries.size()); }
        double squared_norm() const { return entries.squaredNorm(); }
    };

    // Distance between the user and the centre of element (mx, mz).
    inline double element_distance(const ArrayGeometry &geom, const UserLocation &user, int mx, int mz)
    {
        if (!geom.contains(mx, mz))
            throw RangeError("element_distance: element (" + std::to_string(mx) + ", " + std::to_string(mz) + ") outside the array");
        const double eps = normalized_pitch(geom, user);
        const double x = double(mx), z = double(mz);
        const double q = (x * x + z * z) * eps * eps - 2.0 * x * eps * user.dir_x() - 2.0 * z * eps * user.dir_z() + 1.0;
        return user.range() * std::sqrt(q);
    }

    // Spherical-wave model with per-element path loss, phase and projected aperture.
    inline ChannelVector nf_channel_vector(const ArrayGeometry &geom, const UserLocation &user)
    {
        ChannelVector h;
        h.model = ChannelModel::near_field;
        h.entries.resize(Eigen::Index(geom.size()));
        const double scale = geom.element_area() * user.range() * user.dir_y() / (4.0 * std::numbers::pi);
        const double k0 = geom.wavenumber();
        for (int mx = -geom.half_x(); mx <= geom.half_x(); ++mx)
            for (int mz = -geom.half_z(); mz <= geom.half_z(); ++mz)
            {
                const double dist = element_distance(geom, user, mx, mz);
                const double amp = std::sqrt(scale / (dist * dist * dist));
                h.entries[Eigen::Index(geom.index(mx, mz))] = std::polar(amp, -std::fmod(k0 * dist, 2.0 * std::numbers::pi));
            }
        return h;
    }

    // Planar-wave model: equal magnitudes, linear phase across the aperture.
    inline ChannelVector ff_channel_vector(const ArrayGeometry &geom, const UserLocation &user)
    {
        ChannelVector h;
        h.model = ChannelModel::far_field;
        h.entries.resize(Eigen::Index(geom.size()));
        const double eps = normalized_pitch(geom, user);
        const double amp = std::sqrt(geom.element_area() * user.dir_y() / (4.0 * std::numbers::pi * user.range() * user.range()));
        const double k0 = geom.wavenumber();
        for (int mx = -geom.half_x(); mx <= geom.half_x(); ++mx)
            for (int mz = -geom.half_z(); mz <= geom.half_z(); ++mz)
            {
                const double path = user.range() * (1.0 - mx * eps * user.dir_x() - mz * eps * user.dir_z());
                h.entries[Eigen::Index(geom.index(mx, mz))] = std::polar(amp, -std::fmod(k0 * path, 2.0 * std::numbers::pi));
            }
        return h;
    }

    inline ChannelVector channel_vector(ChannelModel model, const ArrayGeometry &geom, const UserLocation &user)
    {
        return model == ChannelModel::near_field ? nf_channel_vector(geom, user) : ff_channel_vector(geom, user);
    }

    // Bracket of the free-space Green function, 1 - 1/(k0 rho)^2 + 1/(k0 rho)^4.
    inline double green_amplitude_ratio(double distance, double wavelength)
    {
        if (!(distance > 0.0))
            throw DomainError("green_amplitude_ratio: distance must be positive");
        if (!(wavelength > 0.0))
            throw DomainError("green_amplitude_ratio: wavelength must be positive");
        const double kr = 2.0 * std::numbers::pi / wavelength * distance;
        const double inv2 = 1.0 / (kr * kr);
        return 1.0 - inv2 + inv2 * inv2;
    }
}

#endif
