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

#ifndef NFCAP_TESTS_SUPPORT_HPP
#define NFCAP_TESTS_SUPPORT_HPP

#include "nfcap/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace nfcap::testing
{
    inline constexpr double pi = std::numbers::pi;

    // 2.4 GHz, half-wavelength pitch, A = lambda^2 / (4 pi).
    inline ArrayGeometry default_array(int n = 65) { return ArrayGeometry::from_frequency(n, n, 2.4e9); }
    inline UserLocation ut1() { return {10.0, pi / 3.0, 2.0 * pi / 3.0}; }
    inline UserLocation ut2_dd() { return {5.0, 2.0 * pi / 3.0, pi / 3.0}; }
    inline UserLocation ut2_sd() { return {5.0, pi / 3.0, 2.0 * pi / 3.0}; }

    // Hand-rolled generator for randomized property checks.
    class Gen
    {
    public:
        explicit Gen(std::uint64_t seed) : rng_(seed) {}

        double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
        int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
        std::uint64_t seed() { return rng_(); }

        double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
        double gain() { return log_uniform(1e-8, 1.0); }
        double snr() { return std::pow(10.0, uniform(0.0, 4.0)); } // 0 .. 40 dB
        // rho in [0, 1] with extra mass at the ends
        double rho()
        {
            const int k = integer(0, 9);
            if (k == 0)
                return 0.0;
            if (k == 1)
                return 1.0;
            if (k == 2)
                return 1.0 - log_uniform(1e-9, 1e-3);
            return uniform(0.0, 1.0);
        }
        double angle() { return uniform(0.05, pi - 0.05); }
        UserLocation user(double rmin, double rmax) { return {uniform(rmin, rmax), angle(), uniform(0.2, pi - 0.2)}; }

    private:
        std::mt19937_64 rng_;
    };
}

#endif
