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

#ifndef NFCAP_TYPES_HPP
#define NFCAP_TYPES_HPP

#include "error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace nfcap
{
    // Uplink transmit SNRs gamma_k = P_k / sigma^2 (linear).
    struct MacConfig
    {
        std::vector<double> snr;

        MacConfig() = default;
        explicit MacConfig(std::vector<double> snr_per_user) : snr(std::move(snr_per_user)) { validate(); }

        void validate() const
        {
            for (double g : snr)
                if (!(g >= 0.0) || !std::isfinite(g))
                    throw ConfigError("MacConfig: SNRs must be non-negative and finite");
        }
        std::size_t users() const { return snr.size(); }
    };

    // Downlink power budget P and per-user noise variances sigma_k^2.
    struct BcConfig
    {
        double total_power = 1.0;
        std::vector<double> noise_var;

        BcConfig() = default;
        BcConfig(double power, std::vector<double> noise) : total_power(power), noise_var(std::move(noise)) { validate(); }

        void validate() const
        {
            if (!(total_power > 0.0) || !std::isfinite(total_power))
                throw ConfigError("BcConfig: total power must be positive and finite");
            for (double s : noise_var)
                if (!(s > 0.0) || !std::isfinite(s))
                    throw ConfigError("BcConfig: noise variances must be positive and finite");
        }
        std::size_t users() const { return noise_var.size(); }
    };

    // Rate tuple in bits/s/Hz.
    struct RatePoint
    {
        std::vector<double> rates;

        double sum() const
        {
            double s = 0.0;
            for (double r : rates)
                s += r;
            return s;
        }
        double operator[](std::size_t k) const { return rates[k]; }
    };

    struct PowerAllocation
    {
        std::vector<double> p;
        bool degenerate = false; // parallel channels, all power on the strongest user

        double total() const
        {
            double s = 0.0;
            for (double v : p)
                s += v;
            return s;
        }
    };

    struct CovariancePair
    {
        Eigen::MatrixXcd sigma1;
        Eigen::MatrixXcd sigma2;
    };

    // Unit-norm transmit beamformer.
    class Beamformer
    {
    public:
        explicit Beamformer(Eigen::VectorXcd w) : w_(std::move(w))
        {
            if (w_.size() == 0)
                throw ConfigError("Beamformer: empty weight vector");
            if (std::abs(w_.norm() - 1.0) > 1e-12)
                throw DomainError("Beamformer: weights must have unit norm (|w| = " + std::to_string(w_.norm()) + ")");
        }

        // Rescales to unit norm; a zero vector is rejected.
        static Beamformer normalized(const Eigen::VectorXcd &w)
        {
            const double n = w.norm();
            if (!(n > 0.0))
                throw DomainError("Beamformer: cannot normalize a zero vector");
            return Beamformer(w / n);
        }

        const Eigen::VectorXcd &weights() const { return w_; }
        std::size_t size() const { return std::size_t(w_.size()); }

    private:
        Eigen::VectorXcd w_;
    };

    // Gains and CCF of a user pair.
    struct LinkStats
    {
        double gain_1 = 0.0;
        double gain_2 = 0.0;
        double ccf_rho = 0.0;

        void validate() const
        {
            if (!(gain_1 >= 0.0) || !(gain_2 >= 0.0))
                throw DomainError("LinkStats: gains must be non-negative");
            if (!(ccf_rho >= -1e-12 && ccf_rho <= 1.0 + 1e-12))
                throw DomainError("LinkStats: CCF must lie in [0, 1]");
        }
    };

    namespace detail
    {
        inline void check_rho(double rho, const char *where)
        {
            if (!(rho >= 0.0 && rho <= 1.0))
                throw DomainError(std::string(where) + ": rho must lie in [0, 1] (got " + std::to_string(rho) + ")");
        }

        inline void check_nonneg(double v, const char *what, const char *where)
        {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw DomainError(std::string(where) + ": " + what + " must be non-negative and finite");
        }

        inline double log2_1p(double x) { return std::log1p(x) / std::log(2.0); }
    }
}

#endif
