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

#ifndef NFCAP_ERROR_HPP
#define NFCAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nfcap
{
    // Argument outside the mathematical domain of a formula (negative distance, rho > 1, zero-norm channel).
    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // Element index outside the array.
    class RangeError : public std::out_of_range
    {
    public:
        using std::out_of_range::out_of_range;
    };

    // Invalid geometry / user / power configuration, or mismatched dimensions.
    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Numerical failure (e.g. a matrix that should be positive definite is not).
    class NumericError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}

#endif
