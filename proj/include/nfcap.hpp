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

#ifndef NFCAP_HPP
#define NFCAP_HPP

#include "nfcap/bc.hpp"
#include "nfcap/channel_stats.hpp"
#include "nfcap/error.hpp"
#include "nfcap/geometry.hpp"
#include "nfcap/mac.hpp"
#include "nfcap/mc.hpp"
#include "nfcap/region.hpp"
#include "nfcap/types.hpp"

#endif
