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

#ifndef NFCAP_EXPERIMENTS_CSV_HPP
#define NFCAP_EXPERIMENTS_CSV_HPP

#include "../error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nfcap::experiments
{
    using Cell = std::variant<long long, double, std::string>;

    struct SweepResult
    {
        std::vector<std::string> columns;
        std::vector<std::vector<Cell>> rows;
        std::string provenance;           // YAML document echoed into the sidecar
        std::vector<std::string> notes;   // human-readable remarks (skipped oracles, flagged rows)
        bool verification_failed = false;
    };

    inline std::string format_cell(const Cell &c)
    {
        if (const auto *i = std::get_if<long long>(&c))
            return fmt::format("{}", *i);
        if (const auto *d = std::get_if<double>(&c))
        {
            if (std::isnan(*d))
                return "nan";
            if (std::isinf(*d))
                return *d > 0 ? "inf" : "-inf";
            return fmt::format("{:.12g}", *d);
        }
        const std::string &s = std::get<std::string>(c);
        if (s.find_first_of(",\"\n\r") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char ch : s)
        {
            if (ch == '"')
                q += '"';
            q += ch;
        }
        return q + "\"";
    }

    inline void write_csv(const SweepResult &r, std::ostream &out)
    {
        for (std::size_t i = 0; i < r.columns.size(); ++i)
            out << (i ? "," : "") << format_cell(r.columns[i]);
        out << "\n";
        for (const auto &row : r.rows)
        {
            if (row.size() != r.columns.size())
                throw ConfigError("write_csv: row width differs from the header");
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << format_cell(row[i]);
            out << "\n";
        }
    }

    inline std::string sidecar_path(const std::string &csv_path) { return csv_path + ".meta.yaml"; }

    // Writes the CSV and the provenance sidecar next to it.
    inline void emit_csv(const SweepResult &r, const std::string &path)
    {
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
            write_csv(r, out);
            if (!out)
                throw std::runtime_error("emit_csv: write to '" + path + "' failed");
        }
        std::ofstream side(sidecar_path(path), std::ios::binary | std::ios::trunc);
        if (!side)
            throw std::runtime_error("emit_csv: cannot open '" + sidecar_path(path) + "' for writing");
        side << r.provenance;
        for (const auto &n : r.notes)
            side << "# " << n << "\n";
        if (!side)
            throw std::runtime_error("emit_csv: write to '" + sidecar_path(path) + "' failed");
    }
}

#endif
