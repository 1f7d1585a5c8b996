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

#ifndef NFCAP_EXPERIMENTS_SCENARIO_HPP
#define NFCAP_EXPERIMENTS_SCENARIO_HPP

#include "../error.hpp"
#include "../geometry.hpp"
#include "../mac.hpp"
#include "../mc.hpp"
#include "../types.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace nfcap::experiments
{
    inline constexpr const char *tool_version = "nfcap 0.1.0";

    // Parse or validation failure in a scenario file; `line`/`column` are 1-based, 0 when unknown.
    class ScenarioError : public ConfigError
    {
    public:
        ScenarioError(const std::string &msg, int line = 0, int column = 0)
            : ConfigError(line > 0 ? msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")" : msg),
              line(line), column(column) {}

        int line;
        int column;
    };

    enum class CcfMethod
    {
        automatic,  // exact inner product up to exact_ccf_max_elements, quadrature beyond
        exact,
        quadrature
    };

    inline constexpr double exact_ccf_max_elements = 4.2e6;

    inline const char *to_string(CcfMethod m)
    {
        return m == CcfMethod::automatic ? "auto" : m == CcfMethod::exact ? "exact"
                                                                          : "quadrature";
    }

    // Length either in meters or in wavelengths.
    struct Length
    {
        double value = 0.0;
        bool in_wavelengths = false;

        double meters(double wavelength) const { return in_wavelengths ? value * wavelength : value; }
    };

    struct UserSpec
    {
        double range = 10.0;
        double theta = std::numbers::pi / 3.0;
        double phi = 2.0 * std::numbers::pi / 3.0;
    };

    inline const std::vector<std::string> &sweep_variables()
    {
        static const std::vector<std::string> v = {"n_side", "mx", "mz", "r1", "r2", "theta2", "phi2", "snr_db", "xi", "frequency"};
        return v;
    }

    struct SweepSpec
    {
        std::string variable;
        std::vector<double> values; // ascending, unique
    };

    struct Scenario
    {
        double frequency = 2.4e9;
        int mx = 65;
        int mz = 65;
        Length pitch{0.5, true};
        std::optional<Length> element_side; // default lambda / sqrt(4 pi)
        std::optional<double> xi;            // overrides element_side: sqrt(xi) * pitch
        std::vector<UserSpec> users = {{10.0, std::numbers::pi / 3.0, 2.0 * std::numbers::pi / 3.0},
                                       {5.0, 2.0 * std::numbers::pi / 3.0, std::numbers::pi / 3.0}};
        ChannelModel model = ChannelModel::near_field;
        std::vector<double> snr_db = {30.0, 30.0};
        double power_db = 30.0;
        std::vector<double> noise_var = {1.0, 1.0};
        int quadrature_T = default_quadrature_nodes;
        CcfMethod ccf_method = CcfMethod::automatic;
        int region_samples = 101;
        std::optional<SweepSpec> sweep;

        double wavelength() const { return speed_of_light / frequency; }

        ArrayGeometry geometry() const
        {
            const double lambda = wavelength();
            const double d = pitch.meters(lambda);
            double side = element_side ? element_side->meters(lambda) : lambda / std::sqrt(4.0 * std::numbers::pi);
            if (xi)
                side = std::sqrt(*xi) * d;
            return ArrayGeometry(mx, mz, d, side, lambda);
        }

        std::vector<UserLocation> user_locations() const
        {
            std::vector<UserLocation> out;
            for (const auto &u : users)
                out.emplace_back(u.range, u.theta, u.phi);
            return out;
        }

        std::vector<double> snr_linear() const
        {
            std::vector<double> out;
            for (std::size_t k = 0; k < users.size(); ++k)
                out.push_back(std::pow(10.0, (k < snr_db.size() ? snr_db[k] : snr_db.back()) / 10.0));
            return out;
        }

        double total_power() const { return std::pow(10.0, power_db / 10.0); }

        std::vector<double> noise_vars() const
        {
            std::vector<double> out;
            for (std::size_t k = 0; k < users.size(); ++k)
                out.push_back(k < noise_var.size() ? noise_var[k] : noise_var.back());
            return out;
        }

        MacConfig mac_cfg() const { return MacConfig(snr_linear()); }
        BcConfig bc_cfg() const { return BcConfig(total_power(), noise_vars()); }
        McParams mc_cfg() const { return McParams{total_power(), noise_vars()}; }

        // Throws ConfigError naming the offending field.
        void validate() const
        {
            if (!(frequency > 0.0) || !std::isfinite(frequency))
                throw ScenarioError("frequency: must be positive");
            if (users.empty())
                throw ScenarioError("users: at least one user required");
            if (snr_db.empty() || noise_var.empty())
                throw ScenarioError("snr_db / noise_var: at least one value required");
            for (double v : noise_var)
                if (!(v > 0.0))
                    throw ScenarioError("noise_var: values must be positive");
            if (quadrature_T < 2)
                throw ScenarioError("quadrature_T: at least 2 nodes required");
            if (region_samples < 2)
                throw ScenarioError("region_samples: at least 2 required");
            if (xi && !(*xi > 0.0 && *xi <= 1.0))
                throw ScenarioError("array.xi: must lie in (0, 1]");
            try
            {
                const ArrayGeometry g = geometry();
                for (std::size_t k = 0; k < users.size(); ++k)
                {
                    const UserLocation u(users[k].range, users[k].theta, users[k].phi);
                    normalized_pitch(g, u);
                }
            }
            catch (const ScenarioError &)
            {
                throw;
            }
            catch (const std::exception &e)
            {
                throw ScenarioError(std::string("scenario: ") + e.what());
            }
        }

        // Copy with one whitelisted variable replaced.
        Scenario with(const std::string &variable, double value) const
        {
            Scenario s = *this;
            s.sweep.reset();
            auto odd = [&](double v)
            {
                if (v != std::floor(v) || v < 1.0 || std::fmod(v, 2.0) != 1.0)
                    throw ScenarioError("sweep." + variable + ": element counts must be odd positive integers");
                return int(v);
            };
            auto need_user = [&](std::size_t k)
            {
                if (s.users.size() <= k)
                    throw ScenarioError("sweep." + variable + ": scenario has no user " + std::to_string(k + 1));
            };
            if (variable == "n_side")
                s.mx = s.mz = odd(value);
            else if (variable == "mx")
                s.mx = odd(value);
            else if (variable == "mz")
                s.mz = odd(value);
            else if (variable == "r1")
            {
                need_user(0);
                s.users[0].range = value;
            }
            else if (variable == "r2")
            {
                need_user(1);
                s.users[1].range = value;
            }
            else if (variable == "theta2")
            {
                need_user(1);
                s.users[1].theta = value;
            }
            else if (variable == "phi2")
            {
                need_user(1);
                s.users[1].phi = value;
            }
            else if (variable == "snr_db")
                std::fill(s.snr_db.begin(), s.snr_db.end(), value);
            else if (variable == "xi")
                s.xi = value;
            else if (variable == "frequency")
                s.frequency = value;
            else
                throw ScenarioError("sweep.variable: '" + variable + "' is not one of the supported sweep variables");
            s.validate();
            return s;
        }

        std::string to_yaml() const
        {
            YAML::Emitter e;
            e.SetDoublePrecision(17);
            e << YAML::BeginMap;
            e << YAML::Key << "tool" << YAML::Value << tool_version;
            e << YAML::Key << "frequency" << YAML::Value << frequency;
            e << YAML::Key << "wavelength" << YAML::Value << wavelength();
            const ArrayGeometry g = geometry();
            e << YAML::Key << "array" << YAML::Value << YAML::BeginMap;
            e << YAML::Key << "mx" << YAML::Value << mx;
            e << YAML::Key << "mz" << YAML::Value << mz;
            e << YAML::Key << "pitch" << YAML::Value << g.pitch();
            e << YAML::Key << "element_side" << YAML::Value << g.element_side();
            e << YAML::Key << "xi" << YAML::Value << g.occupation_ratio();
            e << YAML::EndMap;
            e << YAML::Key << "users" << YAML::Value << YAML::BeginSeq;
            for (const auto &u : users)
                e << YAML::Flow << YAML::BeginMap << YAML::Key << "range" << YAML::Value << u.range << YAML::Key << "theta" << YAML::Value
                  << u.theta << YAML::Key << "phi" << YAML::Value << u.phi << YAML::EndMap;
            e << YAML::EndSeq;
            e << YAML::Key << "model" << YAML::Value << to_string(model);
            e << YAML::Key << "snr_db" << YAML::Value << YAML::Flow << snr_db;
            e << YAML::Key << "power_db" << YAML::Value << power_db;
            e << YAML::Key << "noise_var" << YAML::Value << YAML::Flow << noise_var;
            e << YAML::Key << "quadrature_T" << YAML::Value << quadrature_T;
            e << YAML::Key << "ccf_method" << YAML::Value << to_string(ccf_method);
            e << YAML::Key << "region_samples" << YAML::Value << region_samples;
            if (sweep)
            {
                e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
                e << YAML::Key << "variable" << YAML::Value << sweep->variable;
                e << YAML::Key << "values" << YAML::Value << YAML::Flow << sweep->values;
                e << YAML::EndMap;
            }
            e << YAML::EndMap;
            return std::string(e.c_str()) + "\n";
        }
    };

    namespace detail
    {
        [[noreturn]] inline void fail(const YAML::Node &n, const std::string &msg)
        {
            const YAML::Mark m = n.Mark();
            if (m.is_null())
                throw ScenarioError(msg);
            throw ScenarioError(msg, m.line + 1, m.column + 1);
        }

        inline double scalar_number(const YAML::Node &n, const std::string &field)
        {
            if (!n.IsScalar())
                fail(n, field + ": expected a number");
            try
            {
                std::size_t pos = 0;
                const std::string s = n.Scalar();
                const double v = std::stod(s, &pos);
                if (pos != s.size())
                    throw std::invalid_argument(s);
                return v;
            }
            catch (const std::exception &)
            {
                fail(n, field + ": expected a number, got '" + n.Scalar() + "'");
            }
        }

        // "[coef][*]symbol[/den]" with a plain number meaning `coef` itself. Returns {value, had_symbol}.
        inline std::pair<double, bool> parse_multiple(const YAML::Node &n, const std::string &field, const std::string &symbol)
        {
            if (!n.IsScalar())
                fail(n, field + ": expected a scalar");
            const std::string s = n.Scalar();
            static const std::string num = R"(([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?))";
            const std::regex re("^\\s*" + num + "?\\s*\\*?\\s*" + symbol + "\\s*(?:/\\s*" + num + ")?\\s*$");
            std::smatch m;
            if (std::regex_match(s, m, re))
            {
                const double coef = m[1].matched ? std::stod(m[1].str()) : 1.0;
                const double den = m[2].matched ? std::stod(m[2].str()) : 1.0;
                if (!(den > 0.0))
                    fail(n, field + ": zero denominator in '" + s + "'");
                return {coef / den, true};
            }
            return {scalar_number(n, field), false};
        }

        inline double parse_angle(const YAML::Node &n, const std::string &field)
        {
            if (n.IsScalar())
            {
                std::string lower = n.Scalar();
                std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c)
                               { return char(std::tolower(c)); });
                if (lower.find("deg") != std::string::npos || lower.find("°") != std::string::npos)
                    fail(n, field + ": degrees are not accepted; give radians or a multiple of pi (e.g. 2pi/3)");
            }
            const auto [v, had_pi] = parse_multiple(n, field, "pi");
            const double rad = had_pi ? v * std::numbers::pi : v;
            if (!(rad > 0.0 && rad < std::numbers::pi))
                fail(n, field + ": angle must lie in the open interval (0, pi)");
            return rad;
        }

        inline Length parse_length(const YAML::Node &n, const std::string &field)
        {
            const auto [v, had_lambda] = parse_multiple(n, field, "lambda");
            if (!(v > 0.0))
                fail(n, field + ": length must be positive");
            return {v, had_lambda};
        }

        inline int parse_odd(const YAML::Node &n, const std::string &field)
        {
            const double v = scalar_number(n, field);
            if (v != std::floor(v) || v < 1.0 || std::fmod(v, 2.0) != 1.0)
                fail(n, field + ": element counts must be odd positive integers");
            return int(v);
        }

        inline std::vector<double> number_list(const YAML::Node &n, const std::string &field)
        {
            std::vector<double> out;
            if (n.IsSequence())
                for (std::size_t i = 0; i < n.size(); ++i)
                    out.push_back(scalar_number(n[i], field + "[" + std::to_string(i) + "]"));
            else
                out.push_back(scalar_number(n, field));
            if (out.empty())
                fail(n, field + ": at least one value required");
            return out;
        }

        inline void check_keys(const YAML::Node &map, const std::vector<std::string> &allowed, const std::string &where)
        {
            if (!map.IsMap())
                fail(map, where + ": expected a mapping");
            for (auto it = map.begin(); it != map.end(); ++it)
            {
                const std::string key = it->first.as<std::string>();
                if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                    fail(it->first, where + ": unknown key '" + key + "'");
            }
        }

        inline double sweep_value(const YAML::Node &n, const std::string &variable, const std::string &field)
        {
            if (variable == "theta2" || variable == "phi2")
                return parse_angle(n, field);
            return scalar_number(n, field);
        }
    }

    // Parses scenario text; missing keys keep their defaults.
    inline Scenario parse_scenario(const std::string &text)
    {
        YAML::Node root;
        try
        {
            root = YAML::Load(text);
        }
        catch (const YAML::Exception &e)
        {
            throw ScenarioError("parse error: " + e.msg, e.mark.line + 1, e.mark.column + 1);
        }
        Scenario s;
        if (root.IsNull())
        {
            s.validate();
            return s;
        }
        detail::check_keys(root, {"frequency", "array", "users", "layout", "r1", "r2", "model", "snr_db", "power_db", "noise_var",
                                  "quadrature_T", "ccf_method", "region_samples", "sweep"},
                           "scenario");

        if (root["frequency"])
            s.frequency = detail::scalar_number(root["frequency"], "frequency");
        if (const YAML::Node a = root["array"])
        {
            detail::check_keys(a, {"mx", "mz", "n_side", "pitch", "element_side", "xi"}, "array");
            if (a["n_side"])
                s.mx = s.mz = detail::parse_odd(a["n_side"], "array.n_side");
            if (a["mx"])
                s.mx = detail::parse_odd(a["mx"], "array.mx");
            if (a["mz"])
                s.mz = detail::parse_odd(a["mz"], "array.mz");
            if (a["pitch"])
                s.pitch = detail::parse_length(a["pitch"], "array.pitch");
            if (a["element_side"])
                s.element_side = detail::parse_length(a["element_side"], "array.element_side");
            if (a["xi"])
            {
                const double xi = detail::scalar_number(a["xi"], "array.xi");
                if (!(xi > 0.0 && xi <= 1.0))
                    detail::fail(a["xi"], "array.xi: must lie in (0, 1]");
                s.xi = xi;
            }
        }
        if (const YAML::Node l = root["layout"])
        {
            const std::string v = l.as<std::string>();
            if (v == "same-direction")
                s.users[1].theta = s.users[0].theta, s.users[1].phi = s.users[0].phi;
            else if (v != "different-direction")
                detail::fail(l, "layout: expected 'same-direction' or 'different-direction'");
        }
        if (const YAML::Node u = root["users"])
        {
            if (!u.IsSequence() || u.size() == 0)
                detail::fail(u, "users: expected a non-empty list");
            s.users.clear();
            for (std::size_t i = 0; i < u.size(); ++i)
            {
                const std::string f = "users[" + std::to_string(i) + "]";
                detail::check_keys(u[i], {"range", "theta", "phi"}, f);
                UserSpec us;
                if (!u[i]["range"] || !u[i]["theta"] || !u[i]["phi"])
                    detail::fail(u[i], f + ": range, theta and phi are required");
                us.range = detail::scalar_number(u[i]["range"], f + ".range");
                if (!(us.range > 0.0))
                    detail::fail(u[i]["range"], f + ".range: must be positive");
                us.theta = detail::parse_angle(u[i]["theta"], f + ".theta");
                us.phi = detail::parse_angle(u[i]["phi"], f + ".phi");
                s.users.push_back(us);
            }
        }
        if (root["r1"])
            s.users.at(0).range = detail::scalar_number(root["r1"], "r1");
        if (root["r2"])
        {
            if (s.users.size() < 2)
                detail::fail(root["r2"], "r2: scenario has a single user");
            s.users[1].range = detail::scalar_number(root["r2"], "r2");
        }
        if (const YAML::Node m = root["model"])
        {
            const std::string v = m.as<std::string>();
            if (v == "NF" || v == "nf")
                s.model = ChannelModel::near_field;
            else if (v == "FF" || v == "ff")
                s.model = ChannelModel::far_field;
            else
                detail::fail(m, "model: expected NF or FF");
        }
        if (root["snr_db"])
            s.snr_db = detail::number_list(root["snr_db"], "snr_db");
        if (root["power_db"])
            s.power_db = detail::scalar_number(root["power_db"], "power_db");
        if (root["noise_var"])
            s.noise_var = detail::number_list(root["noise_var"], "noise_var");
        if (root["quadrature_T"])
            s.quadrature_T = int(detail::scalar_number(root["quadrature_T"], "quadrature_T"));
        if (root["region_samples"])
            s.region_samples = int(detail::scalar_number(root["region_samples"], "region_samples"));
        if (const YAML::Node c = root["ccf_method"])
        {
            const std::string v = c.as<std::string>();
            if (v == "auto")
                s.ccf_method = CcfMethod::automatic;
            else if (v == "exact")
                s.ccf_method = CcfMethod::exact;
            else if (v == "quadrature")
                s.ccf_method = CcfMethod::quadrature;
            else
                detail::fail(c, "ccf_method: expected auto, exact or quadrature");
        }
        if (const YAML::Node sw = root["sweep"])
        {
            detail::check_keys(sw, {"variable", "values", "from", "to", "step"}, "sweep");
            if (!sw["variable"])
                detail::fail(sw, "sweep: 'variable' is required");
            SweepSpec spec;
            spec.variable = sw["variable"].as<std::string>();
            const auto &wl = sweep_variables();
            if (std::find(wl.begin(), wl.end(), spec.variable) == wl.end())
                detail::fail(sw["variable"], "sweep.variable: '" + spec.variable + "' is not one of the supported sweep variables");
            if (sw["values"])
            {
                const YAML::Node v = sw["values"];
                if (!v.IsSequence())
                    detail::fail(v, "sweep.values: expected a list");
                for (std::size_t i = 0; i < v.size(); ++i)
                    spec.values.push_back(detail::sweep_value(v[i], spec.variable, "sweep.values[" + std::to_string(i) + "]"));
            }
            else if (sw["from"] && sw["to"] && sw["step"])
            {
                const double from = detail::sweep_value(sw["from"], spec.variable, "sweep.from");
                const double to = detail::sweep_value(sw["to"], spec.variable, "sweep.to");
                double step = 0.0;
                if (spec.variable == "theta2" || spec.variable == "phi2")
                {
                    const auto [v, had_pi] = detail::parse_multiple(sw["step"], "sweep.step", "pi");
                    step = had_pi ? v * std::numbers::pi : v;
                }
                else
                    step = detail::scalar_number(sw["step"], "sweep.step");
                if (!(step > 0.0) || to < from)
                    detail::fail(sw, "sweep: need step > 0 and to >= from");
                const auto n = static_cast<long long>(std::floor((to - from) / step + 1e-9));
                if (n > 1000000)
                    detail::fail(sw, "sweep: more than 10^6 points");
                for (long long i = 0; i <= n; ++i)
                    spec.values.push_back(from + double(i) * step);
            }
            else
                detail::fail(sw, "sweep: give either 'values' or 'from'/'to'/'step'");
            std::sort(spec.values.begin(), spec.values.end());
            spec.values.erase(std::unique(spec.values.begin(), spec.values.end()), spec.values.end());
            s.sweep = spec;
        }
        s.validate();
        if (s.sweep)
            for (double v : s.sweep->values)
                s.with(s.sweep->variable, v);
        return s;
    }

    inline Scenario load_scenario(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ScenarioError("cannot open scenario file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_scenario(ss.str());
    }
}

#endif
