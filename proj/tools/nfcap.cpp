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

#include "nfcap/experiments/experiments.hpp"

#ifdef NFCAP_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace
{
    using namespace nfcap;
    using namespace nfcap::experiments;

    enum ExitCode
    {
        exit_ok = 0,
        exit_usage = 1,
        exit_validation = 2,
        exit_verification = 3
    };

    struct Options
    {
        std::string config;
        std::string out;
        bool verify = false;
        int quadrature_T = 0;
        unsigned threads = 1;
        std::string preset;
        std::string kind = "mac";
    };

    void add_common(CLI::App *sub, Options &o)
    {
        sub->add_option("--config", o.config, "Scenario file (YAML); defaults apply when omitted")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "CSV output path; a .meta.yaml sidecar is written next to it (stdout when omitted)");
        sub->add_flag("--verify", o.verify, "Compare closed forms with brute-force oracles (M <= 65x65) and flag failures");
        sub->add_option("--quadrature-T", o.quadrature_T, "Gauss-Chebyshev nodes for the NF CCF quadrature")->check(CLI::Range(2, 100000));
        sub->add_option("--threads", o.threads, "Worker threads for sweep points")->check(CLI::Range(1u, 1024u));
    }

    int emit(const SweepResult &r, const Options &o)
    {
        if (o.out.empty())
        {
            write_csv(r, std::cout);
            for (const auto &n : r.notes)
                std::cerr << "note: " << n << "\n";
        }
        else
        {
            emit_csv(r, o.out);
            for (const auto &n : r.notes)
                if (r.verification_failed)
                    std::cerr << "note: " << n << "\n";
        }
        if (r.verification_failed)
        {
            std::cerr << "verification failed\n";
            return exit_verification;
        }
        return exit_ok;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Near-field multiuser capacity calculator"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);
    Options o;

    std::vector<std::pair<std::string, std::string>> subs = {
        {"channel", "Channel gains and correlation factor"},
        {"mac", "Uplink MAC sum capacity, SIC corners, linear combiners, asymptote"},
        {"bc", "Downlink BC capacity, power allocation, linear precoders, asymptote"},
        {"mc", "Multicast capacity and bounds"},
        {"region", "MAC and BC rate-region vertices"},
        {"sweep", "Run the scenario's sweep block for one quantity (--kind)"},
        {"reproduce", "Emit the data behind one figure preset"},
        {"verify", "Closed form versus oracle report"},
    };
    std::map<std::string, CLI::App *> cmd;
    for (const auto &[name, help] : subs)
    {
        cmd[name] = app.add_subcommand(name, help);
        add_common(cmd[name], o);
    }
    cmd["sweep"]->add_option("--kind", o.kind, "Quantity to sweep")->check(CLI::IsMember({"channel", "mac", "bc", "mc", "region"}));
    cmd["reproduce"]->add_option("preset", o.preset, "Figure preset")->required()->check(CLI::IsMember(preset_names()));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try
    {
        Scenario s = o.config.empty() ? Scenario{} : load_scenario(o.config);
        s.validate();
        RunOptions ro;
        ro.verify = o.verify;
        ro.threads = o.threads;
        if (o.quadrature_T > 0)
            ro.quadrature_T = o.quadrature_T;

        const auto by_kind = [&](const std::string &kind) -> SweepResult
        {
            if (kind == "channel")
                return run_channel(s, ro);
            if (kind == "mac")
                return run_mac(s, ro);
            if (kind == "bc")
                return run_bc(s, ro);
            if (kind == "mc")
                return run_mc(s, ro);
            return run_region(s, ro);
        };

        const CLI::App *used = app.get_subcommands().front();
        const std::string name = used->get_name();
        if (name == "sweep")
        {
            if (!s.sweep)
                throw ScenarioError("sweep: the scenario has no 'sweep' block");
            return emit(by_kind(o.kind), o);
        }
        if (name == "reproduce")
        {
            SweepResult r = reproduce(o.preset, s, ro);
            if (o.verify)
            {
                const SweepResult v = run_verify(s, ro);
                r.notes.insert(r.notes.end(), v.notes.begin(), v.notes.end());
                r.verification_failed = v.verification_failed;
                r.notes.push_back(v.verification_failed ? "oracle verification of the base scenario failed"
                                                        : "oracle verification of the base scenario passed");
            }
            return emit(r, o);
        }
        if (name == "verify")
            return emit(run_verify(s, ro), o);
        return emit(by_kind(name), o);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    }
}
