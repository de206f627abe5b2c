/*
   Copyright 2026 The opercalc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "opercalc/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"opercalc - exact workbench for filtered flat bundles with bilinear structure"};

    std::string command, scenario_path, out_path;
    int order = -1;
    std::string base_point;
    bool json_only = false, check_all = false;

    static const std::set<std::string> commands = {"validate", "classify", "adjoint", "decompose",
                                                   "higgs",    "degrees",  "moduli",  "extract",
                                                   "build",    "roundtrip"};
    app.add_option("command", command, "one of: validate classify adjoint decompose higgs degrees moduli extract build roundtrip")
        ->required();
    app.add_option("scenario", scenario_path, "scenario file (JSON)")->required();
    app.add_option("--order", order, "series truncation order override");
    app.add_option("--base-point", base_point, "base point override (rational, e.g. 1/2)");
    app.add_flag("--json", json_only, "machine-readable report only");
    app.add_flag("--check-all", check_all, "run every applicable verification on the payload");
    app.add_option("--output", out_path, "also write the report to this file");

    CLI11_PARSE(app, argc, argv);

    using namespace opercalc;
    try {
        if (!commands.count(command)) fail(Errc::ParseError, "unknown command '" + command + "'");

        ScenarioOptions opts;
        if (order >= 0) opts.order = order;
        if (!base_point.empty()) opts.base_point = Rational::from_string(base_point);
        opts.check_all = check_all;

        auto started = std::chrono::steady_clock::now();
        Report rep = run_scenario_file(scenario_path, opts);
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

        if (rep.command != command)
            fail(Errc::ParseError, "scenario file is for command '" + rep.command + "'");

        std::string rendered = json_only ? render_report_json(rep) : render_report_text(rep, elapsed);
        std::cout << rendered;
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            out << rendered;
        }
        return rep.pass ? 0 : 1;
    } catch (const CalcError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::ParseError ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
