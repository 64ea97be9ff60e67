// Copyright 2026 The election-arena Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "election/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Deterministic Bully / modified Bully election simulator"};
    app.require_subcommand(1);

    std::string run_file;
    std::string run_trace;
    auto* run = app.add_subcommand("run", "Run a scenario to quiescence and print a summary");
    run->add_option("file", run_file, "Scenario file")->required();
    run->add_option("--trace", run_trace, "Write the event trace to this path");

    std::string sizes_text;
    std::string csv_path;
    auto* table = app.add_subcommand("table", "Worst-case message counts, simulated and closed-form");
    table->add_option("--sizes", sizes_text, "Comma-separated node counts, e.g. 5,10,15")->required();
    table->add_option("--csv", csv_path, "Write CSV rows to this path");

    std::string verify_file;
    auto* verify = app.add_subcommand("verify", "Check a single-detector run against the closed form");
    verify->add_option("file", verify_file, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    using namespace election::cli;
    if (*run) {
        std::optional<std::filesystem::path> trace;
        if (!run_trace.empty()) trace = run_trace;
        return cmd_run(run_file, trace, std::cout, std::cerr);
    }
    if (*table) {
        std::vector<std::int64_t> sizes;
        try {
            sizes = parse_sizes(sizes_text);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
        std::optional<std::filesystem::path> csv;
        if (!csv_path.empty()) csv = csv_path;
        return cmd_table(sizes, csv, std::cout, std::cerr);
    }
    return cmd_verify(verify_file, std::cout, std::cerr);
}
