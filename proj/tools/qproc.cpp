// Copyright 2026 The qproc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qproc: run processor scenarios and describe catalog operators.
//
//   qproc run --config paper-claims --format json --out report.json
//   qproc describe example2 --dim 6 --param theta=0.3
//
// Exit codes: 0 success, 1 a scenario missed its tolerance, 2 invalid config
// or arguments, 3 unreadable config file.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bundled_configs.hpp"
#include "qproc/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;
constexpr int kExitUnreadable = 3;

using qproc::harness::json;

json load_config(const std::string &source) {
    if (auto bundled = qproc::bundled::find_config(source)) {
        return json::parse(*bundled);
    }
    return qproc::harness::read_config_file(source);
}

int write_output(const std::string &text, const std::string &out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitConfig;
    }
    out << text;
    return kExitOk;
}

struct RunOptions {
    std::string config;
    std::string out;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    bool timing = false;
};

int cmd_run(const RunOptions &opt) {
    qproc::harness::ScenarioConfig config;
    try {
        json raw = load_config(opt.config);
        config = qproc::harness::parse_config(raw, {opt.seed, opt.trials});
    } catch (const qproc::harness::ConfigReadError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnreadable;
    } catch (const std::exception &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::vector<qproc::harness::ReportRow> rows = qproc::harness::run_config(config, opt.timing);
    const std::string text = opt.format == "csv" ? qproc::harness::render_csv(rows)
                                                 : qproc::harness::render_json(rows, config.seed);
    if (int rc = write_output(text, opt.out); rc != kExitOk) {
        return rc;
    }
    bool failed = false;
    for (const auto &row : rows) {
        for (const auto &f : row.failures) {
            std::cerr << "FAIL " << row.id << ": " << f << "\n";
            failed = true;
        }
    }
    return failed ? kExitAssertion : kExitOk;
}

struct DescribeOptions {
    std::string name;
    std::size_t dim = 2;
    std::vector<std::string> params;
    std::string format = "text";
    std::uint64_t seed = qproc::harness::kDefaultSeed;
    std::string out;
};

int cmd_describe(const DescribeOptions &opt) {
    json params = json::object();
    for (const auto &kv : opt.params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: --param expects key=value, got " << kv << "\n";
            return kExitConfig;
        }
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        json parsed = json::parse(value, nullptr, false);
        params[key] = parsed.is_discarded() ? json(value) : parsed;
    }
    std::size_t dim = opt.dim;
    if (opt.name == "matrix" && params.contains("matrix") && params["matrix"].is_array()) {
        dim = params["matrix"].size();
    }
    try {
        if (!qproc::harness::is_catalog_name(opt.name)) {
            throw qproc::harness::ConfigError("unknown catalog operator \"" + opt.name + "\"");
        }
        qproc::Rng rng(opt.seed);
        auto catalog = qproc::harness::make_catalog_operator(opt.name, dim, params, rng);
        auto description = qproc::harness::describe_operator(catalog.op);
        std::string text = opt.format == "json" ? qproc::harness::description_to_json(description).dump(2) + "\n"
                                                : qproc::harness::render_description_text(description);
        return write_output(text, opt.out);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Programmable qudit processor simulator"};
    app.require_subcommand(1);

    RunOptions run;
    std::uint64_t run_seed = 0;
    std::size_t run_trials = 0;
    auto *run_cmd = app.add_subcommand("run", "Run the scenarios in a config and write a report");
    run_cmd->add_option("--config", run.config, "Config file, or the name of a bundled config (paper-claims)")
        ->required();
    run_cmd->add_option("--out", run.out, "Report path (default: stdout)");
    run_cmd->add_option("--format", run.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    auto *seed_opt = run_cmd->add_option("--seed", run_seed, "Override the config seed");
    auto *trials_opt = run_cmd->add_option("--trials", run_trials, "Override every scenario's trial count")
                           ->check(CLI::PositiveNumber);
    run_cmd->add_flag("--timing", run.timing, "Include wall time per row (makes reports non-reproducible)");

    DescribeOptions describe;
    auto *describe_cmd = app.add_subcommand("describe", "Print an operator, its q_mn table and success probabilities");
    describe_cmd->add_option("name", describe.name, "Catalog name")->required();
    describe_cmd->add_option("--dim", describe.dim, "Qudit dimension");
    describe_cmd->add_option("--param", describe.params, "Catalog parameter key=value (value may be JSON)");
    describe_cmd->add_option("--format", describe.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    describe_cmd->add_option("--seed", describe.seed, "Seed for randomly drawn parameters");
    describe_cmd->add_option("--out", describe.out, "Output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (*run_cmd) {
        if (*seed_opt) {
            run.seed = run_seed;
        }
        if (*trials_opt) {
            run.trials = run_trials;
        }
        return cmd_run(run);
    }
    return cmd_describe(describe);
}
