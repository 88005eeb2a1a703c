// Copyright 2026 The vvbo Authors.
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

// Command-line front end over the vvbo C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vvbo/vvbo.h"

namespace {

constexpr int kUsageExit = 64;

int report_error(vvbo_status status, const std::string& message) {
    const nlohmann::json line = {
        {"error", {{"status", vvbo_status_name(status)}, {"code", static_cast<int>(status)}, {"message", message}}}};
    std::cerr << line.dump() << '\n';
    return static_cast<int>(status);
}

int report_last(vvbo_status status) { return report_error(status, vvbo_last_error()); }

int cmd_run(const std::string& config_path, const std::string& out_dir, int workers, const std::uint64_t* seed) {
    vvbo_config* cfg = nullptr;
    vvbo_status s = vvbo_config_from_file(config_path.c_str(), &cfg);
    if (s != VVBO_OK) return report_last(s);
    if (!out_dir.empty() && (s = vvbo_config_set_output_dir(cfg, out_dir.c_str())) != VVBO_OK) {
        vvbo_config_free(cfg);
        return report_last(s);
    }
    if (workers > 0 && (s = vvbo_config_set_workers(cfg, workers)) != VVBO_OK) {
        vvbo_config_free(cfg);
        return report_last(s);
    }
    if (seed) vvbo_config_set_seed(cfg, *seed);

    vvbo_result* res = nullptr;
    s = vvbo_run_experiment(cfg, &res);
    vvbo_config_free(cfg);
    if (s != VVBO_OK) {
        const int code = report_last(s);
        vvbo_result_free(res);
        return code;
    }
    const nlohmann::json line = {{"status", "ok"},
                                 {"output_dir", vvbo_result_output_dir(res)},
                                 {"runs_ok", vvbo_result_runs_ok(res)},
                                 {"runs_failed", vvbo_result_runs_failed(res)}};
    std::cout << line.dump() << '\n';
    vvbo_result_free(res);
    return 0;
}

int cmd_aggregate(const std::string& dir) {
    const vvbo_status s = vvbo_aggregate_dir(dir.c_str());
    if (s != VVBO_OK) return report_last(s);
    std::cout << nlohmann::json{{"status", "ok"}, {"output_dir", dir}}.dump() << '\n';
    return 0;
}

int cmd_oracle(const std::string& benchmark, int phase) {
    std::vector<double> x(8);
    std::size_t dim = 0;
    double value = 0.0;
    const vvbo_status s = vvbo_oracle(benchmark.c_str(), phase, x.data(), x.size(), &dim, &value);
    if (s != VVBO_OK) return report_last(s);
    x.resize(dim);
    const nlohmann::json line = {{"benchmark", benchmark}, {"phase", phase}, {"x", x}, {"value", value}};
    std::cout << line.dump() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vvbo: Bayesian optimization with structured measurements"};
    app.set_version_flag("--version", std::string(vvbo_version()));
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int workers = 0;
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory (overrides the config)");
    run->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed, "Master seed (overrides the config)");

    std::string in_dir;
    auto* agg = app.add_subcommand("aggregate", "Rebuild aggregate.csv and plotdata.csv");
    agg->add_option("--in", in_dir, "Experiment output directory")->required();

    std::string benchmark;
    int phase = 1;
    auto* oracle = app.add_subcommand("oracle", "Print the lattice optimum of a phase objective");
    oracle->add_option("--benchmark", benchmark, "Benchmark name")->required();
    oracle->add_option("--phase", phase, "Phase index (1-based)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        const nlohmann::json line = {{"error", {{"status", "usage_error"}, {"code", kUsageExit}, {"message", e.what()}}}};
        std::cerr << line.dump() << '\n';
        return kUsageExit;
    }

    if (*run) return cmd_run(config_path, out_dir, workers, *seed_opt ? &seed : nullptr);
    if (*agg) return cmd_aggregate(in_dir);
    if (*oracle) return cmd_oracle(benchmark, phase);
    return report_error(VVBO_ERR_INVALID_ARGUMENT, "no subcommand");
}
