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

#include "core/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "core/csv_io.hpp"
#include "core/error.hpp"
#include "core/regret.hpp"

namespace vvbo {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t run_seed(std::uint64_t master, int run) {
    return derive_seed(master, static_cast<std::uint64_t>(run), "run");
}

std::string run_file_stem(Method m, int run) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", run);
    return method_name(m) + "_run" + buf;
}

namespace {

json schedule_json(const StructuredProblem& p) {
    json phases = json::array();
    for (int i = 1; i <= p.num_phases(); ++i) {
        const PhaseDef& def = p.schedule().phases[static_cast<std::size_t>(i - 1)];
        json basis = json::array();
        for (const auto& f : def.basis) {
            if (f.kind == FunctionalDescriptor::Kind::PointEval) {
                basis.push_back({{"kind", "point"}, {"t", f.t}});
            } else {
                basis.push_back({{"kind", "integral"}, {"set", f.set}, {"index", f.index}});
            }
        }
        std::vector<double> w(def.weights.data(), def.weights.data() + def.weights.size());
        const Point& xs = p.argmax(i);
        phases.push_back({{"phase", i},
                          {"basis", basis},
                          {"weights", w},
                          {"beta", def.beta},
                          {"iterations", def.iterations},
                          {"m_norm", p.phase(i).m_norm},
                          {"oracle_value", p.optimum(i)},
                          {"oracle_x", std::vector<double>(xs.data(), xs.data() + xs.size())}});
    }
    return phases;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
}

void clear_previous_runs(const fs::path& runs_dir) {
    if (!fs::exists(runs_dir)) return;
    for (const auto& entry : fs::directory_iterator(runs_dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".csv" || ext == ".FAILED")) fs::remove(entry.path());
    }
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
    if (cfg.n_runs < 1) throw ConfigError("n_runs must be >= 1");
    if (cfg.methods.empty()) throw ConfigError("no methods selected");
    const StructuredProblem problem(cfg.setup);
    const int dim = problem.domain().dim();

    ExperimentSummary summary;
    summary.output_dir = cfg.output_dir;
    const fs::path out = cfg.output_dir;
    const fs::path runs_dir = out / "runs";
    fs::create_directories(runs_dir);
    clear_previous_runs(runs_dir);

    struct Job {
        Method method;
        int run;
        bool ok = false;
        std::string error;
    };
    std::vector<Job> jobs;
    for (Method m : cfg.methods)
        for (int r = 0; r < cfg.n_runs; ++r) jobs.push_back({m, r, false, {}});

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            Job& job = jobs[j];
            const fs::path stem = runs_dir / run_file_stem(job.method, job.run);
            try {
                MethodOptions opts;
                opts.method = job.method;
                opts.regime = cfg.regime;
                opts.beta = cfg.beta;
                opts.truncation = cfg.truncation;
                opts.optimizer = cfg.optimizer;
                opts.run_id = job.run;
                opts.random_first_query = cfg.random_first_query;
                Rng rng(run_seed(cfg.seed, job.run));
                const RegretTrace trace = run_method(problem, opts, rng);
                write_trace_csv(fs::path(stem).concat(".csv"), trace, dim);
                job.ok = true;
            } catch (const std::exception& e) {
                job.error = e.what();
                try {
                    write_text(fs::path(stem).concat(".FAILED"), job.error + "\n");
                } catch (...) {
                }
            }
        }
    };
    const int n_workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    json runs = json::array();
    for (const Job& job : jobs) {
        const std::string stem = run_file_stem(job.method, job.run);
        json r = {{"method", method_name(job.method)},
                  {"run", job.run},
                  {"seed", run_seed(cfg.seed, job.run)},
                  {"status", job.ok ? "ok" : "failed"},
                  {"file", "runs/" + stem + (job.ok ? ".csv" : ".FAILED")}};
        if (!job.ok) {
            r["error"] = job.error;
            summary.failures.push_back(method_name(job.method) + " run " + std::to_string(job.run) + ": " + job.error);
            ++summary.runs_failed;
        } else {
            ++summary.runs_ok;
        }
        runs.push_back(std::move(r));
    }

    json manifest;
    manifest["tool"] = "vvbo";
    manifest["version"] = VVBO_VERSION_STRING;
    manifest["config"] = config_to_json(cfg);
    manifest["regime"] = regime_name(cfg.regime);
    manifest["horizon"] = horizon(problem, cfg.regime);
    manifest["active_phases"] = active_phases(problem, cfg.regime);
    manifest["schedule"] = schedule_json(problem);
    const auto& pts = problem.grid()->points();
    manifest["output_grid"] = {{"points", std::vector<double>(pts.data(), pts.data() + pts.size())},
                               {"rank", problem.grid()->rank()}};
    manifest["seed_rule"] = "run seed = derive_seed(master, run, \"run\"); splitmix64 over (master, run) xor fnv1a64(stream)";
    manifest["frozen_seeds"] = {{"benchmark_seed", cfg.setup.benchmark_seed},
                                {"gp_coefficients", "derive_seed(benchmark_seed, 0, \"gp_alpha\" | \"gp3d_alpha\")"},
                                {"integral_functionals", "derive_seed(benchmark_seed, 1000 * set + index, \"integral_functional\")"}};
    manifest["runs"] = runs;
    write_text(out / "manifest.json", manifest.dump(2) + "\n");

    aggregate_directory(out);
    return summary;
}

void aggregate_directory(const fs::path& dir) {
    const fs::path mpath = dir / "manifest.json";
    std::ifstream in(mpath);
    if (!in) throw InputError("no manifest.json in '" + dir.string() + "'");
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("manifest.json is not valid JSON: " + std::string(e.what()));
    }
    AggregateLabels labels;
    std::vector<std::string> methods;
    int n_runs = 0;
    try {
        labels.benchmark = manifest.at("config").at("benchmark").get<std::string>();
        labels.regime = manifest.at("regime").get<std::string>();
        methods = manifest.at("config").at("methods").get<std::vector<std::string>>();
        n_runs = manifest.at("config").at("n_runs").get<int>();
    } catch (const json::exception& e) {
        throw InputError("manifest.json lacks required fields: " + std::string(e.what()));
    }

    std::vector<AggregateRow> rows;
    for (const auto& name : methods) {
        const Method m = parse_method(name);
        std::vector<RegretTrace> traces;
        for (int r = 0; r < n_runs; ++r) {
            const fs::path csv = dir / "runs" / (run_file_stem(m, r) + ".csv");
            if (fs::exists(dir / "runs" / (run_file_stem(m, r) + ".FAILED")) || !fs::exists(csv)) continue;
            traces.push_back(read_trace_csv(csv));
        }
        auto part = aggregate_runs(name, traces);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    write_csv(dir / "aggregate.csv", aggregate_table(rows, labels));
    write_csv(dir / "plotdata.csv", plotdata_table(rows, labels));
}

OracleReport compute_oracle(BenchmarkId id, int phase, std::uint64_t benchmark_seed) {
    BenchmarkSetup setup = BenchmarkSetup::defaults(id);
    setup.benchmark_seed = benchmark_seed;
    const StructuredProblem p(setup);
    if (phase < 1 || phase > p.num_phases())
        throw InputError("phase must be in 1.." + std::to_string(p.num_phases()));
    return {p.argmax(phase), p.optimum(phase)};
}

}  // namespace vvbo
