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

#include "core/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "core/error.hpp"

namespace vvbo {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
T get(const json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type or missing");
    }
}

double positive(const json& obj, const char* key, const std::string& where) {
    const double v = get<double>(obj, key, where);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(where + "." + key + " must be positive and finite");
    return v;
}

int at_least(const json& obj, const char* key, const std::string& where, int lo) {
    const int v = get<int>(obj, key, where);
    if (v < lo) throw ConfigError(where + "." + key + " must be >= " + std::to_string(lo));
    return v;
}

void parse_kernel(const json& k, ExperimentConfig& cfg) {
    check_keys(k, {"family", "length_scale", "nu"}, "kernel");
    if (k.contains("family")) {
        try {
            cfg.setup.input_family = parse_kernel_family(get<std::string>(k, "family", "kernel"));
        } catch (const InputError& e) {
            throw ConfigError(std::string("kernel.family: ") + e.what());
        }
    }
    if (k.contains("length_scale")) cfg.setup.input_length_scale = positive(k, "length_scale", "kernel");
    if (k.contains("nu")) {
        cfg.setup.input_nu = get<double>(k, "nu", "kernel");
        if (cfg.setup.input_nu != 1.5 && cfg.setup.input_nu != 2.5) throw ConfigError("kernel.nu must be 1.5 or 2.5");
    }
}

void parse_measurement(const json& m, ExperimentConfig& cfg) {
    check_keys(m, {"kind", "truncation"}, "measurement");
    if (m.contains("kind")) {
        try {
            cfg.regime = parse_regime(get<std::string>(m, "kind", "measurement"));
        } catch (const InputError& e) {
            throw ConfigError(std::string("measurement.kind: ") + e.what());
        }
    }
    if (m.contains("truncation")) {
        const json& t = m.at("truncation");
        check_keys(t, {"kind", "value"}, "measurement.truncation");
        const auto kind = get<std::string>(t, "kind", "measurement.truncation");
        if (kind == "fixed_rank") {
            cfg.truncation = TruncationPolicy::fixed_rank(at_least(t, "value", "measurement.truncation", 1));
        } else if (kind == "energy_fraction") {
            const double rho = get<double>(t, "value", "measurement.truncation");
            if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("measurement.truncation.value must be in (0, 1]");
            cfg.truncation = TruncationPolicy::energy_fraction(rho);
        } else {
            throw ConfigError("measurement.truncation.kind must be fixed_rank or energy_fraction");
        }
    }
}

void parse_beta(const json& b, ExperimentConfig& cfg) {
    check_keys(b, {"source", "value", "gamma", "sigma", "zeta"}, "beta");
    const auto source = b.contains("source") ? get<std::string>(b, "source", "beta") : std::string("table");
    if (source == "table") {
        cfg.beta.source = BetaConfig::Source::Table;
    } else if (source == "fixed") {
        cfg.beta.source = BetaConfig::Source::Fixed;
        cfg.beta.value = get<double>(b, "value", "beta");
        if (!(cfg.beta.value >= 0.0)) throw ConfigError("beta.value must be nonnegative");
    } else if (source == "theoretical") {
        cfg.beta.source = BetaConfig::Source::Theoretical;
        for (const char* k : {"gamma", "sigma", "zeta"})
            if (!b.contains(k)) throw ConfigError(std::string("beta: theoretical radius needs '") + k + "'");
        cfg.beta.gamma = get<double>(b, "gamma", "beta");
        cfg.beta.sigma = get<double>(b, "sigma", "beta");
        cfg.beta.zeta = get<double>(b, "zeta", "beta");
        if (cfg.beta.gamma < 0.0 || cfg.beta.sigma < 0.0) throw ConfigError("beta.gamma and beta.sigma must be >= 0");
        if (!(cfg.beta.zeta > 0.0 && cfg.beta.zeta < 1.0)) throw ConfigError("beta.zeta must be in (0, 1)");
    } else {
        throw ConfigError("beta.source must be table, fixed or theoretical");
    }
}

void parse_acquisition(const json& a, ExperimentConfig& cfg, int dim) {
    check_keys(a, {"strategy", "resolution", "n_starts", "eval_budget", "shrink", "initial_step", "random_first_query"},
               "acquisition");
    if (a.contains("random_first_query")) cfg.random_first_query = get<bool>(a, "random_first_query", "acquisition");
    if (!a.contains("strategy")) return;
    const auto strategy = get<std::string>(a, "strategy", "acquisition");
    if (strategy == "grid") {
        GridStrategy g = dim == 1 ? GridStrategy{{1001}} : GridStrategy{std::vector<int>(static_cast<std::size_t>(dim), 101)};
        if (a.contains("resolution")) {
            const json& r = a.at("resolution");
            if (r.is_number_integer()) {
                g.resolution.assign(static_cast<std::size_t>(dim), r.get<int>());
            } else {
                g.resolution = get<std::vector<int>>(a, "resolution", "acquisition");
            }
        }
        if (static_cast<int>(g.resolution.size()) != dim)
            throw ConfigError("acquisition.resolution needs one entry per input dimension");
        for (int r : g.resolution)
            if (r < 2) throw ConfigError("acquisition.resolution entries must be >= 2");
        cfg.optimizer = {g};
    } else if (strategy == "multistart") {
        MultiStartStrategy m;
        if (a.contains("n_starts")) m.n_starts = at_least(a, "n_starts", "acquisition", 1);
        if (a.contains("eval_budget")) m.eval_budget = at_least(a, "eval_budget", "acquisition", 1);
        if (a.contains("shrink")) m.shrink = get<double>(a, "shrink", "acquisition");
        if (a.contains("initial_step")) m.initial_step = positive(a, "initial_step", "acquisition");
        if (!(m.shrink > 0.0 && m.shrink < 1.0)) throw ConfigError("acquisition.shrink must be in (0, 1)");
        cfg.optimizer = {m};
    } else {
        throw ConfigError("acquisition.strategy must be grid or multistart");
    }
}

PhaseOverride parse_phase(const json& p, std::size_t index) {
    const std::string where = "phases[" + std::to_string(index) + "]";
    check_keys(p, {"points", "integral_set", "weights", "beta", "iterations"}, where);
    PhaseOverride o;
    if (p.contains("points")) o.points = get<std::vector<double>>(p, "points", where);
    if (p.contains("integral_set")) o.integral_set = at_least(p, "integral_set", where, 1);
    if (o.points && o.integral_set) throw ConfigError(where + ": give either points or integral_set");
    if (p.contains("weights")) o.weights = get<std::vector<double>>(p, "weights", where);
    if (p.contains("beta")) {
        o.beta = get<double>(p, "beta", where);
        if (!(*o.beta >= 0.0)) throw ConfigError(where + ".beta must be nonnegative");
    }
    if (p.contains("iterations")) o.iterations = at_least(p, "iterations", where, 0);
    return o;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
    check_keys(doc, {"schema_version", "benchmark", "method", "methods", "measurement", "phases",
                     "iterations_per_phase", "kernel", "output_kernel", "grid", "lambda", "noise_std", "beta",
                     "acquisition", "oracle", "n_runs", "seed", "benchmark_seed", "output_dir", "workers"},
               "config");
    ExperimentConfig cfg;
    if (!doc.contains("schema_version")) throw ConfigError("config: missing schema_version");
    cfg.schema_version = get<int>(doc, "schema_version", "config");
    if (cfg.schema_version != kSchemaVersion)
        throw ConfigError("config: unsupported schema_version " + std::to_string(cfg.schema_version));
    if (!doc.contains("benchmark")) throw ConfigError("config: missing benchmark");
    BenchmarkId id;
    try {
        id = parse_benchmark(get<std::string>(doc, "benchmark", "config"));
    } catch (const InputError& e) {
        throw ConfigError(std::string("config.benchmark: ") + e.what());
    }
    cfg.setup = BenchmarkSetup::defaults(id);
    const int dim = id == BenchmarkId::GP3D ? 3 : 1;
    cfg.optimizer = AcquisitionOptimizer::default_for(dim);

    if (doc.contains("method") && doc.contains("methods")) throw ConfigError("config: give method or methods, not both");
    std::vector<std::string> names;
    if (doc.contains("method")) names.push_back(get<std::string>(doc, "method", "config"));
    if (doc.contains("methods")) names = get<std::vector<std::string>>(doc, "methods", "config");
    if (!names.empty()) {
        cfg.methods.clear();
        for (const auto& n : names) {
            try {
                const Method m = parse_method(n);
                if (std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end())
                    throw ConfigError("config.methods: duplicate method '" + n + "'");
                cfg.methods.push_back(m);
            } catch (const InputError& e) {
                throw ConfigError(std::string("config.methods: ") + e.what());
            }
        }
    }
    if (doc.contains("measurement")) parse_measurement(doc.at("measurement"), cfg);
    if (doc.contains("iterations_per_phase"))
        cfg.setup.iterations_per_phase = at_least(doc, "iterations_per_phase", "config", 0);
    if (doc.contains("phases")) {
        const json& ps = doc.at("phases");
        if (!ps.is_array() || ps.empty()) throw ConfigError("config.phases must be a nonempty array");
        for (std::size_t i = 0; i < ps.size(); ++i) cfg.phases.push_back(parse_phase(ps[i], i));
    }
    if (doc.contains("kernel")) parse_kernel(doc.at("kernel"), cfg);
    if (doc.contains("output_kernel")) {
        const json& k = doc.at("output_kernel");
        check_keys(k, {"family", "length_scale"}, "output_kernel");
        if (k.contains("family") && get<std::string>(k, "family", "output_kernel") != "rbf")
            throw ConfigError("output_kernel.family must be rbf");
        if (k.contains("length_scale")) cfg.setup.output_length_scale = positive(k, "length_scale", "output_kernel");
    }
    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        check_keys(g, {"n_grid", "fit_reg"}, "grid");
        if (g.contains("n_grid")) cfg.setup.n_grid = at_least(g, "n_grid", "grid", 2);
        if (g.contains("fit_reg")) cfg.setup.fit_reg = positive(g, "fit_reg", "grid");
    }
    if (doc.contains("lambda")) cfg.setup.lambda = positive(doc, "lambda", "config");
    if (doc.contains("noise_std")) {
        cfg.setup.noise_std = get<double>(doc, "noise_std", "config");
        if (!(cfg.setup.noise_std >= 0.0)) throw ConfigError("config.noise_std must be nonnegative");
    }
    if (doc.contains("beta")) parse_beta(doc.at("beta"), cfg);
    if (doc.contains("acquisition")) parse_acquisition(doc.at("acquisition"), cfg, dim);
    if (doc.contains("oracle")) {
        const json& o = doc.at("oracle");
        check_keys(o, {"refine", "resolution"}, "oracle");
        if (o.contains("refine")) cfg.setup.oracle_refine = at_least(o, "refine", "oracle", 1);
        if (o.contains("resolution") && get<int>(o, "resolution", "oracle") != oracle_resolution(dim))
            throw ConfigError("oracle.resolution is fixed at " + std::to_string(oracle_resolution(dim)) +
                              " for this benchmark; use oracle.refine to densify");
    }
    if (doc.contains("n_runs")) cfg.n_runs = at_least(doc, "n_runs", "config", 1);
    if (doc.contains("seed")) cfg.seed = get<std::uint64_t>(doc, "seed", "config");
    if (doc.contains("benchmark_seed")) cfg.setup.benchmark_seed = get<std::uint64_t>(doc, "benchmark_seed", "config");
    if (doc.contains("output_dir")) cfg.output_dir = get<std::string>(doc, "output_dir", "config");
    if (doc.contains("workers")) cfg.workers = at_least(doc, "workers", "config", 1);
    resolve_schedule(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

void resolve_schedule(ExperimentConfig& cfg) {
    if (cfg.phases.empty()) {
        cfg.setup.schedule.reset();
        return;
    }
    const BenchmarkSetup& s = cfg.setup;
    const GridPtr grid = make_benchmark_grid(s.id, s.n_grid, s.fit_reg, s.output_length_scale);
    const PhaseSchedule base = table_schedule(s.id, *grid, s.benchmark_seed, s.iterations_per_phase);
    PhaseSchedule out;
    for (std::size_t i = 0; i < cfg.phases.size(); ++i) {
        const PhaseOverride& o = cfg.phases[i];
        PhaseDef def = base.phases[std::min(i, base.phases.size() - 1)];
        if (o.points) {
            def.basis.clear();
            for (double t : *o.points) def.basis.push_back({FunctionalDescriptor::Kind::PointEval, t, 0, 0, {}});
        }
        if (o.integral_set) {
            def.basis.clear();
            for (int k = 1; k <= 5; ++k) {
                def.basis.push_back({FunctionalDescriptor::Kind::Integral, 0.0, *o.integral_set, k,
                                     integral_weight_curve(s.benchmark_seed, *o.integral_set, k, s.n_grid)});
            }
        }
        if (o.weights) def.weights = Eigen::Map<const Eigen::VectorXd>(o.weights->data(), static_cast<Eigen::Index>(o.weights->size()));
        if (def.basis.empty()) throw ConfigError("phases[" + std::to_string(i) + "]: empty basis");
        if (def.weights.size() != static_cast<Eigen::Index>(def.basis.size()))
            throw ConfigError("phases[" + std::to_string(i) + "]: weights must have one entry per basis functional");
        if (o.beta) def.beta = *o.beta;
        if (o.iterations) def.iterations = *o.iterations;
        out.phases.push_back(std::move(def));
    }
    out.validate_table_rules();
    cfg.setup.schedule = std::move(out);
}

json config_to_json(const ExperimentConfig& cfg) {
    const BenchmarkSetup& s = cfg.setup;
    json j;
    j["schema_version"] = cfg.schema_version;
    j["benchmark"] = benchmark_name(s.id);
    json methods = json::array();
    for (Method m : cfg.methods) methods.push_back(method_name(m));
    j["methods"] = methods;
    j["measurement"] = {{"kind", regime_name(cfg.regime)},
                        {"truncation",
                         {{"kind", cfg.truncation.kind == TruncationPolicy::Kind::FixedRank ? "fixed_rank"
                                                                                           : "energy_fraction"},
                          {"value", cfg.truncation.value}}}};
    j["iterations_per_phase"] = s.iterations_per_phase;
    j["kernel"] = {{"family", kernel_family_name(s.input_family)},
                   {"length_scale", s.input_length_scale},
                   {"nu", s.input_nu}};
    j["output_kernel"] = {{"family", "rbf"}, {"length_scale", s.output_length_scale}};
    j["grid"] = {{"n_grid", s.n_grid}, {"fit_reg", s.fit_reg}};
    j["lambda"] = s.lambda;
    j["noise_std"] = s.noise_std;
    switch (cfg.beta.source) {
        case BetaConfig::Source::Table: j["beta"] = {{"source", "table"}}; break;
        case BetaConfig::Source::Fixed: j["beta"] = {{"source", "fixed"}, {"value", cfg.beta.value}}; break;
        case BetaConfig::Source::Theoretical:
            j["beta"] = {{"source", "theoretical"},
                         {"gamma", cfg.beta.gamma},
                         {"sigma", cfg.beta.sigma},
                         {"zeta", cfg.beta.zeta}};
            break;
    }
    if (const auto* g = std::get_if<GridStrategy>(&cfg.optimizer.strategy)) {
        j["acquisition"] = {{"strategy", "grid"}, {"resolution", g->resolution}};
    } else {
        const auto& m = std::get<MultiStartStrategy>(cfg.optimizer.strategy);
        j["acquisition"] = {{"strategy", "multistart"},
                            {"n_starts", m.n_starts},
                            {"eval_budget", m.eval_budget},
                            {"shrink", m.shrink},
                            {"initial_step", m.initial_step}};
    }
    j["acquisition"]["random_first_query"] = cfg.random_first_query;
    if (!cfg.phases.empty()) {
        json phases = json::array();
        for (const PhaseOverride& o : cfg.phases) {
            json p = json::object();
            if (o.points) p["points"] = *o.points;
            if (o.integral_set) p["integral_set"] = *o.integral_set;
            if (o.weights) p["weights"] = *o.weights;
            if (o.beta) p["beta"] = *o.beta;
            if (o.iterations) p["iterations"] = *o.iterations;
            phases.push_back(std::move(p));
        }
        j["phases"] = std::move(phases);
    }
    j["oracle"] = {{"refine", s.oracle_refine}, {"resolution", oracle_resolution(s.id == BenchmarkId::GP3D ? 3 : 1)}};
    j["n_runs"] = cfg.n_runs;
    j["seed"] = cfg.seed;
    j["benchmark_seed"] = s.benchmark_seed;
    j["output_dir"] = cfg.output_dir;
    j["workers"] = cfg.workers;
    return j;
}

}  // namespace vvbo
