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

#include "vvbo/vvbo.h"

#include <filesystem>
#include <new>
#include <string>

#include <json.hpp>

#include "core/config.hpp"
#include "core/error.hpp"
#include "core/experiment.hpp"
#include "core/vvkrr.hpp"

struct vvbo_config {
    vvbo::ExperimentConfig cfg;
    std::string json_cache;
};

struct vvbo_result {
    vvbo::ExperimentSummary summary;
    std::string dir;
};

struct vvbo_posterior {
    vvbo::Posterior state;
};

namespace {

thread_local std::string g_last_error;

vvbo_status fail(vvbo_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class F>
vvbo_status guarded(F&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const vvbo::ConfigError& e) {
        return fail(VVBO_ERR_CONFIG, e.what());
    } catch (const vvbo::InputError& e) {
        return fail(VVBO_ERR_INVALID_ARGUMENT, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(VVBO_ERR_CONFIG, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(VVBO_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(VVBO_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(VVBO_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(VVBO_ERR_INTERNAL, "unknown error");
    }
}

#define VVBO_REQUIRE(cond, what) \
    if (!(cond)) return fail(VVBO_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* vvbo_version(void) { return VVBO_VERSION_STRING; }

const char* vvbo_status_name(vvbo_status status) {
    switch (status) {
        case VVBO_OK: return "ok";
        case VVBO_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case VVBO_ERR_CONFIG: return "config_error";
        case VVBO_ERR_IO: return "io_error";
        case VVBO_ERR_RUN_FAILED: return "run_failed";
        case VVBO_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* vvbo_last_error(void) { return g_last_error.c_str(); }

vvbo_status vvbo_config_from_json(const char* json_text, vvbo_config** out) {
    VVBO_REQUIRE(json_text && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::parse_error& e) {
            throw vvbo::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        *out = new vvbo_config{vvbo::parse_config(doc), {}};
        return VVBO_OK;
    });
}

vvbo_status vvbo_config_from_file(const char* path, vvbo_config** out) {
    VVBO_REQUIRE(path && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new vvbo_config{vvbo::load_config(path), {}};
        return VVBO_OK;
    });
}

vvbo_status vvbo_config_set_output_dir(vvbo_config* cfg, const char* dir) {
    VVBO_REQUIRE(cfg && dir && *dir, "config and a nonempty directory are required");
    return guarded([&] {
        cfg->cfg.output_dir = dir;
        return VVBO_OK;
    });
}

vvbo_status vvbo_config_set_workers(vvbo_config* cfg, int workers) {
    VVBO_REQUIRE(cfg, "null config");
    VVBO_REQUIRE(workers >= 1, "workers must be >= 1");
    cfg->cfg.workers = workers;
    return VVBO_OK;
}

vvbo_status vvbo_config_set_seed(vvbo_config* cfg, uint64_t seed) {
    VVBO_REQUIRE(cfg, "null config");
    cfg->cfg.seed = seed;
    return VVBO_OK;
}

const char* vvbo_config_to_json(vvbo_config* cfg) {
    if (!cfg) return "";
    try {
        cfg->json_cache = vvbo::config_to_json(cfg->cfg).dump(2);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        cfg->json_cache.clear();
    }
    return cfg->json_cache.c_str();
}

void vvbo_config_free(vvbo_config* cfg) { delete cfg; }

vvbo_status vvbo_run_experiment(const vvbo_config* cfg, vvbo_result** out) {
    VVBO_REQUIRE(cfg && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto* res = new vvbo_result{vvbo::run_experiment(cfg->cfg), {}};
        res->dir = res->summary.output_dir.string();
        *out = res;
        if (res->summary.runs_failed > 0) {
            std::string msg = std::to_string(res->summary.runs_failed) + " run(s) failed";
            if (!res->summary.failures.empty()) msg += "; first: " + res->summary.failures.front();
            return fail(VVBO_ERR_RUN_FAILED, msg);
        }
        return VVBO_OK;
    });
}

int vvbo_result_runs_ok(const vvbo_result* res) { return res ? res->summary.runs_ok : 0; }
int vvbo_result_runs_failed(const vvbo_result* res) { return res ? res->summary.runs_failed : 0; }
const char* vvbo_result_output_dir(const vvbo_result* res) { return res ? res->dir.c_str() : ""; }
void vvbo_result_free(vvbo_result* res) { delete res; }

vvbo_status vvbo_aggregate_dir(const char* dir) {
    VVBO_REQUIRE(dir, "null directory");
    return guarded([&] {
        if (!std::filesystem::is_directory(dir)) return fail(VVBO_ERR_IO, std::string("not a directory: ") + dir);
        vvbo::aggregate_directory(dir);
        return VVBO_OK;
    });
}

vvbo_status vvbo_oracle(const char* benchmark, int phase, double* x_out, size_t x_capacity, size_t* dim_out,
                        double* value_out) {
    VVBO_REQUIRE(benchmark && dim_out && value_out, "null argument");
    return guarded([&] {
        const vvbo::OracleReport r = vvbo::compute_oracle(vvbo::parse_benchmark(benchmark), phase);
        *dim_out = static_cast<size_t>(r.x.size());
        *value_out = r.value;
        if (x_out) {
            for (size_t i = 0; i < x_capacity && i < *dim_out; ++i) x_out[i] = r.x(static_cast<Eigen::Index>(i));
        }
        return VVBO_OK;
    });
}

vvbo_status vvbo_posterior_create(int input_dim, double length_scale, const double* eigvals, int rank, double lambda,
                                  vvbo_posterior** out) {
    VVBO_REQUIRE(out && eigvals, "null argument");
    VVBO_REQUIRE(input_dim >= 1 && rank >= 1, "input_dim and rank must be >= 1");
    *out = nullptr;
    return guarded([&] {
        vvbo::PosteriorHyperparams h;
        h.lambda = lambda;
        const Eigen::VectorXd l = Eigen::Map<const Eigen::VectorXd>(eigvals, rank);
        *out = new vvbo_posterior{
            vvbo::Posterior(vvbo::ScalarKernel::isotropic(vvbo::KernelFamily::RBF, length_scale, input_dim), l, h)};
        return VVBO_OK;
    });
}

vvbo_status vvbo_posterior_set_confidence(vvbo_posterior* p, double gamma, double sigma, double zeta) {
    VVBO_REQUIRE(p, "null posterior");
    VVBO_REQUIRE(gamma >= 0.0 && sigma >= 0.0 && zeta > 0.0 && zeta < 1.0,
                 "need gamma >= 0, sigma >= 0 and 0 < zeta < 1");
    return guarded([&] {
        vvbo::PosteriorHyperparams h = p->state.hyper();
        h.gamma = gamma;
        h.sigma = sigma;
        h.zeta = zeta;
        h.beta_override.reset();
        vvbo::Posterior fresh(p->state.kernel(), p->state.eigvals(), h);
        for (int i = 0; i < p->state.size(); ++i)
            fresh.update(p->state.inputs()[static_cast<std::size_t>(i)], p->state.observations().row(i).transpose());
        p->state = std::move(fresh);
        return VVBO_OK;
    });
}

vvbo_status vvbo_posterior_update(vvbo_posterior* p, const double* x, const double* ybar) {
    VVBO_REQUIRE(p && x && ybar, "null argument");
    return guarded([&] {
        p->state.update(Eigen::Map<const Eigen::VectorXd>(x, p->state.input_dim()),
                        Eigen::Map<const Eigen::VectorXd>(ybar, p->state.rank()));
        return VVBO_OK;
    });
}

vvbo_status vvbo_posterior_mean(const vvbo_posterior* p, const double* x, double* mean_out) {
    VVBO_REQUIRE(p && x && mean_out, "null argument");
    return guarded([&] {
        const Eigen::VectorXd m = p->state.mean_coords(Eigen::Map<const Eigen::VectorXd>(x, p->state.input_dim()));
        Eigen::Map<Eigen::VectorXd>(mean_out, m.size()) = m;
        return VVBO_OK;
    });
}

vvbo_status vvbo_posterior_opnorm(const vvbo_posterior* p, const double* x, double* out) {
    VVBO_REQUIRE(p && x && out, "null argument");
    return guarded([&] {
        *out = p->state.variance_opnorm(Eigen::Map<const Eigen::VectorXd>(x, p->state.input_dim()));
        return VVBO_OK;
    });
}

vvbo_status vvbo_posterior_logdet(const vvbo_posterior* p, double* out) {
    VVBO_REQUIRE(p && out, "null argument");
    *out = p->state.log_det();
    return VVBO_OK;
}

vvbo_status vvbo_posterior_beta(const vvbo_posterior* p, double* out) {
    VVBO_REQUIRE(p && out, "null argument");
    return guarded([&] {
        *out = p->state.beta();
        return VVBO_OK;
    });
}

int vvbo_posterior_size(const vvbo_posterior* p) { return p ? p->state.size() : 0; }

void vvbo_posterior_free(vvbo_posterior* p) { delete p; }

}  // extern "C"
