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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include <doctest.h>

#include "vvbo/vvbo.h"

namespace fs = std::filesystem;

TEST_CASE("version and status names") {
    CHECK(std::strlen(vvbo_version()) > 0);
    CHECK(std::string(vvbo_status_name(VVBO_OK)) == "ok");
    CHECK(std::string(vvbo_status_name(VVBO_ERR_CONFIG)) == "config_error");
}

TEST_CASE("config errors carry a message") {
    vvbo_config* cfg = nullptr;
    CHECK(vvbo_config_from_json("{not json", &cfg) == VVBO_ERR_CONFIG);
    CHECK(cfg == nullptr);
    CHECK(std::strlen(vvbo_last_error()) > 0);
    CHECK(vvbo_config_from_json(R"({"schema_version":1,"benchmark":"gp","bogus":1})", &cfg) == VVBO_ERR_CONFIG);
    CHECK(std::string(vvbo_last_error()).find("bogus") != std::string::npos);
    CHECK(vvbo_config_from_file("/nonexistent/config.json", &cfg) == VVBO_ERR_CONFIG);
    CHECK(vvbo_config_from_json(nullptr, &cfg) == VVBO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("run an experiment through the C interface") {
    const fs::path out = fs::temp_directory_path() / "vvbo_capi_run";
    fs::remove_all(out);
    vvbo_config* cfg = nullptr;
    REQUIRE(vvbo_config_from_json(R"({"schema_version":1,"benchmark":"gp","methods":["vvbo","rbo"],
        "iterations_per_phase":3,"n_runs":2,"acquisition":{"strategy":"grid","resolution":51}})",
                                  &cfg) == VVBO_OK);
    CHECK(vvbo_config_set_output_dir(cfg, out.string().c_str()) == VVBO_OK);
    CHECK(vvbo_config_set_workers(cfg, 2) == VVBO_OK);
    CHECK(vvbo_config_set_workers(cfg, 0) == VVBO_ERR_INVALID_ARGUMENT);
    CHECK(vvbo_config_set_seed(cfg, 9) == VVBO_OK);
    const std::string text = vvbo_config_to_json(cfg);
    CHECK(text.find("\"seed\": 9") != std::string::npos);

    vvbo_result* res = nullptr;
    REQUIRE(vvbo_run_experiment(cfg, &res) == VVBO_OK);
    CHECK(vvbo_result_runs_ok(res) == 4);
    CHECK(vvbo_result_runs_failed(res) == 0);
    CHECK(fs::path(vvbo_result_output_dir(res)) == out);
    CHECK(fs::exists(out / "runs" / "rbo_run001.csv"));
    CHECK(fs::exists(out / "plotdata.csv"));
    CHECK(vvbo_aggregate_dir(out.string().c_str()) == VVBO_OK);
    CHECK(vvbo_aggregate_dir((out / "nowhere").string().c_str()) != VVBO_OK);
    vvbo_result_free(res);
    vvbo_config_free(cfg);
    fs::remove_all(out);
}

TEST_CASE("oracle") {
    double x[3] = {0, 0, 0};
    size_t dim = 0;
    double value = 0.0;
    REQUIRE(vvbo_oracle("gp", 1, x, 3, &dim, &value) == VVBO_OK);
    CHECK(dim == 1);
    CHECK(x[0] >= 0.0);
    CHECK(x[0] <= 1.0);
    CHECK(std::isfinite(value));
    CHECK(vvbo_oracle("nope", 1, x, 3, &dim, &value) == VVBO_ERR_INVALID_ARGUMENT);
    CHECK(vvbo_oracle("gp", 9, x, 3, &dim, &value) == VVBO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("posterior handle") {
    const double eig[2] = {1.0, 0.5};
    vvbo_posterior* p = nullptr;
    CHECK(vvbo_posterior_create(1, 0.2, eig, 2, 0.0, &p) == VVBO_ERR_INVALID_ARGUMENT);
    REQUIRE(vvbo_posterior_create(1, 0.2, eig, 2, 0.01, &p) == VVBO_OK);
    const double x = 0.5, y[2] = {2.0, -1.0};
    REQUIRE(vvbo_posterior_update(p, &x, y) == VVBO_OK);
    CHECK(vvbo_posterior_size(p) == 1);
    double mean[2], opn = 0.0, ld = 0.0, beta = 0.0;
    REQUIRE(vvbo_posterior_mean(p, &x, mean) == VVBO_OK);
    CHECK(mean[0] == doctest::Approx(2.0 / 1.01));
    CHECK(mean[1] == doctest::Approx(-0.5 / 0.51));
    REQUIRE(vvbo_posterior_opnorm(p, &x, &opn) == VVBO_OK);
    CHECK(opn == doctest::Approx(1.0 - 1.0 / 1.01));
    REQUIRE(vvbo_posterior_logdet(p, &ld) == VVBO_OK);
    CHECK(ld == doctest::Approx(std::log(101.0) + std::log(51.0)));
    REQUIRE(vvbo_posterior_set_confidence(p, 1.0, 0.1, 0.1) == VVBO_OK);
    REQUIRE(vvbo_posterior_beta(p, &beta) == VVBO_OK);
    CHECK(beta == doctest::Approx(1.0 + std::sqrt(2.0 * std::log(10.0) + ld)));
    CHECK(vvbo_posterior_set_confidence(p, 1.0, 0.1, 1.5) == VVBO_ERR_INVALID_ARGUMENT);
    const double bad[2] = {NAN, 0.0};
    CHECK(vvbo_posterior_update(p, &x, bad) == VVBO_ERR_INVALID_ARGUMENT);
    CHECK(vvbo_posterior_size(p) == 1);
    vvbo_posterior_free(p);
}
