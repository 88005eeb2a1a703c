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

#include "core/snapshot.hpp"

#include <fstream>

#include "core/error.hpp"

namespace vvbo {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "vvbo-posterior-1";

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_vec(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

json posterior_to_json(const Posterior& state) {
    const PosteriorHyperparams& h = state.hyper();
    json j;
    j["format"] = kFormat;
    j["kernel"] = {{"family", kernel_family_name(state.kernel().family())},
                   {"length_scales", to_vec(state.kernel().length_scales())},
                   {"variance_scale", state.kernel().variance_scale()},
                   {"nu", state.kernel().nu()}};
    j["eigvals"] = to_vec(state.eigvals());
    j["hyper"] = {{"lambda", h.lambda}, {"gamma", h.gamma}, {"sigma", h.sigma}, {"zeta", h.zeta}};
    if (h.beta_override) j["hyper"]["beta_override"] = *h.beta_override;
    json X = json::array(), Y = json::array();
    for (int i = 0; i < state.size(); ++i) {
        X.push_back(to_vec(state.inputs()[static_cast<std::size_t>(i)]));
        Y.push_back(to_vec(state.observations().row(i).transpose()));
    }
    j["X"] = X;
    j["Ybar"] = Y;
    return j;
}

Posterior posterior_from_json(const json& doc) {
    try {
        if (doc.at("format").get<std::string>() != kFormat) throw InputError("unsupported posterior snapshot format");
        const json& k = doc.at("kernel");
        ScalarKernel kernel(parse_kernel_family(k.at("family").get<std::string>()),
                            from_vec(k.at("length_scales").get<std::vector<double>>()),
                            k.at("variance_scale").get<double>(), k.at("nu").get<double>());
        PosteriorHyperparams h;
        const json& hj = doc.at("hyper");
        h.lambda = hj.at("lambda").get<double>();
        h.gamma = hj.at("gamma").get<double>();
        h.sigma = hj.at("sigma").get<double>();
        h.zeta = hj.at("zeta").get<double>();
        if (hj.contains("beta_override")) h.beta_override = hj.at("beta_override").get<double>();
        Posterior state(std::move(kernel), from_vec(doc.at("eigvals").get<std::vector<double>>()), h);
        const json& X = doc.at("X");
        const json& Y = doc.at("Ybar");
        if (X.size() != Y.size()) throw InputError("posterior snapshot: X and Ybar lengths differ");
        for (std::size_t i = 0; i < X.size(); ++i)
            state.update(from_vec(X[i].get<std::vector<double>>()), from_vec(Y[i].get<std::vector<double>>()));
        return state;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed posterior snapshot: ") + e.what());
    }
}

void save_posterior(const std::filesystem::path& path, const Posterior& state) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << posterior_to_json(state).dump(2) << '\n';
}

Posterior load_posterior(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("posterior snapshot is not valid JSON: ") + e.what());
    }
    return posterior_from_json(doc);
}

}  // namespace vvbo
