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

#pragma once

#include <filesystem>

#include <json.hpp>

#include "core/vvkrr.hpp"

namespace vvbo {

/// JSON bundle {format, kernel, eigvals, hyper, X, Ybar} from which the
/// posterior is rebuilt by replaying the updates.
nlohmann::json posterior_to_json(const Posterior& state);
Posterior posterior_from_json(const nlohmann::json& doc);

void save_posterior(const std::filesystem::path& path, const Posterior& state);
Posterior load_posterior(const std::filesystem::path& path);

}  // namespace vvbo
