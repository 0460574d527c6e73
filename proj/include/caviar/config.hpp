// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CAVIAR_CONFIG_HPP
#define CAVIAR_CONFIG_HPP

#include "caviar/agents.hpp"
#include "caviar/episodes.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace caviar
{
    // Parsed experiment configuration. Every field has a default except the trajectory.
    struct RunSettings
    {
        std::string name = "caviar";
        std::string frequency = "60 GHz";
        std::uint64_t seed = 2021;

        SceneConfig scene;
        std::vector<PhaseSegment> trajectory;
        ChannelParams channel;
        std::size_t num_tx = 64;
        std::size_t num_rx = 1;

        std::size_t num_episodes = 2;
        std::optional<std::int64_t> episode_length; // defaults to the trajectory length
        double sampling_period = 0.1;
        std::size_t top_k = 5;

        LearningConfig learning;
        std::size_t evaluation_seeds = 20;

        nlohmann::json effective; // config after overrides, with defaults filled in
        std::string digest;       // FNV-1a 64 of effective.dump(), hex
    };

    // Applies "dotted.key=value"; value is parsed as JSON, falling back to a string.
    void apply_override(nlohmann::json &config, const std::string &assignment);

    // Throws ConfigError naming the offending field path.
    RunSettings settings_from_json(nlohmann::json config);
    RunSettings load_settings(const std::filesystem::path &path, const std::vector<std::string> &overrides = {});

    std::shared_ptr<const ScenarioModel> build_model(const RunSettings &settings);

    std::string fnv1a_hex(const std::string &bytes);

    // Help text listing every key with its default.
    std::string config_reference();
} // namespace caviar

#endif
