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

#ifndef CAVIAR_TESTS_FIXTURES_HPP
#define CAVIAR_TESTS_FIXTURES_HPP

#include "caviar/config.hpp"
#include "caviar/episodes.hpp"

#include <filesystem>
#include <memory>
#include <random>
#include <string>

namespace fixtures
{
    inline std::filesystem::path config_dir() { return CAVIAR_TEST_CONFIG_DIR; }
    inline std::filesystem::path fig8_config() { return config_dir() / "fig8.json"; }

    // Unique scratch directory under the system temp dir.
    inline std::filesystem::path scratch_dir(const std::string &tag)
    {
        static std::mt19937_64 gen(std::random_device{}());
        auto dir = std::filesystem::temp_directory_path() / ("caviar_test_" + tag + "_" + std::to_string(gen()));
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        return dir;
    }

    inline caviar::TrajectoryPlan takeoff_land(caviar::Vec3 ground, double altitude, std::int64_t up, std::int64_t down)
    {
        caviar::Vec3 top = ground;
        top.z = altitude;
        return caviar::TrajectoryPlan({{caviar::FlightPhase::takeoff, up, ground, top},
                                       {caviar::FlightPhase::land, down, top, ground}});
    }

    // UAV climbs straight above a BS sitting 10 m below ground: theta = 90 deg at every
    // step, which is on the DFT grid (sin = 1 = 2*32/64). Single LOS path.
    inline std::shared_ptr<const caviar::ScenarioModel> vertical_los_model(std::size_t num_tx = 64,
                                                                           std::int64_t steps = 20)
    {
        caviar::Scene scene{{0, 0, -10}, {}, {}};
        caviar::ChannelParams ch;
        ch.num_paths = 1;
        return std::make_shared<const caviar::ScenarioModel>(scene, takeoff_land({0, 0, 0}, 30, steps / 2, steps - steps / 2),
                                                             ch, num_tx, 1, 0.1, 3, steps);
    }

    // Slanted flight with a mask window and NLOS clutter; small enough for unit tests.
    inline std::shared_ptr<const caviar::ScenarioModel> small_mixed_model(std::int64_t steps = 40, std::size_t num_tx = 16,
                                                                          std::size_t num_rx = 1)
    {
        caviar::Scene scene{{0, 0, 0}, {}, {{20.0, 30.0}}};
        caviar::ChannelParams ch; // defaults: L = 3
        return std::make_shared<const caviar::ScenarioModel>(scene, takeoff_land({40, 0, 0}, 40, steps / 2, steps - steps / 2),
                                                             ch, num_tx, num_rx, 0.1, 4, steps);
    }
} // namespace fixtures

#endif
