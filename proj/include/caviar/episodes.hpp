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

#ifndef CAVIAR_EPISODES_HPP
#define CAVIAR_EPISODES_HPP

#include "caviar/beamcodec.hpp"
#include "caviar/channel.hpp"
#include "caviar/world.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace caviar
{
    inline constexpr const char *dataset_format_version = "caviar-lite/1";

    // Path as stored in records and files, angles in degrees.
    struct RecordedPath
    {
        cdouble gain;
        double aod_deg = 0.0;
        double aoa_deg = 0.0;
        bool is_los = false;

        PathComponent to_component() const;
        static RecordedPath from_component(const PathComponent &p);

        friend bool operator==(const RecordedPath &, const RecordedPath &) = default;
    };

    struct SceneRecord
    {
        std::int64_t episode_id = 0;
        std::int64_t scene_id = 0;
        double timestamp = 0.0; // scene_id * sampling period, seconds
        Vec3 uav_position;
        double theta_deg = 0.0;
        bool los = true;
        std::vector<RecordedPath> paths;
        std::vector<double> magnitudes;
        std::size_t best_index = 0;
        std::vector<std::size_t> top_k_labels;

        double optimum() const { return magnitudes.at(best_index); }

        friend bool operator==(const SceneRecord &, const SceneRecord &) = default;
    };

    // Channel matrix built from recorded paths; all-zero when no path survived.
    ChannelMatrix channel_from_paths(const std::vector<RecordedPath> &paths, std::size_t num_tx, std::size_t num_rx);

    // Pair sweep over recorded paths. Generation and verification share this path.
    EquivalentMagnitudes recompute_magnitudes(const std::vector<RecordedPath> &paths, const Codebook &tx,
                                              const Codebook &rx);

    // Assembles a record and checks that its pieces agree. Throws std::invalid_argument.
    SceneRecord record_scene(std::int64_t episode_id, const UavState &state, double sampling_period,
                             double theta_deg, bool los, std::vector<RecordedPath> paths,
                             EquivalentMagnitudes magnitudes, std::size_t num_pairs, std::size_t k);

    // Everything needed to simulate one discrete-time scene.
    class ScenarioModel
    {
    public:
        ScenarioModel(Scene scene, TrajectoryPlan plan, ChannelParams channel, std::size_t num_tx, std::size_t num_rx,
                      double sampling_period, std::size_t top_k, std::int64_t episode_length);

        const Scene &scene() const { return scene_; }
        const TrajectoryPlan &plan() const { return plan_; }
        const ChannelParams &channel() const { return channel_; }
        const Codebook &tx_codebook() const { return tx_; }
        const Codebook &rx_codebook() const { return rx_; }
        std::size_t num_tx() const { return tx_.num_antennas(); }
        std::size_t num_rx() const { return rx_.num_antennas(); }
        std::size_t num_pairs() const { return tx_.size() * rx_.size(); }
        double sampling_period() const { return sampling_period_; }
        std::size_t top_k() const { return top_k_; }
        std::int64_t episode_length() const { return episode_length_; }

        // Fixed draw order: geometry, LOS test, multipath draw from rng.
        SceneRecord simulate(std::int64_t episode_id, std::int64_t t, RandomStream &rng) const;

    private:
        Scene scene_;
        TrajectoryPlan plan_;
        ChannelParams channel_;
        Codebook tx_;
        Codebook rx_;
        double sampling_period_;
        std::size_t top_k_;
        std::int64_t episode_length_;
    };

    struct Episode
    {
        std::int64_t episode_id = 0;
        std::uint64_t seed = 0;
        std::string config_digest;
        std::vector<SceneRecord> scenes;

        friend bool operator==(const Episode &, const Episode &) = default;
    };

    struct DatasetManifest
    {
        std::string name;
        std::string format_version = dataset_format_version;
        std::size_t num_episodes = 0;
        std::int64_t scenes_per_episode = 0;
        double sampling_period = 0.1;
        std::size_t num_tx = 0;
        std::size_t num_rx = 0;
        std::size_t num_pairs = 0;
        std::string frequency;
        std::uint64_t master_seed = 0;
        std::string config_digest;

        friend bool operator==(const DatasetManifest &, const DatasetManifest &) = default;
    };

    struct Dataset
    {
        DatasetManifest manifest;
        std::vector<Episode> episodes;
    };

    std::uint64_t episode_seed(std::uint64_t master_seed, std::int64_t episode_id);

    Episode generate_episode(const ScenarioModel &model, std::int64_t episode_id, std::uint64_t master_seed,
                             const std::string &config_digest);

    // Reference: episodes one after another.
    std::vector<Episode> generate_episodes_serial(const ScenarioModel &model, std::size_t count,
                                                  std::uint64_t master_seed, const std::string &config_digest);
    // Episodes spread over OpenMP threads; identical output to the serial version.
    std::vector<Episode> generate_episodes(const ScenarioModel &model, std::size_t count, std::uint64_t master_seed,
                                           const std::string &config_digest);

    DatasetManifest make_manifest(const ScenarioModel &model, std::string name, std::string frequency,
                                  std::size_t num_episodes, std::uint64_t master_seed, std::string config_digest);

    struct SupervisedInput
    {
        Vec3 uav_position;
        double theta_deg = 0.0;
        bool los = true;
    };

    struct SupervisedOutput
    {
        std::size_t best_index = 0;
        std::vector<std::size_t> top_k_labels;
    };

    struct SupervisedPair
    {
        SupervisedInput input;
        SupervisedOutput output;
    };

    std::vector<SupervisedPair> to_supervised_pairs(const Episode &episode);

    std::string episode_file_name(std::size_t index);

    // manifest.json plus episode_NNNNN.jsonl, one scene per line.
    void write_episodes(const std::filesystem::path &dir, const DatasetManifest &manifest,
                        const std::vector<Episode> &episodes);
    Dataset read_episodes(const std::filesystem::path &dir);
} // namespace caviar

#endif
