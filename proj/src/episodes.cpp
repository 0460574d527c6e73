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

#include "caviar/episodes.hpp"
#include "caviar/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace caviar
{
    using nlohmann::json;

    PathComponent RecordedPath::to_component() const
    {
        return {gain, deg_to_rad(aod_deg), deg_to_rad(aoa_deg), is_los};
    }

    RecordedPath RecordedPath::from_component(const PathComponent &p)
    {
        return {p.gain, rad_to_deg(p.aod), rad_to_deg(p.aoa), p.is_los};
    }

    ChannelMatrix channel_from_paths(const std::vector<RecordedPath> &paths, std::size_t num_tx, std::size_t num_rx)
    {
        if (paths.empty())
            return ChannelMatrix(num_rx, num_tx);

        std::vector<PathComponent> components;
        components.reserve(paths.size());
        for (const auto &p : paths)
            components.push_back(p.to_component());
        return synthesize_channel(components, num_tx, num_rx);
    }

    EquivalentMagnitudes recompute_magnitudes(const std::vector<RecordedPath> &paths, const Codebook &tx,
                                              const Codebook &rx)
    {
        return equivalent_magnitudes(channel_from_paths(paths, tx.num_antennas(), rx.num_antennas()), tx, rx);
    }

    SceneRecord record_scene(std::int64_t episode_id, const UavState &state, double sampling_period,
                             double theta_deg, bool los, std::vector<RecordedPath> paths,
                             EquivalentMagnitudes magnitudes, std::size_t num_pairs, std::size_t k)
    {
        if (magnitudes.values.size() != num_pairs)
            throw std::invalid_argument("record_scene: magnitude count differs from the number of beam pairs.");
        if (magnitudes.best_index >= num_pairs)
            throw std::invalid_argument("record_scene: best index out of range.");
        std::size_t los_paths = 0;
        for (const auto &p : paths)
            los_paths += p.is_los ? 1 : 0;
        if (los_paths != (los ? 1u : 0u))
            throw std::invalid_argument("record_scene: LOS flag inconsistent with the path list.");

        SceneRecord r;
        r.episode_id = episode_id;
        r.scene_id = state.t;
        r.timestamp = double(state.t) * sampling_period;
        r.uav_position = state.position;
        r.theta_deg = theta_deg;
        r.los = los;
        r.paths = std::move(paths);
        r.top_k_labels = top_k(magnitudes.values, std::min(k, num_pairs));
        r.best_index = magnitudes.best_index;
        r.magnitudes = std::move(magnitudes.values);
        return r;
    }

    ScenarioModel::ScenarioModel(Scene scene, TrajectoryPlan plan, ChannelParams channel, std::size_t num_tx,
                                 std::size_t num_rx, double sampling_period, std::size_t top_k,
                                 std::int64_t episode_length)
        : scene_(std::move(scene)), plan_(std::move(plan)), channel_(channel), tx_(Codebook::dft(num_tx)),
          rx_(Codebook::dft(num_rx)), sampling_period_(sampling_period), top_k_(top_k),
          episode_length_(episode_length)
    {
        channel_.validate();
        if (!(sampling_period_ > 0.0))
            throw std::invalid_argument("Sampling period must be positive.");
        if (top_k_ < 1 || top_k_ > num_pairs())
            throw std::invalid_argument("top_k must lie in [1, number of beam pairs].");
        if (episode_length_ < 1)
            throw std::invalid_argument("Episode length must be at least 1.");
    }

    SceneRecord ScenarioModel::simulate(std::int64_t episode_id, std::int64_t t, RandomStream &rng) const
    {
        const UavState state = trajectory_state(plan_, t);
        const double theta_rad = elevation_rad(scene_.bs_position, state.position);
        const bool los = !los_blocked(scene_, scene_.bs_position, state.position);

        std::vector<RecordedPath> paths;
        for (const auto &p : draw_multipath(rng, theta_rad, !los, channel_))
            paths.push_back(RecordedPath::from_component(p));

        auto magnitudes = recompute_magnitudes(paths, tx_, rx_);
        return record_scene(episode_id, state, sampling_period_, rad_to_deg(theta_rad), los, std::move(paths),
                            std::move(magnitudes), num_pairs(), top_k_);
    }

    std::uint64_t episode_seed(std::uint64_t master_seed, std::int64_t episode_id)
    {
        return mix_seed(master_seed, static_cast<std::uint64_t>(episode_id));
    }

    Episode generate_episode(const ScenarioModel &model, std::int64_t episode_id, std::uint64_t master_seed,
                             const std::string &config_digest)
    {
        Episode episode;
        episode.episode_id = episode_id;
        episode.seed = episode_seed(master_seed, episode_id);
        episode.config_digest = config_digest;

        RandomStream rng(episode.seed);
        episode.scenes.reserve(static_cast<std::size_t>(model.episode_length()));
        for (std::int64_t t = 0; t < model.episode_length(); ++t)
            episode.scenes.push_back(model.simulate(episode_id, t, rng));
        return episode;
    }

    std::vector<Episode> generate_episodes_serial(const ScenarioModel &model, std::size_t count,
                                                  std::uint64_t master_seed, const std::string &config_digest)
    {
        std::vector<Episode> episodes;
        episodes.reserve(count);
        for (std::size_t e = 0; e < count; ++e)
            episodes.push_back(generate_episode(model, std::int64_t(e), master_seed, config_digest));
        return episodes;
    }

    std::vector<Episode> generate_episodes(const ScenarioModel &model, std::size_t count, std::uint64_t master_seed,
                                           const std::string &config_digest)
    {
        std::vector<Episode> episodes(count);
        const auto n = static_cast<std::ptrdiff_t>(count);

        // exceptions must not cross the parallel region boundary
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t e = 0; e < n; ++e)
        {
            try
            {
                episodes[std::size_t(e)] = generate_episode(model, e, master_seed, config_digest);
            }
            catch (...)
            {
#pragma omp critical(caviar_generate_failure)
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
        return episodes;
    }

    DatasetManifest make_manifest(const ScenarioModel &model, std::string name, std::string frequency,
                                  std::size_t num_episodes, std::uint64_t master_seed, std::string config_digest)
    {
        DatasetManifest m;
        m.name = std::move(name);
        m.num_episodes = num_episodes;
        m.scenes_per_episode = model.episode_length();
        m.sampling_period = model.sampling_period();
        m.num_tx = model.num_tx();
        m.num_rx = model.num_rx();
        m.num_pairs = model.num_pairs();
        m.frequency = std::move(frequency);
        m.master_seed = master_seed;
        m.config_digest = std::move(config_digest);
        return m;
    }

    std::vector<SupervisedPair> to_supervised_pairs(const Episode &episode)
    {
        std::vector<SupervisedPair> pairs;
        pairs.reserve(episode.scenes.size());
        for (const auto &s : episode.scenes)
            pairs.push_back({{s.uav_position, s.theta_deg, s.los}, {s.best_index, s.top_k_labels}});
        return pairs;
    }

    std::string episode_file_name(std::size_t index)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "episode_%05zu.jsonl", index);
        return buf;
    }

    // ---------- serialization ----------

    namespace
    {
        json vec3_to_json(const Vec3 &v) { return json::array({v.x, v.y, v.z}); }

        Vec3 vec3_from_json(const json &j)
        {
            if (!j.is_array() || j.size() != 3)
                throw FormatError("expected a 3-element position array");
            return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
        }

        json scene_to_json(const SceneRecord &s)
        {
            json paths = json::array();
            for (const auto &p : s.paths)
                paths.push_back({{"gain", {p.gain.real(), p.gain.imag()}},
                                 {"aod_deg", p.aod_deg},
                                 {"aoa_deg", p.aoa_deg},
                                 {"is_los", p.is_los}});
            return {{"episode_id", s.episode_id},
                    {"scene_id", s.scene_id},
                    {"timestamp", s.timestamp},
                    {"uav_position", vec3_to_json(s.uav_position)},
                    {"theta_deg", s.theta_deg},
                    {"los", s.los},
                    {"paths", std::move(paths)},
                    {"magnitudes", s.magnitudes},
                    {"best_index", s.best_index},
                    {"top_k", s.top_k_labels}};
        }

        SceneRecord scene_from_json(const json &j)
        {
            SceneRecord s;
            s.episode_id = j.at("episode_id").get<std::int64_t>();
            s.scene_id = j.at("scene_id").get<std::int64_t>();
            s.timestamp = j.at("timestamp").get<double>();
            s.uav_position = vec3_from_json(j.at("uav_position"));
            s.theta_deg = j.at("theta_deg").get<double>();
            s.los = j.at("los").get<bool>();
            for (const auto &p : j.at("paths"))
            {
                const auto &g = p.at("gain");
                if (!g.is_array() || g.size() != 2)
                    throw FormatError("gain must be a [re, im] pair");
                s.paths.push_back({cdouble(g[0].get<double>(), g[1].get<double>()), p.at("aod_deg").get<double>(),
                                   p.at("aoa_deg").get<double>(), p.at("is_los").get<bool>()});
            }
            s.magnitudes = j.at("magnitudes").get<std::vector<double>>();
            s.best_index = j.at("best_index").get<std::size_t>();
            s.top_k_labels = j.at("top_k").get<std::vector<std::size_t>>();
            return s;
        }

        void write_text(const std::filesystem::path &path, const std::string &text)
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw IoError("cannot open " + path.string() + " for writing");
            out << text;
            if (!out)
                throw IoError("write failed: " + path.string());
        }
    } // namespace

    void write_episodes(const std::filesystem::path &dir, const DatasetManifest &manifest,
                        const std::vector<Episode> &episodes)
    {
        if (manifest.num_episodes != episodes.size())
            throw std::invalid_argument("Manifest episode count differs from the episode list.");

        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw IoError("cannot create " + dir.string() + ": " + ec.message());

        json entries = json::array();
        for (std::size_t e = 0; e < episodes.size(); ++e)
        {
            const auto &episode = episodes[e];
            if (std::int64_t(episode.scenes.size()) != manifest.scenes_per_episode)
                throw std::invalid_argument("Episode length differs from the manifest.");

            std::string body;
            for (const auto &scene : episode.scenes)
            {
                body += scene_to_json(scene).dump();
                body += '\n';
            }
            const auto file = episode_file_name(e);
            write_text(dir / file, body);
            entries.push_back({{"file", file},
                               {"episode_id", episode.episode_id},
                               {"seed", episode.seed},
                               {"config_digest", episode.config_digest}});
        }

        const json m = {{"name", manifest.name},
                        {"format_version", manifest.format_version},
                        {"num_episodes", manifest.num_episodes},
                        {"scenes_per_episode", manifest.scenes_per_episode},
                        {"sampling_period_s", manifest.sampling_period},
                        {"num_tx", manifest.num_tx},
                        {"num_rx", manifest.num_rx},
                        {"num_pairs", manifest.num_pairs},
                        {"frequency", manifest.frequency},
                        {"master_seed", manifest.master_seed},
                        {"config_digest", manifest.config_digest},
                        {"episodes", std::move(entries)}};
        write_text(dir / "manifest.json", m.dump(2) + "\n");
    }

    Dataset read_episodes(const std::filesystem::path &dir)
    {
        const auto manifest_path = dir / "manifest.json";
        std::ifstream in(manifest_path);
        if (!in)
            throw IoError("cannot open " + manifest_path.string());

        json m;
        try
        {
            in >> m;
        }
        catch (const json::exception &e)
        {
            throw FormatError(manifest_path.string() + ": " + e.what());
        }

        Dataset ds;
        json entries;
        try
        {
            auto &man = ds.manifest;
            man.format_version = m.at("format_version").get<std::string>();
            if (man.format_version != dataset_format_version)
                throw FormatError(manifest_path.string() + ": unsupported format version '" + man.format_version +
                                  "'");
            man.name = m.at("name").get<std::string>();
            man.num_episodes = m.at("num_episodes").get<std::size_t>();
            man.scenes_per_episode = m.at("scenes_per_episode").get<std::int64_t>();
            man.sampling_period = m.at("sampling_period_s").get<double>();
            man.num_tx = m.at("num_tx").get<std::size_t>();
            man.num_rx = m.at("num_rx").get<std::size_t>();
            man.num_pairs = m.at("num_pairs").get<std::size_t>();
            man.frequency = m.at("frequency").get<std::string>();
            man.master_seed = m.at("master_seed").get<std::uint64_t>();
            man.config_digest = m.at("config_digest").get<std::string>();
            entries = m.at("episodes");
        }
        catch (const json::exception &e)
        {
            throw FormatError(manifest_path.string() + ": " + e.what());
        }

        if (!entries.is_array() || entries.size() != ds.manifest.num_episodes)
            throw FormatError(manifest_path.string() + ": episode list does not match num_episodes");

        for (const auto &entry : entries)
        {
            Episode episode;
            std::string file;
            try
            {
                file = entry.at("file").get<std::string>();
                episode.episode_id = entry.at("episode_id").get<std::int64_t>();
                episode.seed = entry.at("seed").get<std::uint64_t>();
                episode.config_digest = entry.at("config_digest").get<std::string>();
            }
            catch (const json::exception &e)
            {
                throw FormatError(manifest_path.string() + ": " + e.what());
            }

            const auto path = dir / file;
            std::ifstream ef(path);
            if (!ef)
                throw IoError("cannot open " + path.string());

            std::string line;
            std::size_t line_no = 0;
            while (std::getline(ef, line))
            {
                ++line_no;
                const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
                SceneRecord scene;
                try
                {
                    scene = scene_from_json(json::parse(line));
                }
                catch (const json::exception &e)
                {
                    throw FormatError(where + e.what());
                }
                catch (const FormatError &e)
                {
                    throw FormatError(where + e.what());
                }
                if (scene.episode_id != episode.episode_id)
                    throw FormatError(where + "episode_id differs from the manifest entry");
                if (scene.scene_id != std::int64_t(episode.scenes.size()))
                    throw FormatError(where + "scene_id out of sequence");
                if (scene.magnitudes.size() != ds.manifest.num_pairs || scene.best_index >= ds.manifest.num_pairs)
                    throw FormatError(where + "magnitude count differs from num_pairs");
                episode.scenes.push_back(std::move(scene));
            }
            if (std::int64_t(episode.scenes.size()) != ds.manifest.scenes_per_episode)
                throw FormatError(path.string() + ": expected " + std::to_string(ds.manifest.scenes_per_episode) +
                                  " scenes, found " + std::to_string(episode.scenes.size()));
            ds.episodes.push_back(std::move(episode));
        }
        return ds;
    }
} // namespace caviar
