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

#include "caviar/config.hpp"
#include "caviar/errors.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

namespace caviar
{
    using nlohmann::json;

    namespace
    {
        std::string join(const std::string &prefix, const std::string &key)
        {
            return prefix.empty() ? key : prefix + "." + key;
        }

        const json &require_object(const json &j, const std::string &path)
        {
            if (!j.is_object())
                throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
            return j;
        }

        void reject_unknown(const json &j, const std::string &path, std::initializer_list<const char *> known)
        {
            const std::set<std::string> allowed(known.begin(), known.end());
            for (auto it = j.begin(); it != j.end(); ++it)
                if (!allowed.count(it.key()))
                    throw ConfigError(join(path, it.key()), "unknown key");
        }

        double get_number(const json &j, const std::string &path)
        {
            if (!j.is_number())
                throw ConfigError(path, "expected a number");
            return j.get<double>();
        }

        std::int64_t get_integer(const json &j, const std::string &path)
        {
            if (!j.is_number_integer())
                throw ConfigError(path, "expected an integer");
            return j.get<std::int64_t>();
        }

        std::size_t get_count(const json &j, const std::string &path, std::int64_t min_value)
        {
            const auto v = get_integer(j, path);
            if (v < min_value)
                throw ConfigError(path, "must be at least " + std::to_string(min_value));
            return std::size_t(v);
        }

        std::string get_string(const json &j, const std::string &path)
        {
            if (!j.is_string())
                throw ConfigError(path, "expected a string");
            return j.get<std::string>();
        }

        Vec3 get_vec3(const json &j, const std::string &path)
        {
            if (!j.is_array() || j.size() != 3)
                throw ConfigError(path, "expected [x, y, z]");
            return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]"), get_number(j[2], path + "[2]")};
        }

        std::pair<double, double> get_interval(const json &j, const std::string &path)
        {
            if (!j.is_array() || j.size() != 2)
                throw ConfigError(path, "expected [lower, upper]");
            const double lo = get_number(j[0], path + "[0]");
            const double hi = get_number(j[1], path + "[1]");
            if (lo > hi)
                throw ConfigError(path, "lower bound exceeds upper bound");
            return {lo, hi};
        }

        template <typename Fn>
        void with(const json &parent, const std::string &parent_path, const char *key, Fn &&fn)
        {
            if (parent.contains(key))
                fn(parent.at(key), join(parent_path, key));
        }

        void parse_scene(const json &j, RunSettings &s)
        {
            const std::string path = "scene";
            require_object(j, path);
            reject_unknown(j, path, {"bs_position", "obstacles", "nlos_angle_masks_deg"});
            with(j, path, "bs_position", [&](const json &v, const std::string &p) { s.scene.bs_position = get_vec3(v, p); });
            with(j, path, "obstacles", [&](const json &v, const std::string &p) {
                if (!v.is_array())
                    throw ConfigError(p, "expected an array");
                for (std::size_t i = 0; i < v.size(); ++i)
                {
                    const std::string bp = p + "[" + std::to_string(i) + "]";
                    require_object(v[i], bp);
                    reject_unknown(v[i], bp, {"min", "max"});
                    if (!v[i].contains("min") || !v[i].contains("max"))
                        throw ConfigError(bp, "needs both min and max");
                    ObstacleBox box{get_vec3(v[i]["min"], bp + ".min"), get_vec3(v[i]["max"], bp + ".max")};
                    if (box.min_corner.x > box.max_corner.x || box.min_corner.y > box.max_corner.y ||
                        box.min_corner.z > box.max_corner.z)
                        throw ConfigError(bp, "min corner exceeds max corner");
                    s.scene.obstacles.push_back(box);
                }
            });
            with(j, path, "nlos_angle_masks_deg", [&](const json &v, const std::string &p) {
                if (!v.is_array())
                    throw ConfigError(p, "expected an array of [lower, upper]");
                for (std::size_t i = 0; i < v.size(); ++i)
                {
                    const auto [lo, hi] = get_interval(v[i], p + "[" + std::to_string(i) + "]");
                    s.scene.nlos_angle_masks.push_back({lo, hi});
                }
            });
        }

        void parse_trajectory(const json &j, RunSettings &s)
        {
            const std::string path = "trajectory";
            if (!j.is_array() || j.empty())
                throw ConfigError(path, "expected a nonempty array of phases");
            for (std::size_t i = 0; i < j.size(); ++i)
            {
                const std::string p = path + "[" + std::to_string(i) + "]";
                require_object(j[i], p);
                reject_unknown(j[i], p, {"phase", "duration", "start", "end"});
                for (const char *key : {"phase", "duration", "start", "end"})
                    if (!j[i].contains(key))
                        throw ConfigError(join(p, key), "missing");
                PhaseSegment seg;
                try
                {
                    seg.phase = flight_phase_from_string(get_string(j[i]["phase"], p + ".phase"));
                }
                catch (const std::invalid_argument &e)
                {
                    throw ConfigError(p + ".phase", e.what());
                }
                seg.duration = std::int64_t(get_count(j[i]["duration"], p + ".duration", 1));
                seg.start_pose = get_vec3(j[i]["start"], p + ".start");
                seg.end_pose = get_vec3(j[i]["end"], p + ".end");
                s.trajectory.push_back(seg);
            }
            try
            {
                TrajectoryPlan check(s.trajectory);
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError(path, e.what());
            }
        }

        void parse_channel(const json &j, RunSettings &s)
        {
            const std::string path = "channel";
            require_object(j, path);
            reject_unknown(j, path, {"num_paths", "los_amplitude", "nlos_sigma", "nlos_aod_range_deg"});
            auto &c = s.channel;
            with(j, path, "num_paths", [&](const json &v, const std::string &p) { c.num_paths = get_count(v, p, 1); });
            with(j, path, "los_amplitude", [&](const json &v, const std::string &p) {
                c.los_amplitude = get_number(v, p);
                if (c.los_amplitude < 0.0)
                    throw ConfigError(p, "must be nonnegative");
            });
            with(j, path, "nlos_sigma", [&](const json &v, const std::string &p) {
                c.nlos_sigma = get_number(v, p);
                if (c.nlos_sigma < 0.0)
                    throw ConfigError(p, "must be nonnegative");
            });
            with(j, path, "nlos_aod_range_deg", [&](const json &v, const std::string &p) {
                const auto [lo, hi] = get_interval(v, p);
                if (lo < -90.0 || hi > 90.0)
                    throw ConfigError(p, "must lie within [-90, 90]");
                c.nlos_aod_min = deg_to_rad(lo);
                c.nlos_aod_max = deg_to_rad(hi);
            });
        }

        void parse_antennas(const json &j, RunSettings &s)
        {
            const std::string path = "antennas";
            require_object(j, path);
            reject_unknown(j, path, {"num_tx", "num_rx"});
            with(j, path, "num_tx", [&](const json &v, const std::string &p) { s.num_tx = get_count(v, p, 1); });
            with(j, path, "num_rx", [&](const json &v, const std::string &p) { s.num_rx = get_count(v, p, 1); });
        }

        void parse_dataset(const json &j, RunSettings &s)
        {
            const std::string path = "dataset";
            require_object(j, path);
            reject_unknown(j, path, {"episodes", "episode_length", "sampling_period_s", "top_k"});
            with(j, path, "episodes", [&](const json &v, const std::string &p) { s.num_episodes = get_count(v, p, 0); });
            with(j, path, "episode_length", [&](const json &v, const std::string &p) {
                if (!v.is_null())
                    s.episode_length = std::int64_t(get_count(v, p, 1));
            });
            with(j, path, "sampling_period_s", [&](const json &v, const std::string &p) {
                s.sampling_period = get_number(v, p);
                if (!(s.sampling_period > 0.0))
                    throw ConfigError(p, "must be positive");
            });
            with(j, path, "top_k", [&](const json &v, const std::string &p) { s.top_k = get_count(v, p, 1); });
        }

        void parse_learning(const json &j, RunSettings &s)
        {
            const std::string path = "learning";
            require_object(j, path);
            reject_unknown(j, path, {"alpha", "gamma", "epsilon_start", "epsilon_end", "decay_fraction", "episodes",
                                     "bins", "theta_range_deg"});
            auto &l = s.learning;
            auto unit = [](const json &v, const std::string &p, bool open_left) {
                const double x = get_number(v, p);
                if (x > 1.0 || x < 0.0 || (open_left && x == 0.0))
                    throw ConfigError(p, open_left ? "must lie in (0, 1]" : "must lie in [0, 1]");
                return x;
            };
            with(j, path, "alpha", [&](const json &v, const std::string &p) { l.alpha = unit(v, p, true); });
            with(j, path, "gamma", [&](const json &v, const std::string &p) { l.gamma = unit(v, p, false); });
            with(j, path, "epsilon_start", [&](const json &v, const std::string &p) { l.epsilon_start = unit(v, p, false); });
            with(j, path, "epsilon_end", [&](const json &v, const std::string &p) { l.epsilon_end = unit(v, p, false); });
            with(j, path, "decay_fraction", [&](const json &v, const std::string &p) { l.decay_fraction = unit(v, p, false); });
            with(j, path, "episodes", [&](const json &v, const std::string &p) { l.episodes = get_count(v, p, 0); });
            with(j, path, "bins", [&](const json &v, const std::string &p) { l.bins = get_count(v, p, 1); });
            with(j, path, "theta_range_deg", [&](const json &v, const std::string &p) {
                const auto [lo, hi] = get_interval(v, p);
                if (lo == hi)
                    throw ConfigError(p, "range is empty");
                l.theta_min_deg = lo;
                l.theta_max_deg = hi;
            });
        }

        json settings_to_json(const RunSettings &s)
        {
            json obstacles = json::array();
            for (const auto &b : s.scene.obstacles)
                obstacles.push_back({{"min", {b.min_corner.x, b.min_corner.y, b.min_corner.z}},
                                     {"max", {b.max_corner.x, b.max_corner.y, b.max_corner.z}}});
            json masks = json::array();
            for (const auto &m : s.scene.nlos_angle_masks)
                masks.push_back({m.lower_deg, m.upper_deg});
            json phases = json::array();
            for (const auto &p : s.trajectory)
                phases.push_back({{"phase", std::string(to_string(p.phase))},
                                  {"duration", p.duration},
                                  {"start", {p.start_pose.x, p.start_pose.y, p.start_pose.z}},
                                  {"end", {p.end_pose.x, p.end_pose.y, p.end_pose.z}}});
            const auto &bs = s.scene.bs_position;
            const auto &l = s.learning;
            return {{"name", s.name},
                    {"frequency", s.frequency},
                    {"seed", s.seed},
                    {"scene", {{"bs_position", {bs.x, bs.y, bs.z}}, {"obstacles", obstacles}, {"nlos_angle_masks_deg", masks}}},
                    {"trajectory", phases},
                    {"channel",
                     {{"num_paths", s.channel.num_paths},
                      {"los_amplitude", s.channel.los_amplitude},
                      {"nlos_sigma", s.channel.nlos_sigma},
                      {"nlos_aod_range_deg", {rad_to_deg(s.channel.nlos_aod_min), rad_to_deg(s.channel.nlos_aod_max)}}}},
                    {"antennas", {{"num_tx", s.num_tx}, {"num_rx", s.num_rx}}},
                    {"dataset",
                     {{"episodes", s.num_episodes},
                      {"episode_length", s.episode_length ? json(*s.episode_length) : json(nullptr)},
                      {"sampling_period_s", s.sampling_period},
                      {"top_k", s.top_k}}},
                    {"learning",
                     {{"alpha", l.alpha},
                      {"gamma", l.gamma},
                      {"epsilon_start", l.epsilon_start},
                      {"epsilon_end", l.epsilon_end},
                      {"decay_fraction", l.decay_fraction},
                      {"episodes", l.episodes},
                      {"bins", l.bins},
                      {"theta_range_deg", {l.theta_min_deg, l.theta_max_deg}}}},
                    {"evaluation", {{"seeds", s.evaluation_seeds}}}};
        }
    } // namespace

    std::string fnv1a_hex(const std::string &bytes)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const unsigned char c : bytes)
        {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    void apply_override(json &config, const std::string &assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError(assignment, "override must look like key.path=value");
        const std::string key = assignment.substr(0, eq);
        const std::string text = assignment.substr(eq + 1);

        json value;
        try
        {
            value = json::parse(text);
        }
        catch (const json::exception &)
        {
            value = text;
        }

        json *node = &config;
        std::size_t start = 0;
        while (true)
        {
            const auto dot = key.find('.', start);
            const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (part.empty())
                throw ConfigError(key, "empty path component");
            if (!node->is_object())
                throw ConfigError(key, "cannot descend into a non-object");
            if (dot == std::string::npos)
            {
                (*node)[part] = value;
                return;
            }
            node = &(*node)[part];
            if (node->is_null())
                *node = json::object();
            start = dot + 1;
        }
    }

    RunSettings settings_from_json(json config)
    {
        RunSettings s;
        require_object(config, "");
        reject_unknown(config, "", {"name", "frequency", "seed", "scene", "trajectory", "channel", "antennas", "dataset",
                                    "learning", "evaluation"});

        with(config, "", "name", [&](const json &v, const std::string &p) { s.name = get_string(v, p); });
        with(config, "", "frequency", [&](const json &v, const std::string &p) { s.frequency = get_string(v, p); });
        with(config, "", "seed", [&](const json &v, const std::string &p) {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
                throw ConfigError(p, "expected a nonnegative integer");
            s.seed = v.get<std::uint64_t>();
        });
        with(config, "", "scene", [&](const json &v, const std::string &) { parse_scene(v, s); });
        if (!config.contains("trajectory"))
            throw ConfigError("trajectory", "missing");
        parse_trajectory(config["trajectory"], s);
        with(config, "", "channel", [&](const json &v, const std::string &) { parse_channel(v, s); });
        with(config, "", "antennas", [&](const json &v, const std::string &) { parse_antennas(v, s); });
        with(config, "", "dataset", [&](const json &v, const std::string &) { parse_dataset(v, s); });
        with(config, "", "learning", [&](const json &v, const std::string &) { parse_learning(v, s); });
        with(config, "", "evaluation", [&](const json &v, const std::string &p) {
            require_object(v, p);
            reject_unknown(v, p, {"seeds"});
            with(v, p, "seeds", [&](const json &x, const std::string &xp) { s.evaluation_seeds = get_count(x, xp, 1); });
        });

        if (s.top_k > s.num_tx * s.num_rx)
            throw ConfigError("dataset.top_k", "exceeds the number of beam pairs");
        try
        {
            build_scene(s.scene);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError("scene", e.what());
        }

        s.effective = settings_to_json(s);
        s.digest = fnv1a_hex(s.effective.dump());
        return s;
    }

    RunSettings load_settings(const std::filesystem::path &path, const std::vector<std::string> &overrides)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open config " + path.string());
        json config;
        try
        {
            in >> config;
        }
        catch (const json::exception &e)
        {
            throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
        }
        for (const auto &o : overrides)
            apply_override(config, o);
        return settings_from_json(std::move(config));
    }

    std::shared_ptr<const ScenarioModel> build_model(const RunSettings &settings)
    {
        TrajectoryPlan plan(settings.trajectory);
        const auto length = settings.episode_length.value_or(plan.total_steps());
        return std::make_shared<const ScenarioModel>(build_scene(settings.scene), std::move(plan), settings.channel,
                                                     settings.num_tx, settings.num_rx, settings.sampling_period,
                                                     settings.top_k, length);
    }

    std::string config_reference()
    {
        return R"(Config file (JSON). Keys and defaults:
  name                         "caviar"     dataset name
  frequency                    "60 GHz"     label stored in the manifest
  seed                         2021         master seed (--seed overrides)
  scene.bs_position            [0,0,0]      meters
  scene.obstacles              []           [{"min":[x,y,z],"max":[x,y,z]}]
  scene.nlos_angle_masks_deg   []           [[lower,upper]] elevation windows forced NLOS
  trajectory                   (required)   [{"phase":"takeoff|cruise|land","duration":steps,
                                              "start":[x,y,z],"end":[x,y,z]}]
  channel.num_paths            3            L, LOS path included
  channel.los_amplitude        1.0
  channel.nlos_sigma           0.58         per-axis std of NLOS complex gains
  channel.nlos_aod_range_deg   [-25,-15]
  antennas.num_tx              64           BS ULA size
  antennas.num_rx              1            UAV ULA size
  dataset.episodes             2
  dataset.episode_length       null         null = trajectory length
  dataset.sampling_period_s    0.1
  dataset.top_k                5
  learning.alpha               0.1
  learning.gamma               0.0
  learning.epsilon_start       1.0
  learning.epsilon_end         0.05
  learning.decay_fraction      0.5
  learning.episodes            200
  learning.bins                128
  learning.theta_range_deg     [0,50]
  evaluation.seeds             20
)";
    }
} // namespace caviar
