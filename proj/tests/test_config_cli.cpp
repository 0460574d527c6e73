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

#include "caviar/commands.hpp"
#include "caviar/config.hpp"
#include "caviar/errors.hpp"
#include "caviar/report.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace caviar;
using nlohmann::json;

namespace
{
    json minimal_config()
    {
        return json::parse(R"({
            "seed": 5,
            "scene": {"nlos_angle_masks_deg": [[20, 30]]},
            "trajectory": [
                {"phase": "takeoff", "duration": 10, "start": [40, 0, 0], "end": [40, 0, 40]},
                {"phase": "land", "duration": 10, "start": [40, 0, 40], "end": [40, 0, 0]}
            ],
            "antennas": {"num_tx": 8, "num_rx": 1},
            "dataset": {"episodes": 2, "top_k": 3},
            "learning": {"episodes": 5, "bins": 8, "theta_range_deg": [0, 90]},
            "evaluation": {"seeds": 2}
        })");
    }

    std::string error_path(json j)
    {
        try
        {
            settings_from_json(std::move(j));
        }
        catch (const ConfigError &e)
        {
            return e.field_path();
        }
        return "";
    }

    std::filesystem::path write_config(const std::filesystem::path &dir, const json &j)
    {
        const auto p = dir / "config.json";
        std::ofstream(p) << j.dump(2);
        return p;
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
} // namespace

TEST_CASE("defaults are filled in and the digest is stable")
{
    const auto s = settings_from_json(minimal_config());
    CHECK(s.name == "caviar");
    CHECK(s.channel.num_paths == 3);
    CHECK(s.sampling_period == 0.1);
    CHECK(s.learning.alpha == 0.1);
    CHECK(s.num_tx == 8);
    CHECK(s.digest.size() == 16);
    CHECK(settings_from_json(minimal_config()).digest == s.digest);

    auto changed = minimal_config();
    changed["seed"] = 6;
    CHECK(settings_from_json(changed).digest != s.digest);
    CHECK(build_model(s)->episode_length() == 20);
}

TEST_CASE("FNV-1a reference values")
{
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("config errors name the offending field")
{
    auto j = minimal_config();
    j["trajectory"][1]["duration"] = 0;
    CHECK(error_path(j) == "trajectory[1].duration");

    j = minimal_config();
    j["channel"] = {{"nlos_sigma", -1.0}};
    CHECK(error_path(j) == "channel.nlos_sigma");

    j = minimal_config();
    j["antennas"]["nmu_tx"] = 4;
    CHECK(error_path(j) == "antennas.nmu_tx");

    j = minimal_config();
    j["scene"]["obstacles"] = json::array({{{"min", {1, 1, 1}}, {"max", {0, 2, 2}}}});
    CHECK(error_path(j) == "scene.obstacles[0]");

    j = minimal_config();
    j["trajectory"][0]["phase"] = "hover";
    CHECK(error_path(j) == "trajectory[0].phase");

    j = minimal_config();
    j.erase("trajectory");
    CHECK(error_path(j) == "trajectory");

    j = minimal_config();
    j["dataset"]["top_k"] = 9;
    CHECK(error_path(j) == "dataset.top_k");

    j = minimal_config();
    j["trajectory"][1]["end"] = {40, 0, 3};
    CHECK(error_path(j) == "trajectory");
}

TEST_CASE("dotted overrides")
{
    auto j = minimal_config();
    apply_override(j, "channel.nlos_sigma=0.7");
    apply_override(j, "name=run-7");
    apply_override(j, "dataset.episode_length=12");
    const auto s = settings_from_json(j);
    CHECK(s.channel.nlos_sigma == 0.7);
    CHECK(s.name == "run-7");
    CHECK(s.episode_length == 12);
    CHECK(s.effective["channel"]["nlos_sigma"] == 0.7);
    CHECK_THROWS_AS(apply_override(j, "novalue"), ConfigError);
    CHECK_THROWS_AS(apply_override(j, "name.sub=1"), ConfigError);
}

TEST_CASE("shipped fig8 config loads")
{
    const auto s = load_settings(fixtures::fig8_config());
    CHECK(build_model(s)->episode_length() == 2000);
    CHECK(s.num_tx == 64);
    CHECK(s.learning.episodes == 200);
    CHECK(s.evaluation_seeds == 20);
    CHECK_THROWS_AS(load_settings(fixtures::config_dir() / "missing.json"), IoError);
}

TEST_CASE("fig8 LOS blockage follows the mask exactly")
{
    const auto s = load_settings(fixtures::fig8_config());
    const auto model = build_model(s);
    int windows = 0;
    bool prev = false;
    for (std::int64_t t = 0; t < model->episode_length(); ++t)
    {
        const auto pos = trajectory_state(model->plan(), t).position;
        const double theta = bs_to_uav_angle_deg(model->scene().bs_position, pos);
        const bool blocked = los_blocked(model->scene(), model->scene().bs_position, pos);
        REQUIRE(blocked == (theta >= 20.0 && theta <= 30.0));
        if (blocked && !prev)
            ++windows;
        prev = blocked;
    }
    CHECK(windows >= 2);
}

TEST_CASE("commands: exit codes and outputs")
{
    const auto dir = fixtures::scratch_dir("cli");
    std::ostringstream log, err;
    RunOptions opts;
    opts.config_path = write_config(dir, minimal_config());
    opts.out_dir = dir / "gen";
    CHECK(run_command("generate", opts, {}, log, err) == ExitCode::ok);
    CHECK(std::filesystem::exists(dir / "gen" / "manifest.json"));
    CHECK(read_episodes(dir / "gen").episodes.size() == 2);

    opts.out_dir = dir / "train";
    CHECK(run_command("train", opts, {}, log, err) == ExitCode::ok);
    CHECK(std::filesystem::exists(dir / "train" / "policy.json"));
    CHECK(std::filesystem::exists(dir / "train" / "learning_curve.csv"));

    opts.out_dir = dir / "eval";
    opts.policy_path = dir / "train" / "policy.json";
    CHECK(run_command("evaluate", opts, {}, log, err) == ExitCode::ok);
    const auto trace = dir / "eval" / "trace.csv";
    CHECK(std::filesystem::exists(dir / "eval" / "summary.json"));

    std::ostringstream rep;
    CHECK(run_command("report", opts, trace, rep, err) == ExitCode::ok);
    CHECK(rep.str().find("rl") != std::string::npos);
    const auto summary = summarize_trace(trace);
    CHECK(summary.rows == 2u * 20u);
    CHECK(summary.seeds == 2);
    CHECK(summary.policies == std::vector<std::string>{"oracle", "baseline", "rl"});
    CHECK(summary.policy_means[0] == doctest::Approx(summary.optimum_mean));

    // evaluating a policy trained for a different codebook is a config error
    auto other = minimal_config();
    other["antennas"]["num_tx"] = 4;
    opts.config_path = write_config(dir, other);
    CHECK(run_command("evaluate", opts, {}, log, err) == ExitCode::config);

    opts.policy_path.reset();
    opts.overrides = {"channel.num_paths=0"};
    CHECK(run_command("generate", opts, {}, log, err) == ExitCode::config);
    opts.overrides.clear();
    opts.config_path = dir / "nope.json";
    CHECK(run_command("generate", opts, {}, log, err) == ExitCode::io);
    CHECK(run_command("dance", opts, {}, log, err) == ExitCode::usage);

    std::ofstream(dir / "bad.json") << "{ not json";
    opts.config_path = dir / "bad.json";
    CHECK(run_command("train", opts, {}, log, err) == ExitCode::config);

    std::ofstream(dir / "bad.csv") << "seed,t,theta_deg,los,oracle,optimum\n1,0,abc,1,2,2\n";
    CHECK(run_command("report", opts, dir / "bad.csv", log, err) == ExitCode::io);
    std::filesystem::remove_all(dir);
}

TEST_CASE("generate twice with the same seed writes identical bytes")
{
    const auto dir = fixtures::scratch_dir("cli_det");
    std::ostringstream log, err;
    RunOptions opts;
    opts.config_path = write_config(dir, minimal_config());
    opts.out_dir = dir / "a";
    REQUIRE(run_command("generate", opts, {}, log, err) == ExitCode::ok);
    opts.out_dir = dir / "b";
    REQUIRE(run_command("generate", opts, {}, log, err) == ExitCode::ok);
    for (const char *f : {"manifest.json", "episode_00000.jsonl", "episode_00001.jsonl"})
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));

    opts.out_dir = dir / "c";
    opts.seed = 6;
    REQUIRE(run_command("generate", opts, {}, log, err) == ExitCode::ok);
    CHECK(slurp(dir / "a" / "episode_00000.jsonl") != slurp(dir / "c" / "episode_00000.jsonl"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("report on empty and header-only traces")
{
    std::istringstream empty("");
    CHECK(summarize_trace(empty).rows == 0);
    std::istringstream header("seed,t,theta_deg,los,oracle,optimum\n");
    const auto s = summarize_trace(header);
    CHECK(s.rows == 0);
    CHECK(format_summary(s).find("no steps") != std::string::npos);

    std::istringstream bad("seed,t,theta_deg,los,oracle,optimum\n1,0,3.0,1,2\n");
    try
    {
        summarize_trace(bad);
        FAIL("expected FormatError");
    }
    catch (const FormatError &e)
    {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("report statistics")
{
    std::istringstream in("seed,t,theta_deg,los,oracle,baseline,optimum\n"
                          "1,0,10,1,8,8,8\n"
                          "1,1,25,0,6,1,6\n"
                          "1,2,26,0,4,1,4\n"
                          "2,0,10,1,8,8,8\n"
                          "2,1,25,0,4,2,4\n"
                          "2,2,26,0,8,2,8\n");
    const auto s = summarize_trace(in);
    CHECK(s.rows == 6);
    CHECK(s.seeds == 2);
    CHECK(s.optimum_mean == doctest::Approx(38.0 / 6.0));
    CHECK(s.optimum_min == 4.0);
    CHECK(s.optimum_seed_avg_min == doctest::Approx(5.0));
    CHECK(s.policy_means[1] == doctest::Approx(22.0 / 6.0));
    REQUIRE(s.nlos_windows.size() == 1);
    CHECK(s.nlos_windows[0].first_t == 1);
    CHECK(s.nlos_windows[0].last_t == 2);
}
