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
#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace caviar;

namespace
{
    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
} // namespace

TEST_CASE("record_scene assembles a consistent record")
{
    const UavState state{7, {10, 0, 5}, FlightPhase::cruise};
    const std::vector<RecordedPath> paths{{cdouble(1.0, 0.0), 10.0, 10.0, true}};
    EquivalentMagnitudes m{{0.5, 3.0, 1.0, 3.0}, 1};
    const auto rec = record_scene(2, state, 0.1, 26.5, true, paths, m, 4, 3);
    CHECK(rec.episode_id == 2);
    CHECK(rec.scene_id == 7);
    CHECK(rec.timestamp == doctest::Approx(0.7));
    CHECK(rec.best_index == 1);
    CHECK(rec.top_k_labels == std::vector<std::size_t>{1, 3, 2});
    CHECK(rec.optimum() == 3.0);

    CHECK_THROWS_AS(record_scene(2, state, 0.1, 26.5, true, paths, m, 5, 3), std::invalid_argument);
    // LOS flag without a LOS path
    CHECK_THROWS_AS(record_scene(2, state, 0.1, 26.5, true, {{cdouble(0.1, 0.0), 1.0, 1.0, false}}, m, 4, 3),
                    std::invalid_argument);
}

TEST_CASE("simulated scenes satisfy the record invariants")
{
    const auto model = fixtures::small_mixed_model(40, 8, 2);
    const auto ep = generate_episode(*model, 0, 77, "digest");
    REQUIRE(ep.scenes.size() == 40);
    std::size_t blocked = 0;
    for (std::size_t t = 0; t < ep.scenes.size(); ++t)
    {
        const auto &s = ep.scenes[t];
        REQUIRE(s.scene_id == std::int64_t(t));
        REQUIRE(s.magnitudes.size() == 16);
        REQUIRE(s.best_index == std::size_t(std::max_element(s.magnitudes.begin(), s.magnitudes.end()) - s.magnitudes.begin()));
        REQUIRE(s.top_k_labels.size() == 4);
        REQUIRE(s.top_k_labels.front() == s.best_index);
        const bool in_mask = s.theta_deg >= 20.0 && s.theta_deg <= 30.0;
        REQUIRE(s.los == !in_mask);
        REQUIRE(s.paths.size() == (s.los ? 3u : 2u));
        const auto again = recompute_magnitudes(s.paths, model->tx_codebook(), model->rx_codebook());
        REQUIRE(again.values == s.magnitudes);
        blocked += s.los ? 0 : 1;
    }
    CHECK(blocked > 0);
    CHECK(blocked < ep.scenes.size());
}

TEST_CASE("single-path model drops to a zero channel when blocked")
{
    Scene scene{{0, 0, 0}, {}, {{-90.0, 90.0}}};
    ChannelParams ch;
    ch.num_paths = 1;
    const ScenarioModel model(scene, fixtures::takeoff_land({5, 0, 0}, 5, 3, 3), ch, 4, 1, 0.1, 2, 6);
    const auto ep = generate_episode(model, 0, 1, "");
    for (const auto &s : ep.scenes)
    {
        CHECK_FALSE(s.los);
        CHECK(s.paths.empty());
        CHECK(s.best_index == 0);
        for (double v : s.magnitudes)
            CHECK(v == 0.0);
    }
}

TEST_CASE("episodes are deterministic and independent of the batch")
{
    const auto model = fixtures::small_mixed_model();
    const auto batch = generate_episodes_serial(*model, 4, 5, "d");
    REQUIRE(batch.size() == 4);
    CHECK(generate_episodes_serial(*model, 4, 5, "d") == batch);
    // episode k alone equals episode k inside the batch
    CHECK(generate_episode(*model, 2, 5, "d") == batch[2]);
    CHECK(batch[0].scenes != batch[1].scenes);
    CHECK(generate_episode(*model, 0, 6, "d").scenes != batch[0].scenes);
}

TEST_CASE("parallel generation equals the serial reference")
{
    const auto model = fixtures::small_mixed_model(30, 16, 2);
    CHECK(generate_episodes(*model, 6, 123, "x") == generate_episodes_serial(*model, 6, 123, "x"));
}

TEST_CASE("supervised pairs mirror the scenes")
{
    const auto model = fixtures::small_mixed_model();
    const auto ep = generate_episode(*model, 3, 9, "");
    const auto pairs = to_supervised_pairs(ep);
    REQUIRE(pairs.size() == ep.scenes.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
    {
        CHECK(pairs[i].input.theta_deg == ep.scenes[i].theta_deg);
        CHECK(pairs[i].input.los == ep.scenes[i].los);
        CHECK(pairs[i].input.uav_position == ep.scenes[i].uav_position);
        CHECK(pairs[i].output.best_index == ep.scenes[i].best_index);
        CHECK(pairs[i].output.top_k_labels == ep.scenes[i].top_k_labels);
    }
}

TEST_CASE("dataset write/read round trip is exact")
{
    const auto model = fixtures::small_mixed_model(25, 8, 2);
    const auto episodes = generate_episodes(*model, 3, 41, "abc");
    const auto manifest = make_manifest(*model, "unit", "60 GHz", 3, 41, "abc");
    const auto dir = fixtures::scratch_dir("roundtrip");
    write_episodes(dir, manifest, episodes);
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    CHECK(std::filesystem::exists(dir / episode_file_name(2)));
    CHECK(episode_file_name(2) == "episode_00002.jsonl");

    const auto back = read_episodes(dir);
    CHECK(back.manifest == manifest);
    REQUIRE(back.episodes.size() == episodes.size());
    for (std::size_t e = 0; e < episodes.size(); ++e)
        CHECK(back.episodes[e] == episodes[e]);

    // paths stored in the file reproduce the stored magnitudes
    for (const auto &ep : back.episodes)
        for (const auto &s : ep.scenes)
        {
            const auto m = recompute_magnitudes(s.paths, model->tx_codebook(), model->rx_codebook());
            REQUIRE(m.best_index == s.best_index);
        }

    // rewriting gives identical bytes
    const auto dir2 = fixtures::scratch_dir("roundtrip2");
    write_episodes(dir2, back.manifest, back.episodes);
    CHECK(slurp(dir / "manifest.json") == slurp(dir2 / "manifest.json"));
    CHECK(slurp(dir / episode_file_name(1)) == slurp(dir2 / episode_file_name(1)));
    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("corrupted dataset files raise FormatError with a line number")
{
    const auto model = fixtures::small_mixed_model(10);
    const auto dir = fixtures::scratch_dir("corrupt");
    write_episodes(dir, make_manifest(*model, "c", "60 GHz", 1, 1, ""), generate_episodes(*model, 1, 1, ""));

    const auto file = dir / episode_file_name(0);
    std::vector<std::string> lines;
    {
        std::ifstream in(file);
        for (std::string l; std::getline(in, l);)
            lines.push_back(l);
    }
    REQUIRE(lines.size() == 10);
    lines[4] = "{\"episode_id\": 0, \"scene_id\": ";
    {
        std::ofstream out(file, std::ios::trunc);
        for (const auto &l : lines)
            out << l << '\n';
    }
    try
    {
        read_episodes(dir);
        FAIL("expected a FormatError");
    }
    catch (const FormatError &e)
    {
        CHECK(std::string(e.what()).find(":5") != std::string::npos);
    }

    std::filesystem::remove(file);
    CHECK_THROWS_AS(read_episodes(dir), IoError);
    CHECK_THROWS_AS(read_episodes(dir / "missing"), IoError);
    std::filesystem::remove_all(dir);
}
