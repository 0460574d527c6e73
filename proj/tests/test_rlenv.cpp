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

#include "caviar/rlenv.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <random>
#include <sstream>
#include <stdexcept>

using namespace caviar;

namespace
{
    std::vector<StepResult> rollout(BeamSelectionEnv &env, std::uint64_t seed, const std::vector<std::size_t> &actions)
    {
        env.reset(seed);
        std::vector<StepResult> out;
        for (std::size_t i = 0; !env.done(); ++i)
            out.push_back(env.step(actions[i % actions.size()]));
        return out;
    }
} // namespace

TEST_CASE("reset returns the first observation and is reproducible")
{
    const auto model = fixtures::small_mixed_model();
    BeamSelectionEnv a(model, 3), b(model, 3);
    const auto oa = a.reset(5);
    const auto ob = b.reset(5);
    CHECK(oa == ob);
    CHECK(oa.t == 0);
    CHECK(a.t() == 0);
    CHECK_FALSE(a.done());
    CHECK(a.current_scene() == b.current_scene());
    CHECK(a.step(1).reward == b.step(1).reward);
}

TEST_CASE("episode terminates after the last step")
{
    const auto model = fixtures::small_mixed_model(12);
    BeamSelectionEnv env(model, 1);
    env.reset(0);
    for (int t = 0; t < 11; ++t)
        CHECK_FALSE(env.step(0).done);
    const auto last = env.step(0);
    CHECK(last.done);
    CHECK(last.info.scene_id == 11);
    CHECK(env.done());
    CHECK_THROWS_AS(env.step(0), std::logic_error);
    CHECK_THROWS_AS(env.current_scene(), std::logic_error);
}

TEST_CASE("environment misuse")
{
    BeamSelectionEnv env(fixtures::small_mixed_model(), 1);
    CHECK_THROWS_AS(env.step(0), std::logic_error);
    env.reset(0);
    CHECK_THROWS_AS(env.step(env.num_actions()), std::out_of_range);
    CHECK(env.t() == 0);
    CHECK_THROWS_AS(BeamSelectionEnv(nullptr, 0), std::invalid_argument);
}

TEST_CASE("aligned LOS reward is sqrt(N)")
{
    BeamSelectionEnv env(fixtures::vertical_los_model(64, 10), 9);
    env.reset(0);
    while (!env.done())
    {
        const auto &scene = env.current_scene();
        CHECK(scene.theta_deg == doctest::Approx(90.0));
        CHECK(scene.best_index == 32);
        const auto r = env.step(32);
        CHECK(r.reward == doctest::Approx(8.0).epsilon(1e-12));
        CHECK(r.reward == r.info.optimum());
    }
}

TEST_CASE("reward is the magnitude of the chosen pair")
{
    BeamSelectionEnv env(fixtures::small_mixed_model(20, 8, 2), 4);
    env.reset(1);
    std::size_t a = 0;
    while (!env.done())
    {
        const auto r = env.step(a);
        CHECK(r.action == a);
        CHECK(r.reward == r.info.magnitudes[a]);
        CHECK(r.reward <= r.info.optimum());
        a = (a + 5) % env.num_actions();
    }
}

TEST_CASE("dynamics are exogenous: actions change only the reward")
{
    const auto model = fixtures::small_mixed_model(30, 16, 1);
    BeamSelectionEnv env(model, 8);
    std::mt19937_64 gen(1);
    const auto ref = rollout(env, 4, {0});
    for (int trial = 0; trial < 5; ++trial)
    {
        std::vector<std::size_t> actions(30);
        for (auto &x : actions)
            x = gen() % env.num_actions();
        const auto other = rollout(env, 4, actions);
        REQUIRE(other.size() == ref.size());
        for (std::size_t t = 0; t < ref.size(); ++t)
        {
            REQUIRE(other[t].observation == ref[t].observation);
            REQUIRE(other[t].info == ref[t].info);
        }
    }
}

TEST_CASE("peeking at the scene does not shift the draws")
{
    const auto model = fixtures::small_mixed_model();
    BeamSelectionEnv peek(model, 2), blind(model, 2);
    peek.reset(3);
    blind.reset(3);
    while (!peek.done())
    {
        (void)peek.current_scene();
        (void)peek.current_scene();
        CHECK(peek.step(0).info == blind.step(0).info);
    }
}

TEST_CASE("info records rebuild the dataset episode")
{
    const auto model = fixtures::small_mixed_model(25, 8, 1);
    BeamSelectionEnv env(model, 31);
    const auto steps = rollout(env, 6, {3, 1});
    const auto rebuilt = episode_from_steps(steps, episode_seed(31, 6), "dg");
    const auto direct = generate_episode(*model, 6, 31, "dg");
    CHECK(rebuilt == direct);
}

TEST_CASE("step trace CSV")
{
    BeamSelectionEnv env(fixtures::vertical_los_model(64, 4), 1);
    const auto steps = rollout(env, 0, {32});
    std::ostringstream os;
    write_step_trace(os, steps);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,theta_deg,los,reward,action,optimum");
    int rows = 0;
    while (std::getline(is, line))
        ++rows;
    CHECK(rows == 4);
}
