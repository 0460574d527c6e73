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

#include <stdexcept>

namespace caviar
{
    BeamSelectionEnv::BeamSelectionEnv(std::shared_ptr<const ScenarioModel> model, std::uint64_t master_seed)
        : model_(std::move(model)), master_seed_(master_seed)
    {
        if (!model_)
            throw std::invalid_argument("Environment needs a scenario model.");
    }

    Observation BeamSelectionEnv::observe(std::int64_t t) const
    {
        const UavState state = trajectory_state(model_->plan(), t);
        return {bs_to_uav_angle_deg(model_->scene().bs_position, state.position), state.position, t};
    }

    Observation BeamSelectionEnv::reset(std::uint64_t seed)
    {
        reset_seed_ = seed;
        rng_.emplace(episode_seed(master_seed_, std::int64_t(seed)));
        pending_.reset();
        t_ = 0;
        return observe(0);
    }

    const SceneRecord &BeamSelectionEnv::current_scene()
    {
        if (!rng_)
            throw std::logic_error("Environment used before reset.");
        if (done())
            throw std::logic_error("Episode is finished; call reset.");
        if (!pending_)
            pending_ = model_->simulate(std::int64_t(reset_seed_), t_, *rng_);
        return *pending_;
    }

    StepResult BeamSelectionEnv::step(std::size_t action)
    {
        if (action >= num_actions())
            throw std::out_of_range("Action " + std::to_string(action) + " outside [0, " +
                                    std::to_string(num_actions()) + ").");

        current_scene();
        StepResult result;
        result.action = action;
        result.reward = pending_->magnitudes[action];
        result.info = std::move(*pending_);
        pending_.reset();

        ++t_;
        result.done = done();
        result.observation = observe(t_);
        return result;
    }

    void write_step_trace(std::ostream &out, std::span<const StepResult> steps)
    {
        out << "t,theta_deg,los,reward,action,optimum\n";
        out.precision(17);
        for (const auto &s : steps)
            out << s.info.scene_id << ',' << s.info.theta_deg << ',' << (s.info.los ? 1 : 0) << ',' << s.reward << ','
                << s.action << ',' << s.info.optimum() << '\n';
    }

    Episode episode_from_steps(std::span<const StepResult> steps, std::uint64_t seed, std::string config_digest)
    {
        Episode episode;
        episode.seed = seed;
        episode.config_digest = std::move(config_digest);
        if (!steps.empty())
            episode.episode_id = steps.front().info.episode_id;
        for (const auto &s : steps)
            episode.scenes.push_back(s.info);
        return episode;
    }
} // namespace caviar
