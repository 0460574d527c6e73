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

#ifndef CAVIAR_RLENV_HPP
#define CAVIAR_RLENV_HPP

#include "caviar/episodes.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace caviar
{
    struct Observation
    {
        double theta_deg = 0.0;
        Vec3 uav_position;
        std::int64_t t = 0;

        friend bool operator==(const Observation &, const Observation &) = default;
    };

    struct StepResult
    {
        Observation observation; // after the step
        std::size_t action = 0;
        double reward = 0.0;     // |y_action|
        bool done = false;
        SceneRecord info;
    };

    // Beam selection over one scripted flight. The trajectory and channel draws
    // are exogenous: the chosen beam only changes the reward.
    class BeamSelectionEnv
    {
    public:
        BeamSelectionEnv(std::shared_ptr<const ScenarioModel> model, std::uint64_t master_seed);

        Observation reset(std::uint64_t seed);
        StepResult step(std::size_t action);

        // Scene of the current step, drawn on first access. Privileged: the
        // oracle reads its magnitudes before acting.
        const SceneRecord &current_scene();

        std::size_t num_actions() const { return model_->num_pairs(); }
        std::int64_t t() const { return t_; }
        bool done() const { return t_ >= model_->episode_length(); }
        const ScenarioModel &model() const { return *model_; }
        std::uint64_t reset_seed() const { return reset_seed_; }

    private:
        Observation observe(std::int64_t t) const;

        std::shared_ptr<const ScenarioModel> model_;
        std::uint64_t master_seed_;
        std::uint64_t reset_seed_ = 0;
        std::optional<RandomStream> rng_;
        std::optional<SceneRecord> pending_;
        std::int64_t t_ = 0;
    };

    // Per-step CSV: t,theta_deg,los,reward,action,optimum
    void write_step_trace(std::ostream &out, std::span<const StepResult> steps);

    // Rebuilds the dataset episode from the info records of one rollout.
    Episode episode_from_steps(std::span<const StepResult> steps, std::uint64_t seed, std::string config_digest);
} // namespace caviar

#endif
