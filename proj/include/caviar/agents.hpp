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

#ifndef CAVIAR_AGENTS_HPP
#define CAVIAR_AGENTS_HPP

#include "caviar/rlenv.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace caviar
{
    struct LearningConfig
    {
        double alpha = 0.1;
        double gamma = 0.0;
        double epsilon_start = 1.0;
        double epsilon_end = 0.05;
        double decay_fraction = 0.5; // share of training steps for the linear epsilon ramp
        std::size_t episodes = 200;
        std::size_t bins = 128;
        double theta_min_deg = 0.0;
        double theta_max_deg = 50.0;

        void validate() const; // throws std::invalid_argument

        // Linear ramp from epsilon_start to epsilon_end, then flat.
        double epsilon_at(std::size_t step, std::size_t total_steps) const;
    };

    // Action values over uniformly quantized elevation.
    class QTable
    {
    public:
        QTable(std::size_t bins, double theta_min_deg, double theta_max_deg, std::size_t num_actions);

        std::size_t bins() const { return bins_; }
        std::size_t num_actions() const { return num_actions_; }
        double theta_min_deg() const { return theta_min_; }
        double theta_max_deg() const { return theta_max_; }

        // Clamped uniform quantization of theta.
        std::size_t bin_of(double theta_deg) const;

        double &value(std::size_t bin, std::size_t action) { return values_.at(bin * num_actions_ + action); }
        double value(std::size_t bin, std::size_t action) const { return values_.at(bin * num_actions_ + action); }
        std::uint64_t visits(std::size_t bin, std::size_t action) const { return visits_.at(bin * num_actions_ + action); }
        void add_visit(std::size_t bin, std::size_t action) { ++visits_.at(bin * num_actions_ + action); }

        std::span<const double> row(std::size_t bin) const { return {values_.data() + bin * num_actions_, num_actions_}; }
        double max_value(std::size_t bin) const;
        std::size_t greedy_action(double theta_deg) const; // ties to the lowest index

        std::string to_json() const;
        static QTable from_json(const std::string &text); // throws FormatError

        friend bool operator==(const QTable &, const QTable &) = default;

    private:
        std::size_t bins_;
        double theta_min_;
        double theta_max_;
        std::size_t num_actions_;
        std::vector<double> values_;
        std::vector<std::uint64_t> visits_;
    };

    void save_qtable(const std::filesystem::path &path, const QTable &table);
    QTable load_qtable(const std::filesystem::path &path);

    std::size_t oracle_action(std::span<const double> magnitudes);

    // Codebook beam closest to the straight-path direction, argmax_q |a_t(theta)^H f_q|.
    std::size_t baseline_action(double theta_deg, const Codebook &tx);

    // Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)); no bootstrap on terminal steps.
    void q_update(QTable &table, double theta_deg, std::size_t action, double reward, double theta_next_deg,
                  bool terminal, const LearningConfig &config);

    class Policy
    {
    public:
        virtual ~Policy() = default;
        virtual std::string name() const = 0;
        // The environment is passed for privileged policies only.
        virtual std::size_t act(const Observation &obs, BeamSelectionEnv &env) const = 0;
    };

    class OraclePolicy final : public Policy
    {
    public:
        std::string name() const override { return "oracle"; }
        std::size_t act(const Observation &obs, BeamSelectionEnv &env) const override;
    };

    class BaselinePolicy final : public Policy
    {
    public:
        explicit BaselinePolicy(Codebook tx, std::size_t num_rx = 1) : tx_(std::move(tx)), num_rx_(num_rx) {}
        std::string name() const override { return "baseline"; }
        std::size_t act(const Observation &obs, BeamSelectionEnv &env) const override;

    private:
        Codebook tx_;
        std::size_t num_rx_;
    };

    class GreedyTablePolicy final : public Policy
    {
    public:
        explicit GreedyTablePolicy(QTable table, std::string name = "rl") : table_(std::move(table)), name_(std::move(name)) {}
        std::string name() const override { return name_; }
        std::size_t act(const Observation &obs, BeamSelectionEnv &env) const override;
        const QTable &table() const { return table_; }

    private:
        QTable table_;
        std::string name_;
    };

    struct TrainResult
    {
        QTable table;
        std::vector<double> episode_mean_reward;
    };

    // Epsilon-greedy Q-learning. Training episode k resets the environment with seed k;
    // exploration draws come from a separate stream seeded by exploration_seed.
    TrainResult train(BeamSelectionEnv &env, const LearningConfig &config, std::uint64_t exploration_seed);

    inline constexpr std::uint64_t evaluation_seed_offset = 1'000'000;

    struct PolicySummary
    {
        std::string name;
        double mean = 0.0;
        double mean_los = 0.0;
        double mean_nlos = 0.0;
    };

    struct TraceRow
    {
        std::uint64_t seed = 0;
        std::int64_t t = 0;
        double theta_deg = 0.0;
        bool los = true;
        double optimum = 0.0;
        std::vector<double> rewards;       // one per policy
        std::vector<std::size_t> actions;  // one per policy
    };

    struct EvalReport
    {
        std::vector<PolicySummary> policies;
        PolicySummary optimum{"optimum"};
        std::size_t steps = 0;
        std::size_t los_steps = 0;
        std::size_t nlos_steps = 0;
        std::vector<TraceRow> trace; // seed-major, then t
    };

    // Each policy runs on its own environment reset with the same seeds, so all
    // of them see identical channel realizations. Rollouts are spread over OpenMP threads.
    EvalReport evaluate(std::shared_ptr<const ScenarioModel> model, std::uint64_t master_seed,
                        std::span<const Policy *const> policies, std::span<const std::uint64_t> seeds);
    // Same result, rollouts one after another.
    EvalReport evaluate_serial(std::shared_ptr<const ScenarioModel> model, std::uint64_t master_seed,
                               std::span<const Policy *const> policies, std::span<const std::uint64_t> seeds);

    std::vector<std::uint64_t> evaluation_seeds(std::size_t count);

    // Columns: seed,t,theta_deg,los,<policy>...,optimum
    void write_trace_csv(std::ostream &out, const EvalReport &report);
    std::string summary_json(const EvalReport &report);
} // namespace caviar

#endif
