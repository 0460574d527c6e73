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

#include "caviar/agents.hpp"
#include "caviar/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace caviar
{
    using nlohmann::json;

    void LearningConfig::validate() const
    {
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw std::invalid_argument("alpha must lie in (0, 1].");
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw std::invalid_argument("gamma must lie in [0, 1].");
        if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0) || !(epsilon_end >= 0.0 && epsilon_end <= 1.0))
            throw std::invalid_argument("epsilon bounds must lie in [0, 1].");
        if (!(decay_fraction >= 0.0 && decay_fraction <= 1.0))
            throw std::invalid_argument("decay_fraction must lie in [0, 1].");
        if (bins < 1)
            throw std::invalid_argument("bins must be at least 1.");
        if (!(theta_min_deg < theta_max_deg))
            throw std::invalid_argument("theta range is empty.");
    }

    double LearningConfig::epsilon_at(std::size_t step, std::size_t total_steps) const
    {
        const double ramp = decay_fraction * double(total_steps);
        if (ramp <= 0.0 || double(step) >= ramp)
            return epsilon_end;
        return epsilon_start + (epsilon_end - epsilon_start) * (double(step) / ramp);
    }

    // ---------- QTable ----------

    QTable::QTable(std::size_t bins, double theta_min_deg, double theta_max_deg, std::size_t num_actions)
        : bins_(bins), theta_min_(theta_min_deg), theta_max_(theta_max_deg), num_actions_(num_actions),
          values_(bins * num_actions, 0.0), visits_(bins * num_actions, 0)
    {
        if (bins == 0 || num_actions == 0)
            throw std::invalid_argument("QTable needs at least one bin and one action.");
        if (!(theta_min_deg < theta_max_deg))
            throw std::invalid_argument("QTable theta range is empty.");
    }

    std::size_t QTable::bin_of(double theta_deg) const
    {
        const double pos = (theta_deg - theta_min_) / (theta_max_ - theta_min_) * double(bins_);
        if (!(pos > 0.0))
            return 0;
        return std::min(bins_ - 1, static_cast<std::size_t>(pos));
    }

    double QTable::max_value(std::size_t bin) const
    {
        const auto r = row(bin);
        return *std::max_element(r.begin(), r.end());
    }

    std::size_t QTable::greedy_action(double theta_deg) const { return optimal_index(row(bin_of(theta_deg))); }

    std::string QTable::to_json() const
    {
        json values = json::array();
        json visits = json::array();
        for (std::size_t b = 0; b < bins_; ++b)
        {
            values.push_back(std::vector<double>(values_.begin() + std::ptrdiff_t(b * num_actions_),
                                                 values_.begin() + std::ptrdiff_t((b + 1) * num_actions_)));
            visits.push_back(std::vector<std::uint64_t>(visits_.begin() + std::ptrdiff_t(b * num_actions_),
                                                        visits_.begin() + std::ptrdiff_t((b + 1) * num_actions_)));
        }
        const json j = {{"bins", bins_},
                        {"theta_range_deg", {theta_min_, theta_max_}},
                        {"num_actions", num_actions_},
                        {"values", std::move(values)},
                        {"visit_counts", std::move(visits)}};
        return j.dump();
    }

    QTable QTable::from_json(const std::string &text)
    {
        try
        {
            const json j = json::parse(text);
            const auto range = j.at("theta_range_deg").get<std::vector<double>>();
            if (range.size() != 2)
                throw FormatError("theta_range_deg must have two entries");
            QTable table(j.at("bins").get<std::size_t>(), range[0], range[1], j.at("num_actions").get<std::size_t>());

            const auto &values = j.at("values");
            if (values.size() != table.bins_)
                throw FormatError("values must have one row per bin");
            const json *visits = j.contains("visit_counts") ? &j.at("visit_counts") : nullptr;
            for (std::size_t b = 0; b < table.bins_; ++b)
            {
                const auto row = values[b].get<std::vector<double>>();
                if (row.size() != table.num_actions_)
                    throw FormatError("values row " + std::to_string(b) + " has the wrong length");
                for (std::size_t a = 0; a < row.size(); ++a)
                {
                    if (!std::isfinite(row[a]))
                        throw FormatError("non-finite Q value");
                    table.value(b, a) = row[a];
                }
                if (visits)
                {
                    const auto vrow = (*visits)[b].get<std::vector<std::uint64_t>>();
                    if (vrow.size() != table.num_actions_)
                        throw FormatError("visit_counts row " + std::to_string(b) + " has the wrong length");
                    std::copy(vrow.begin(), vrow.end(), table.visits_.begin() + std::ptrdiff_t(b * table.num_actions_));
                }
            }
            return table;
        }
        catch (const json::exception &e)
        {
            throw FormatError(std::string("policy file: ") + e.what());
        }
        catch (const std::invalid_argument &e)
        {
            throw FormatError(std::string("policy file: ") + e.what());
        }
    }

    void save_qtable(const std::filesystem::path &path, const QTable &table)
    {
        std::ofstream out(path, std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + path.string() + " for writing");
        out << table.to_json() << '\n';
        if (!out)
            throw IoError("write failed: " + path.string());
    }

    QTable load_qtable(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open policy file " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return QTable::from_json(buf.str());
    }

    // ---------- policies ----------

    std::size_t oracle_action(std::span<const double> magnitudes) { return optimal_index(magnitudes); }

    std::size_t baseline_action(double theta_deg, const Codebook &tx)
    {
        const auto a = steering_vector(tx.num_antennas(), deg_to_rad(theta_deg));
        std::vector<double> gains(tx.size());
        for (std::size_t q = 0; q < tx.size(); ++q)
        {
            const auto f = tx.beam(q);
            cdouble dot = 0.0;
            for (std::size_t n = 0; n < f.size(); ++n)
                dot += std::conj(a[n]) * f[n];
            gains[q] = std::abs(dot);
        }
        return optimal_index(gains);
    }

    void q_update(QTable &table, double theta_deg, std::size_t action, double reward, double theta_next_deg,
                  bool terminal, const LearningConfig &config)
    {
        if (action >= table.num_actions())
            throw std::out_of_range("q_update: action out of range.");
        const std::size_t s = table.bin_of(theta_deg);
        const double bootstrap = terminal ? 0.0 : config.gamma * table.max_value(table.bin_of(theta_next_deg));
        double &q = table.value(s, action);
        q += config.alpha * (reward + bootstrap - q);
        table.add_visit(s, action);
    }

    std::size_t OraclePolicy::act(const Observation &, BeamSelectionEnv &env) const
    {
        return oracle_action(env.current_scene().magnitudes);
    }

    std::size_t BaselinePolicy::act(const Observation &obs, BeamSelectionEnv &) const
    {
        // receive side has a single beam per transmit beam in the pair order
        return pair_index(baseline_action(obs.theta_deg, tx_), 0, tx_.size(), num_rx_);
    }

    std::size_t GreedyTablePolicy::act(const Observation &obs, BeamSelectionEnv &) const
    {
        return table_.greedy_action(obs.theta_deg);
    }

    TrainResult train(BeamSelectionEnv &env, const LearningConfig &config, std::uint64_t exploration_seed)
    {
        config.validate();
        TrainResult result{QTable(config.bins, config.theta_min_deg, config.theta_max_deg, env.num_actions()), {}};

        const auto steps_per_episode = static_cast<std::size_t>(env.model().episode_length());
        const std::size_t total_steps = config.episodes * steps_per_episode;
        RandomStream explore(exploration_seed);
        std::size_t global_step = 0;

        for (std::size_t episode = 0; episode < config.episodes; ++episode)
        {
            Observation obs = env.reset(episode);
            double reward_sum = 0.0;
            bool done = false;
            while (!done)
            {
                const double eps = config.epsilon_at(global_step, total_steps);
                std::size_t action;
                if (explore.uniform(0.0, 1.0) < eps)
                    action = explore.index(env.num_actions());
                else
                    action = result.table.greedy_action(obs.theta_deg);

                const StepResult step = env.step(action);
                q_update(result.table, obs.theta_deg, action, step.reward, step.observation.theta_deg, step.done,
                         config);
                reward_sum += step.reward;
                obs = step.observation;
                done = step.done;
                ++global_step;
            }
            result.episode_mean_reward.push_back(reward_sum / double(steps_per_episode));
        }
        return result;
    }

    // ---------- evaluation ----------

    namespace
    {
        struct Rollout
        {
            std::vector<double> theta;
            std::vector<char> los;
            std::vector<double> optimum;
            std::vector<double> reward;
            std::vector<std::size_t> action;
        };

        Rollout run_policy(std::shared_ptr<const ScenarioModel> model, std::uint64_t master_seed, const Policy &policy,
                           std::uint64_t seed)
        {
            BeamSelectionEnv env(std::move(model), master_seed);
            Observation obs = env.reset(seed);
            Rollout r;
            while (!env.done())
            {
                const std::size_t action = policy.act(obs, env);
                const StepResult step = env.step(action);
                r.theta.push_back(step.info.theta_deg);
                r.los.push_back(step.info.los);
                r.optimum.push_back(step.info.optimum());
                r.reward.push_back(step.reward);
                r.action.push_back(action);
                obs = step.observation;
            }
            return r;
        }

        EvalReport assemble(std::span<const Policy *const> policies, std::span<const std::uint64_t> seeds,
                            const std::vector<Rollout> &rollouts)
        {
            const std::size_t np = policies.size();
            EvalReport report;
            for (const auto *p : policies)
                report.policies.push_back({p->name()});

            std::vector<double> sum(np, 0.0), sum_los(np, 0.0), sum_nlos(np, 0.0);
            double opt = 0.0, opt_los = 0.0, opt_nlos = 0.0;

            for (std::size_t s = 0; s < seeds.size(); ++s)
            {
                const Rollout &ref = rollouts[s * np];
                for (std::size_t p = 1; p < np; ++p)
                {
                    const Rollout &other = rollouts[s * np + p];
                    if (other.theta != ref.theta || other.los != ref.los || other.optimum != ref.optimum)
                        throw std::logic_error("Policies saw different channel realizations.");
                }
                for (std::size_t t = 0; t < ref.theta.size(); ++t)
                {
                    TraceRow row{seeds[s], std::int64_t(t), ref.theta[t], ref.los[t] != 0, ref.optimum[t], {}, {}};
                    for (std::size_t p = 0; p < np; ++p)
                    {
                        const double r = rollouts[s * np + p].reward[t];
                        row.rewards.push_back(r);
                        row.actions.push_back(rollouts[s * np + p].action[t]);
                        sum[p] += r;
                        (row.los ? sum_los : sum_nlos)[p] += r;
                    }
                    opt += row.optimum;
                    (row.los ? opt_los : opt_nlos) += row.optimum;
                    ++report.steps;
                    ++(row.los ? report.los_steps : report.nlos_steps);
                    report.trace.push_back(std::move(row));
                }
            }

            auto mean = [](double total, std::size_t n) { return n ? total / double(n) : 0.0; };
            for (std::size_t p = 0; p < np; ++p)
            {
                report.policies[p].mean = mean(sum[p], report.steps);
                report.policies[p].mean_los = mean(sum_los[p], report.los_steps);
                report.policies[p].mean_nlos = mean(sum_nlos[p], report.nlos_steps);
            }
            report.optimum.mean = mean(opt, report.steps);
            report.optimum.mean_los = mean(opt_los, report.los_steps);
            report.optimum.mean_nlos = mean(opt_nlos, report.nlos_steps);
            return report;
        }

        void check_inputs(std::span<const Policy *const> policies)
        {
            if (policies.empty())
                throw std::invalid_argument("evaluate needs at least one policy.");
            for (const auto *p : policies)
                if (!p)
                    throw std::invalid_argument("evaluate: null policy.");
        }
    } // namespace

    EvalReport evaluate_serial(std::shared_ptr<const ScenarioModel> model, std::uint64_t master_seed,
                               std::span<const Policy *const> policies, std::span<const std::uint64_t> seeds)
    {
        check_inputs(policies);
        std::vector<Rollout> rollouts;
        for (const auto seed : seeds)
            for (const auto *policy : policies)
                rollouts.push_back(run_policy(model, master_seed, *policy, seed));
        return assemble(policies, seeds, rollouts);
    }

    EvalReport evaluate(std::shared_ptr<const ScenarioModel> model, std::uint64_t master_seed,
                        std::span<const Policy *const> policies, std::span<const std::uint64_t> seeds)
    {
        check_inputs(policies);
        const std::size_t np = policies.size();
        std::vector<Rollout> rollouts(seeds.size() * np);
        const auto jobs = static_cast<std::ptrdiff_t>(rollouts.size());

        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t job = 0; job < jobs; ++job)
        {
            try
            {
                const auto k = std::size_t(job);
                rollouts[k] = run_policy(model, master_seed, *policies[k % np], seeds[k / np]);
            }
            catch (...)
            {
#pragma omp critical(caviar_evaluate_failure)
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
        return assemble(policies, seeds, rollouts);
    }

    std::vector<std::uint64_t> evaluation_seeds(std::size_t count)
    {
        std::vector<std::uint64_t> seeds(count);
        for (std::size_t j = 0; j < count; ++j)
            seeds[j] = evaluation_seed_offset + j;
        return seeds;
    }

    void write_trace_csv(std::ostream &out, const EvalReport &report)
    {
        out << "seed,t,theta_deg,los";
        for (const auto &p : report.policies)
            out << ',' << p.name;
        out << ",optimum\n";
        out.precision(17);
        for (const auto &row : report.trace)
        {
            out << row.seed << ',' << row.t << ',' << row.theta_deg << ',' << (row.los ? 1 : 0);
            for (const double r : row.rewards)
                out << ',' << r;
            out << ',' << row.optimum << '\n';
        }
    }

    std::string summary_json(const EvalReport &report)
    {
        auto entry = [](const PolicySummary &p) {
            return json{{"mean", p.mean}, {"mean_los", p.mean_los}, {"mean_nlos", p.mean_nlos}};
        };
        json policies = json::object();
        for (const auto &p : report.policies)
            policies[p.name] = entry(p);
        const json j = {{"steps", report.steps},
                        {"los_steps", report.los_steps},
                        {"nlos_steps", report.nlos_steps},
                        {"optimum", entry(report.optimum)},
                        {"policies", std::move(policies)}};
        return j.dump(2);
    }
} // namespace caviar
