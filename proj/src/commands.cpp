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
#include "caviar/agents.hpp"
#include "caviar/config.hpp"
#include "caviar/errors.hpp"
#include "caviar/report.hpp"

#include <cmath>
#include <fstream>

namespace caviar
{
    namespace
    {
        RunSettings load(const RunOptions &opts)
        {
            auto overrides = opts.overrides;
            if (opts.seed)
                overrides.push_back("seed=" + std::to_string(*opts.seed));
            return load_settings(opts.config_path, overrides);
        }

        std::shared_ptr<const ScenarioModel> model_or_config_error(const RunSettings &settings)
        {
            try
            {
                return build_model(settings);
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError("<model>", e.what());
            }
        }

        void ensure_dir(const std::filesystem::path &dir)
        {
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec)
                throw IoError("cannot create " + dir.string() + ": " + ec.message());
        }

        std::ofstream open_out(const std::filesystem::path &path)
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw IoError("cannot open " + path.string() + " for writing");
            return out;
        }

        bool valid_channel(const SceneRecord &s)
        {
            if (s.paths.empty())
                return false;
            for (const double m : s.magnitudes)
                if (!std::isfinite(m))
                    return false;
            return true;
        }
    } // namespace

    void cmd_generate(const RunOptions &opts, std::ostream &log)
    {
        const RunSettings settings = load(opts);
        const auto model = model_or_config_error(settings);

        const auto episodes = generate_episodes(*model, settings.num_episodes, settings.seed, settings.digest);
        const auto manifest = make_manifest(*model, settings.name, settings.frequency, settings.num_episodes,
                                            settings.seed, settings.digest);
        write_episodes(opts.out_dir, manifest, episodes);

        std::size_t scenes = 0;
        std::size_t valid = 0;
        for (const auto &e : episodes)
            for (const auto &s : e.scenes)
            {
                ++scenes;
                valid += valid_channel(s) ? 1 : 0;
            }
        log << "episodes: " << episodes.size() << "\n"
            << "scenes per episode: " << manifest.scenes_per_episode << "\n"
            << "scenes: " << scenes << "\n"
            << "valid channels: " << valid << "\n"
            << "written to " << opts.out_dir.string() << "\n";
    }

    void cmd_train(const RunOptions &opts, std::ostream &log)
    {
        const RunSettings settings = load(opts);
        const auto model = model_or_config_error(settings);

        BeamSelectionEnv env(model, settings.seed);
        const TrainResult result = train(env, settings.learning, mix_seed(settings.seed, 0x7261696eULL));

        ensure_dir(opts.out_dir);
        save_qtable(opts.out_dir / "policy.json", result.table);
        auto curve = open_out(opts.out_dir / "learning_curve.csv");
        curve << "episode,mean_reward\n";
        curve.precision(17);
        for (std::size_t e = 0; e < result.episode_mean_reward.size(); ++e)
            curve << e << ',' << result.episode_mean_reward[e] << '\n';
        if (!curve)
            throw IoError("write failed: learning_curve.csv");

        log << "training episodes: " << result.episode_mean_reward.size() << "\n";
        if (!result.episode_mean_reward.empty())
            log << "last episode mean reward: " << result.episode_mean_reward.back() << "\n";
        log << "policy written to " << (opts.out_dir / "policy.json").string() << "\n";
    }

    void cmd_evaluate(const RunOptions &opts, std::ostream &log)
    {
        const RunSettings settings = load(opts);
        const auto model = model_or_config_error(settings);

        OraclePolicy oracle;
        BaselinePolicy baseline(model->tx_codebook(), model->num_rx());
        std::optional<GreedyTablePolicy> learned;
        if (opts.policy_path)
        {
            QTable table = load_qtable(*opts.policy_path);
            if (table.num_actions() != model->num_pairs())
                throw ConfigError("--policy", "policy action count " + std::to_string(table.num_actions()) +
                                                  " differs from the " + std::to_string(model->num_pairs()) +
                                                  " beam pairs of this config");
            learned.emplace(std::move(table));
        }

        std::vector<const Policy *> policies{&oracle, &baseline};
        if (learned)
            policies.push_back(&*learned);

        const auto seeds = evaluation_seeds(settings.evaluation_seeds);
        const EvalReport report = evaluate(model, settings.seed, policies, seeds);

        ensure_dir(opts.out_dir);
        {
            auto trace = open_out(opts.out_dir / "trace.csv");
            write_trace_csv(trace, report);
            if (!trace)
                throw IoError("write failed: trace.csv");
        }
        {
            auto summary = open_out(opts.out_dir / "summary.json");
            summary << summary_json(report) << '\n';
            if (!summary)
                throw IoError("write failed: summary.json");
        }

        log << "steps: " << report.steps << " (" << report.los_steps << " LOS, " << report.nlos_steps << " NLOS)\n";
        log << "mean optimum: " << report.optimum.mean << "\n";
        for (const auto &p : report.policies)
            log << "mean " << p.name << ": " << p.mean << " (LOS " << p.mean_los << ", NLOS " << p.mean_nlos << ")\n";
    }

    void cmd_report(const std::filesystem::path &trace, std::ostream &log)
    {
        log << format_summary(summarize_trace(trace));
    }

    ExitCode run_command(const std::string &mode, const RunOptions &opts, const std::filesystem::path &trace,
                         std::ostream &log, std::ostream &err)
    {
        try
        {
            if (mode == "generate")
                cmd_generate(opts, log);
            else if (mode == "train")
                cmd_train(opts, log);
            else if (mode == "evaluate")
                cmd_evaluate(opts, log);
            else if (mode == "report")
                cmd_report(trace, log);
            else
            {
                err << "unknown command '" << mode << "'\n";
                return ExitCode::usage;
            }
            return ExitCode::ok;
        }
        catch (const ConfigError &e)
        {
            err << "config error: " << e.what() << "\n";
            return ExitCode::config;
        }
        catch (const IoError &e)
        {
            err << "I/O error: " << e.what() << "\n";
            return ExitCode::io;
        }
        catch (const FormatError &e)
        {
            err << "format error: " << e.what() << "\n";
            return ExitCode::io;
        }
    }
} // namespace caviar
