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

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"Virtual-world beam selection simulator: offline datasets and in-loop RL evaluation"};
    app.require_subcommand(1);
    app.footer(caviar::config_reference() +
               "\nExit codes: 0 ok, 1 usage, 2 config, 3 I/O.");

    caviar::RunOptions opts;
    std::uint64_t seed = 0;
    std::string policy;
    std::string trace;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", opts.config_path, "JSON config file")->required();
        cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
        cmd->add_option("--seed", seed, "Master seed, overrides the config");
        cmd->add_option("--set", opts.overrides, "Override a config key, e.g. --set channel.nlos_sigma=0.6")
            ->type_name("KEY=VALUE");
    };

    auto *generate = app.add_subcommand("generate", "Write an episodic dataset (manifest.json + episode_*.jsonl)");
    add_common(generate);
    auto *train = app.add_subcommand("train", "Train the tabular Q-learning beam selector");
    add_common(train);
    auto *evaluate = app.add_subcommand("evaluate", "Compare oracle, baseline and (optionally) a trained policy");
    add_common(evaluate);
    evaluate->add_option("--policy", policy, "Trained policy.json from `train`");
    auto *report = app.add_subcommand("report", "Summarize an evaluation trace.csv");
    report->add_option("trace", trace, "Path to trace.csv")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return static_cast<int>(caviar::ExitCode::usage);
    }

    for (auto *cmd : {generate, train, evaluate})
        if (cmd->parsed() && cmd->count("--seed"))
            opts.seed = seed;
    if (!policy.empty())
        opts.policy_path = policy;

    const std::string mode = app.get_subcommands().front()->get_name();
    return static_cast<int>(caviar::run_command(mode, opts, trace, std::cout, std::cerr));
}
