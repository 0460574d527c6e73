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

#ifndef CAVIAR_COMMANDS_HPP
#define CAVIAR_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace caviar
{
    enum class ExitCode : int
    {
        ok = 0,
        usage = 1,
        config = 2,
        io = 3
    };

    struct RunOptions
    {
        std::filesystem::path config_path;
        std::filesystem::path out_dir = "out";
        std::optional<std::uint64_t> seed;
        std::vector<std::string> overrides; // dotted-key=value
        std::optional<std::filesystem::path> policy_path;
    };

    // Each command throws ConfigError / IoError / FormatError; run_command maps them to exit codes.
    void cmd_generate(const RunOptions &opts, std::ostream &log);
    void cmd_train(const RunOptions &opts, std::ostream &log);
    void cmd_evaluate(const RunOptions &opts, std::ostream &log);
    void cmd_report(const std::filesystem::path &trace, std::ostream &log);

    ExitCode run_command(const std::string &mode, const RunOptions &opts, const std::filesystem::path &trace,
                         std::ostream &log, std::ostream &err);
} // namespace caviar

#endif
