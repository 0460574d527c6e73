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

#ifndef CAVIAR_REPORT_HPP
#define CAVIAR_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace caviar
{
    struct StepWindow
    {
        std::int64_t first_t = 0;
        std::int64_t last_t = 0;
    };

    struct TraceSummary
    {
        std::size_t rows = 0;
        std::size_t seeds = 0;
        std::vector<std::string> policies;
        std::vector<double> policy_means; // same order as policies
        double optimum_mean = 0.0;
        double optimum_min = 0.0;          // over every row
        double optimum_seed_avg_min = 0.0; // min over t of the optimum averaged across seeds
        std::vector<StepWindow> nlos_windows; // from the first seed's rows
    };

    // Parses an evaluation trace (seed,t,theta_deg,los,<policy>...,optimum).
    // Throws FormatError with a line number on malformed input.
    TraceSummary summarize_trace(std::istream &in);
    TraceSummary summarize_trace(const std::filesystem::path &path);

    std::string format_summary(const TraceSummary &summary);
} // namespace caviar

#endif
