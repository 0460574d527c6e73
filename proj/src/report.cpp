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

#include "caviar/report.hpp"
#include "caviar/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace caviar
{
    namespace
    {
        std::vector<std::string> split(const std::string &line)
        {
            std::vector<std::string> out;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                out.push_back(cell);
            if (!line.empty() && line.back() == ',')
                out.emplace_back();
            return out;
        }

        double to_double(const std::string &cell, std::size_t line_no)
        {
            try
            {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                if (used == cell.size())
                    return v;
            }
            catch (const std::exception &)
            {
            }
            throw FormatError("trace line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
        }

        std::int64_t to_int(const std::string &cell, std::size_t line_no)
        {
            std::int64_t v = 0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size())
                throw FormatError("trace line " + std::to_string(line_no) + ": not an integer: '" + cell + "'");
            return v;
        }
    } // namespace

    TraceSummary summarize_trace(std::istream &in)
    {
        TraceSummary summary;
        std::string line;
        if (!std::getline(in, line))
            return summary;

        const auto header = split(line);
        if (header.size() < 5 || header[0] != "seed" || header[1] != "t" || header[2] != "theta_deg" ||
            header[3] != "los" || header.back() != "optimum")
            throw FormatError("trace line 1: expected header seed,t,theta_deg,los,<policies>,optimum");
        summary.policies.assign(header.begin() + 4, header.end() - 1);

        std::vector<double> sums(summary.policies.size(), 0.0);
        double opt_sum = 0.0;
        double opt_min = INFINITY;
        std::map<std::int64_t, std::pair<double, std::size_t>> per_t;
        std::vector<std::uint64_t> seen_seeds;
        bool first_seed_set = false;
        std::int64_t first_seed = 0;
        bool in_window = false;

        std::size_t line_no = 1;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            const auto cells = split(line);
            if (cells.size() != header.size())
                throw FormatError("trace line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " columns, found " + std::to_string(cells.size()));

            const auto seed = to_int(cells[0], line_no);
            const auto t = to_int(cells[1], line_no);
            to_double(cells[2], line_no);
            const auto los = to_int(cells[3], line_no);
            if (los != 0 && los != 1)
                throw FormatError("trace line " + std::to_string(line_no) + ": los must be 0 or 1");
            for (std::size_t p = 0; p < sums.size(); ++p)
                sums[p] += to_double(cells[4 + p], line_no);
            const double opt = to_double(cells.back(), line_no);

            opt_sum += opt;
            opt_min = std::min(opt_min, opt);
            auto &acc = per_t[t];
            acc.first += opt;
            ++acc.second;
            ++summary.rows;

            if (std::find(seen_seeds.begin(), seen_seeds.end(), std::uint64_t(seed)) == seen_seeds.end())
                seen_seeds.push_back(std::uint64_t(seed));
            if (!first_seed_set)
            {
                first_seed = seed;
                first_seed_set = true;
            }
            if (seed == first_seed)
            {
                if (los == 0 && !in_window)
                {
                    summary.nlos_windows.push_back({t, t});
                    in_window = true;
                }
                else if (los == 0)
                    summary.nlos_windows.back().last_t = t;
                else
                    in_window = false;
            }
        }

        summary.seeds = seen_seeds.size();
        if (summary.rows == 0)
            return summary;
        summary.policy_means.resize(sums.size());
        for (std::size_t p = 0; p < sums.size(); ++p)
            summary.policy_means[p] = sums[p] / double(summary.rows);
        summary.optimum_mean = opt_sum / double(summary.rows);
        summary.optimum_min = opt_min;
        double avg_min = INFINITY;
        for (const auto &[t, acc] : per_t)
            avg_min = std::min(avg_min, acc.first / double(acc.second));
        summary.optimum_seed_avg_min = avg_min;
        return summary;
    }

    TraceSummary summarize_trace(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open trace " + path.string());
        return summarize_trace(in);
    }

    std::string format_summary(const TraceSummary &s)
    {
        std::ostringstream out;
        if (s.rows == 0)
        {
            out << "no steps in trace\n";
            return out.str();
        }
        out.setf(std::ios::fixed);
        out.precision(4);
        out << "steps: " << s.rows << " over " << s.seeds << " seed(s)\n";
        out << "mean |y| optimum: " << s.optimum_mean << '\n';
        for (std::size_t p = 0; p < s.policies.size(); ++p)
            out << "mean |y| " << s.policies[p] << ": " << s.policy_means[p] << '\n';
        out << "min optimum (any step): " << s.optimum_min << '\n';
        out << "min optimum (seed-averaged trace): " << s.optimum_seed_avg_min << '\n';
        out << "NLOS windows: " << s.nlos_windows.size() << '\n';
        for (const auto &w : s.nlos_windows)
            out << "  t in [" << w.first_t << ", " << w.last_t << "] (" << (w.last_t - w.first_t + 1) << " steps)\n";
        return out.str();
    }
} // namespace caviar
