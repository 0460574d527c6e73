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
#include "caviar/beamcodec.hpp"
#include "caviar/episodes.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace caviar;

namespace
{
    ChannelMatrix random_channel(std::size_t nr, std::size_t nt)
    {
        std::mt19937_64 gen(1);
        std::normal_distribution<double> g;
        ChannelMatrix h(nr, nt);
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nt; ++c)
                h(r, c) = cdouble(g(gen), g(gen));
        return h;
    }

    std::shared_ptr<const ScenarioModel> bench_model(std::int64_t steps)
    {
        Scene scene{{0, 0, 0}, {}, {{20.0, 30.0}}};
        const std::int64_t up = steps / 4;
        const TrajectoryPlan plan({{FlightPhase::takeoff, up, {60, 0, 0}, {60, 0, 50}},
                                   {FlightPhase::cruise, steps - 2 * up, {60, 0, 50}, {90, 0, 50}},
                                   {FlightPhase::land, up, {90, 0, 50}, {90, 0, 0}}});
        return std::make_shared<const ScenarioModel>(scene, plan, ChannelParams{}, 64, 1, 0.1, 5, steps);
    }

    template <bool Parallel>
    void BM_Sweep(benchmark::State &state)
    {
        const auto nt = std::size_t(state.range(0));
        const auto nr = std::size_t(state.range(1));
        const auto h = random_channel(nr, nt);
        const auto tx = Codebook::dft(nt);
        const auto rx = Codebook::dft(nr);
        std::vector<double> out(nt * nr);
        for (auto _ : state)
        {
            if constexpr (Parallel)
                sweep_pairs_parallel(h, tx, rx, out);
            else
                sweep_pairs_serial(h, tx, rx, out);
            benchmark::DoNotOptimize(out.data());
        }
        state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(nt * nr));
    }

    template <bool Parallel>
    void BM_GenerateEpisodes(benchmark::State &state)
    {
        const auto model = bench_model(500);
        const auto count = std::size_t(state.range(0));
        for (auto _ : state)
        {
            auto eps = Parallel ? generate_episodes(*model, count, 7, "") : generate_episodes_serial(*model, count, 7, "");
            benchmark::DoNotOptimize(eps.data());
        }
        state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(count) * 500);
    }

    template <bool Parallel>
    void BM_Evaluate(benchmark::State &state)
    {
        const auto model = bench_model(500);
        OraclePolicy oracle_policy;
        BaselinePolicy baseline(model->tx_codebook());
        const std::vector<const Policy *> pols{&oracle_policy, &baseline};
        const auto seeds = evaluation_seeds(std::size_t(state.range(0)));
        for (auto _ : state)
        {
            auto rep = Parallel ? evaluate(model, 1, pols, seeds) : evaluate_serial(model, 1, pols, seeds);
            benchmark::DoNotOptimize(rep.trace.data());
        }
    }
} // namespace

BENCHMARK(BM_Sweep<false>)->Name("sweep/serial")->Args({64, 1})->Args({64, 32})->Args({256, 64});
BENCHMARK(BM_Sweep<true>)->Name("sweep/parallel")->Args({64, 1})->Args({64, 32})->Args({256, 64});
BENCHMARK(BM_GenerateEpisodes<false>)->Name("generate/serial")->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateEpisodes<true>)->Name("generate/parallel")->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate<false>)->Name("evaluate/serial")->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate<true>)->Name("evaluate/parallel")->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
