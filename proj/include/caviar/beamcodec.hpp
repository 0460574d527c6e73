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

#ifndef CAVIAR_BEAMCODEC_HPP
#define CAVIAR_BEAMCODEC_HPP

#include "caviar/channel.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace caviar
{
    // DFT beams, beam q has element n = exp(j*2*pi*n*q/N) / sqrt(N).
    class Codebook
    {
    public:
        static Codebook dft(std::size_t num_antennas);

        std::size_t num_antennas() const { return num_antennas_; }
        std::size_t size() const { return beams_.size(); }
        std::span<const cdouble> beam(std::size_t q) const { return beams_.at(q); }

    private:
        Codebook(std::size_t n, std::vector<std::vector<cdouble>> beams)
            : num_antennas_(n), beams_(std::move(beams)) {}

        std::size_t num_antennas_;
        std::vector<std::vector<cdouble>> beams_;
    };

    // Flattened (transmit beam p, receive beam q) pair, i = p * num_rx + q.
    struct BeamPair
    {
        std::size_t tx = 0;
        std::size_t rx = 0;
    };

    std::size_t pair_index(std::size_t tx_beam, std::size_t rx_beam, std::size_t num_tx, std::size_t num_rx);
    BeamPair unpair_index(std::size_t index, std::size_t num_tx, std::size_t num_rx);

    // y = w^H H f, noise free.
    cdouble equivalent_channel(const ChannelMatrix &h, std::span<const cdouble> rx_beam,
                               std::span<const cdouble> tx_beam);

    struct EquivalentMagnitudes
    {
        std::vector<double> values; // |y_i| in pair_index order
        std::size_t best_index = 0;
    };

    // |y_i| for every beam pair. Dispatches to the OpenMP sweep for large
    // codebooks outside an active parallel region; both sweeps give identical bits.
    EquivalentMagnitudes equivalent_magnitudes(const ChannelMatrix &h, const Codebook &tx, const Codebook &rx);

    // Reference sweep, one pair after another.
    void sweep_pairs_serial(const ChannelMatrix &h, const Codebook &tx, const Codebook &rx, std::span<double> out);
    // Transmit beams spread over OpenMP threads, with H f formed once per beam.
    void sweep_pairs_parallel(const ChannelMatrix &h, const Codebook &tx, const Codebook &rx, std::span<double> out);

    // First index attaining the maximum. Throws for an empty list.
    std::size_t optimal_index(std::span<const double> values);
    inline std::size_t optimal_index(const EquivalentMagnitudes &m) { return optimal_index(m.values); }

    // k indices by non-increasing magnitude, ties to the lower index.
    std::vector<std::size_t> top_k(std::span<const double> values, std::size_t k);
    inline std::vector<std::size_t> top_k(const EquivalentMagnitudes &m, std::size_t k) { return top_k(m.values, k); }
} // namespace caviar

#endif
