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

#include "caviar/beamcodec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace caviar
{
    namespace
    {
        // Below this many pairs the thread fork costs more than the sweep.
        constexpr std::size_t parallel_sweep_threshold = 1024;

        void check_shapes(const ChannelMatrix &h, const Codebook &tx, const Codebook &rx, std::size_t out_size)
        {
            if (h.num_tx() != tx.num_antennas() || h.num_rx() != rx.num_antennas())
                throw std::invalid_argument("Codebook dimensions do not match the channel matrix.");
            if (out_size != tx.size() * rx.size())
                throw std::invalid_argument("Output length must equal the number of beam pairs.");
        }

        bool in_parallel_region()
        {
#ifdef _OPENMP
            return omp_in_parallel() != 0;
#else
            return true;
#endif
        }
    } // namespace

    Codebook Codebook::dft(std::size_t num_antennas)
    {
        if (num_antennas == 0)
            throw std::invalid_argument("DFT codebook needs at least one antenna.");

        const double amplitude = 1.0 / std::sqrt(double(num_antennas));
        std::vector<std::vector<cdouble>> beams(num_antennas, std::vector<cdouble>(num_antennas));
        for (std::size_t q = 0; q < num_antennas; ++q)
            for (std::size_t n = 0; n < num_antennas; ++n)
            {
                // reduce n*q mod N first so the phase stays in [0, 2*pi)
                const double phase = 2.0 * std::numbers::pi * double((n * q) % num_antennas) / double(num_antennas);
                beams[q][n] = std::polar(amplitude, phase);
            }
        return Codebook(num_antennas, std::move(beams));
    }

    std::size_t pair_index(std::size_t tx_beam, std::size_t rx_beam, std::size_t num_tx, std::size_t num_rx)
    {
        if (tx_beam >= num_tx || rx_beam >= num_rx)
            throw std::out_of_range("Beam index out of range.");
        return tx_beam * num_rx + rx_beam;
    }

    BeamPair unpair_index(std::size_t index, std::size_t num_tx, std::size_t num_rx)
    {
        if (num_rx == 0 || index >= num_tx * num_rx)
            throw std::out_of_range("Beam pair index out of range.");
        return {index / num_rx, index % num_rx};
    }

    cdouble equivalent_channel(const ChannelMatrix &h, std::span<const cdouble> rx_beam,
                               std::span<const cdouble> tx_beam)
    {
        if (rx_beam.size() != h.num_rx() || tx_beam.size() != h.num_tx())
            throw std::invalid_argument("Beam length does not match the channel matrix.");

        cdouble y = 0.0;
        for (std::size_t r = 0; r < h.num_rx(); ++r)
        {
            const auto row = h.row(r);
            cdouble hf = 0.0;
            for (std::size_t c = 0; c < row.size(); ++c)
                hf += row[c] * tx_beam[c];
            y += std::conj(rx_beam[r]) * hf;
        }
        return y;
    }

    void sweep_pairs_serial(const ChannelMatrix &h, const Codebook &tx, const Codebook &rx, std::span<double> out)
    {
        check_shapes(h, tx, rx, out.size());
        const std::size_t num_rx = rx.size();
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = std::abs(equivalent_channel(h, rx.beam(i % num_rx), tx.beam(i / num_rx)));
    }

    void sweep_pairs_parallel(const ChannelMatrix &h, const Codebook &tx, const Codebook &rx, std::span<double> out)
    {
        check_shapes(h, tx, rx, out.size());
        const std::size_t num_rx = rx.size();
        const auto num_tx = static_cast<std::ptrdiff_t>(tx.size());

        // H f is shared by every receive beam of a transmit beam; the sums run in
        // the same order as equivalent_channel, so the bits match the serial sweep.
#pragma omp parallel
        {
            std::vector<cdouble> hf(h.num_rx());
#pragma omp for schedule(static)
            for (std::ptrdiff_t p = 0; p < num_tx; ++p)
            {
                const auto f = tx.beam(static_cast<std::size_t>(p));
                for (std::size_t r = 0; r < h.num_rx(); ++r)
                {
                    const auto row = h.row(r);
                    cdouble acc = 0.0;
                    for (std::size_t c = 0; c < row.size(); ++c)
                        acc += row[c] * f[c];
                    hf[r] = acc;
                }
                for (std::size_t q = 0; q < num_rx; ++q)
                {
                    const auto w = rx.beam(q);
                    cdouble y = 0.0;
                    for (std::size_t r = 0; r < hf.size(); ++r)
                        y += std::conj(w[r]) * hf[r];
                    out[static_cast<std::size_t>(p) * num_rx + q] = std::abs(y);
                }
            }
        }
    }

    EquivalentMagnitudes equivalent_magnitudes(const ChannelMatrix &h, const Codebook &tx, const Codebook &rx)
    {
        EquivalentMagnitudes m;
        m.values.resize(tx.size() * rx.size());
        if (m.values.size() >= parallel_sweep_threshold && !in_parallel_region())
            sweep_pairs_parallel(h, tx, rx, m.values);
        else
            sweep_pairs_serial(h, tx, rx, m.values);
        m.best_index = optimal_index(m.values);
        return m;
    }

    std::size_t optimal_index(std::span<const double> values)
    {
        if (values.empty())
            throw std::invalid_argument("optimal_index of an empty list.");
        std::size_t best = 0;
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] > values[best])
                best = i;
        return best;
    }

    std::vector<std::size_t> top_k(std::span<const double> values, std::size_t k)
    {
        if (k < 1 || k > values.size())
            throw std::out_of_range("top_k: k must lie in [1, M].");

        std::vector<std::size_t> order(values.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (values[a] != values[b])
                                  return values[a] > values[b];
                              return a < b;
                          });
        order.resize(k);
        return order;
    }
} // namespace caviar
