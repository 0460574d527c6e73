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

#ifndef CAVIAR_CHANNEL_HPP
#define CAVIAR_CHANNEL_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace caviar
{
    using cdouble = std::complex<double>;

    // Stable 64-bit mix, used to derive per-episode stream seeds.
    std::uint64_t splitmix64(std::uint64_t x);
    std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t stream_id);

    // One random stream per episode; draws are consumed strictly in call order.
    class RandomStream
    {
    public:
        explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

        double uniform(double lo, double hi);
        double normal(); // standard normal
        std::size_t index(std::size_t count); // uniform in [0, count)

    private:
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
    };

    struct PathComponent
    {
        cdouble gain;      // alpha_l
        double aod = 0.0;  // radians, departure at the BS
        double aoa = 0.0;  // radians, arrival at the receiver
        bool is_los = false;

        friend bool operator==(const PathComponent &, const PathComponent &) = default;
    };

    struct ChannelParams
    {
        std::size_t num_paths = 3;  // L, including the LOS path
        double los_amplitude = 1.0;
        double nlos_sigma = 0.58;   // per-axis std of NLOS gains
        double nlos_aod_min = -0.4363323129985824; // radians (-25 deg)
        double nlos_aod_max = -0.2617993877991494; // radians (-15 deg)

        void validate() const; // throws std::invalid_argument
    };

    // Dense row-major complex matrix of shape num_rx x num_tx.
    class ChannelMatrix
    {
    public:
        ChannelMatrix(std::size_t num_rx, std::size_t num_tx);

        std::size_t num_rx() const { return num_rx_; }
        std::size_t num_tx() const { return num_tx_; }

        cdouble &operator()(std::size_t r, std::size_t c) { return data_[r * num_tx_ + c]; }
        const cdouble &operator()(std::size_t r, std::size_t c) const { return data_[r * num_tx_ + c]; }

        std::span<const cdouble> row(std::size_t r) const { return {data_.data() + r * num_tx_, num_tx_}; }
        std::span<const cdouble> data() const { return data_; }

        ChannelMatrix &operator+=(const ChannelMatrix &other);
        ChannelMatrix &operator*=(double scale);

        double frobenius_norm() const;

    private:
        std::size_t num_rx_;
        std::size_t num_tx_;
        std::vector<cdouble> data_;
    };

    // Half-wavelength ULA response: element n = exp(j*pi*n*sin(theta)) / sqrt(N).
    std::vector<cdouble> steering_vector(std::size_t num_antennas, double theta_rad);

    // LOS path first (when not blocked), then the NLOS paths.
    std::vector<PathComponent> draw_multipath(RandomStream &rng, double theta_los_rad, bool blocked,
                                              const ChannelParams &params);

    // H = sqrt(Nt*Nr) * sum_l alpha_l a_r(aoa_l) a_t(aod_l)^H. Throws for an empty path list.
    ChannelMatrix synthesize_channel(std::span<const PathComponent> paths, std::size_t num_tx, std::size_t num_rx);
} // namespace caviar

#endif
