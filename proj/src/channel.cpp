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

#include "caviar/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace caviar
{
    std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t stream_id)
    {
        return splitmix64(splitmix64(master_seed) ^ (stream_id * 0xd1b54a32d192ed03ULL + 1));
    }

    double RandomStream::uniform(double lo, double hi)
    {
        std::uniform_real_distribution<double> dist(lo, hi);
        return dist(engine_);
    }

    double RandomStream::normal() { return normal_(engine_); }

    std::size_t RandomStream::index(std::size_t count)
    {
        std::uniform_int_distribution<std::size_t> dist(0, count - 1);
        return dist(engine_);
    }

    void ChannelParams::validate() const
    {
        if (num_paths < 1)
            throw std::invalid_argument("num_paths must be at least 1.");
        if (!(los_amplitude >= 0.0) || !std::isfinite(los_amplitude))
            throw std::invalid_argument("los_amplitude must be a nonnegative finite number.");
        if (!(nlos_sigma >= 0.0) || !std::isfinite(nlos_sigma))
            throw std::invalid_argument("nlos_sigma must be a nonnegative finite number.");
        if (!(nlos_aod_min <= nlos_aod_max))
            throw std::invalid_argument("NLOS AoD range is inverted.");
    }

    ChannelMatrix::ChannelMatrix(std::size_t num_rx, std::size_t num_tx)
        : num_rx_(num_rx), num_tx_(num_tx), data_(num_rx * num_tx)
    {
        if (num_rx == 0 || num_tx == 0)
            throw std::invalid_argument("Channel matrix dimensions must be positive.");
    }

    ChannelMatrix &ChannelMatrix::operator+=(const ChannelMatrix &other)
    {
        if (other.num_rx_ != num_rx_ || other.num_tx_ != num_tx_)
            throw std::invalid_argument("Channel matrix shape mismatch.");
        for (std::size_t k = 0; k < data_.size(); ++k)
            data_[k] += other.data_[k];
        return *this;
    }

    ChannelMatrix &ChannelMatrix::operator*=(double scale)
    {
        for (auto &v : data_)
            v *= scale;
        return *this;
    }

    double ChannelMatrix::frobenius_norm() const
    {
        double sum = 0.0;
        for (const auto &v : data_)
            sum += std::norm(v);
        return std::sqrt(sum);
    }

    std::vector<cdouble> steering_vector(std::size_t num_antennas, double theta_rad)
    {
        if (num_antennas == 0)
            throw std::invalid_argument("Steering vector needs at least one antenna.");

        const double amplitude = 1.0 / std::sqrt(double(num_antennas));
        const double spatial_freq = std::numbers::pi * std::sin(theta_rad);
        std::vector<cdouble> a(num_antennas);
        for (std::size_t n = 0; n < num_antennas; ++n)
            a[n] = std::polar(amplitude, spatial_freq * double(n));
        return a;
    }

    std::vector<PathComponent> draw_multipath(RandomStream &rng, double theta_los_rad, bool blocked,
                                              const ChannelParams &params)
    {
        std::vector<PathComponent> paths;
        paths.reserve(params.num_paths);

        if (!blocked)
        {
            const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            paths.push_back({std::polar(params.los_amplitude, phase), theta_los_rad, theta_los_rad, true});
        }

        for (std::size_t l = 1; l < params.num_paths; ++l)
        {
            const double re = params.nlos_sigma * rng.normal();
            const double im = params.nlos_sigma * rng.normal();
            const double aod = rng.uniform(params.nlos_aod_min, params.nlos_aod_max);
            const double aoa = rng.uniform(-std::numbers::pi / 2, std::numbers::pi / 2);
            paths.push_back({cdouble(re, im), aod, aoa, false});
        }
        return paths;
    }

    ChannelMatrix synthesize_channel(std::span<const PathComponent> paths, std::size_t num_tx, std::size_t num_rx)
    {
        if (paths.empty())
            throw std::invalid_argument("Cannot synthesize a channel from an empty path list.");

        ChannelMatrix h(num_rx, num_tx);
        const double scale = std::sqrt(double(num_tx) * double(num_rx));
        for (const auto &path : paths)
        {
            const auto a_t = steering_vector(num_tx, path.aod);
            const auto a_r = steering_vector(num_rx, path.aoa);
            for (std::size_t r = 0; r < num_rx; ++r)
            {
                const cdouble row_gain = scale * path.gain * a_r[r];
                for (std::size_t c = 0; c < num_tx; ++c)
                    h(r, c) += row_gain * std::conj(a_t[c]);
            }
        }
        return h;
    }
} // namespace caviar
