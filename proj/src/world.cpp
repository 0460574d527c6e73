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

#include "caviar/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace caviar
{
    Vec3 operator+(const Vec3 &a, const Vec3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    Vec3 operator-(const Vec3 &a, const Vec3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    Vec3 operator*(double s, const Vec3 &v) { return {s * v.x, s * v.y, s * v.z}; }
    double norm(const Vec3 &v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
    bool is_finite(const Vec3 &v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

    double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }
    double rad_to_deg(double rad) { return rad * (180.0 / std::numbers::pi); }

    bool ObstacleBox::contains(const Vec3 &p) const
    {
        return p.x >= min_corner.x && p.x <= max_corner.x &&
               p.y >= min_corner.y && p.y <= max_corner.y &&
               p.z >= min_corner.z && p.z <= max_corner.z;
    }

    Scene build_scene(const SceneConfig &config)
    {
        if (!is_finite(config.bs_position))
            throw std::invalid_argument("BS position must be finite.");

        for (std::size_t i = 0; i < config.obstacles.size(); ++i)
        {
            const auto &box = config.obstacles[i];
            const std::string at = "obstacle " + std::to_string(i) + ": ";
            if (!is_finite(box.min_corner) || !is_finite(box.max_corner))
                throw std::invalid_argument(at + "corners must be finite.");
            if (box.min_corner.x > box.max_corner.x || box.min_corner.y > box.max_corner.y ||
                box.min_corner.z > box.max_corner.z)
                throw std::invalid_argument(at + "min corner exceeds max corner.");
            if (box.contains(config.bs_position))
                throw std::invalid_argument(at + "BS position lies inside the box.");
        }

        for (std::size_t i = 0; i < config.nlos_angle_masks.size(); ++i)
        {
            const auto &mask = config.nlos_angle_masks[i];
            if (!std::isfinite(mask.lower_deg) || !std::isfinite(mask.upper_deg) || mask.lower_deg > mask.upper_deg)
                throw std::invalid_argument("angle mask " + std::to_string(i) + ": lower bound exceeds upper bound.");
        }

        return Scene{config.bs_position, config.obstacles, config.nlos_angle_masks};
    }

    std::string_view to_string(FlightPhase phase)
    {
        switch (phase)
        {
        case FlightPhase::takeoff:
            return "takeoff";
        case FlightPhase::cruise:
            return "cruise";
        case FlightPhase::land:
            return "land";
        }
        return "unknown";
    }

    FlightPhase flight_phase_from_string(std::string_view name)
    {
        if (name == "takeoff")
            return FlightPhase::takeoff;
        if (name == "cruise")
            return FlightPhase::cruise;
        if (name == "land")
            return FlightPhase::land;
        throw std::invalid_argument("unknown flight phase '" + std::string(name) + "'.");
    }

    TrajectoryPlan::TrajectoryPlan(std::vector<PhaseSegment> phases) : phases_(std::move(phases))
    {
        if (phases_.empty())
            throw std::invalid_argument("Trajectory needs at least one phase.");
        if (phases_.front().phase != FlightPhase::takeoff)
            throw std::invalid_argument("Trajectory must start with a takeoff phase.");
        if (phases_.back().phase != FlightPhase::land)
            throw std::invalid_argument("Trajectory must end with a land phase.");

        for (std::size_t i = 0; i < phases_.size(); ++i)
        {
            const auto &seg = phases_[i];
            const std::string at = "phase " + std::to_string(i) + ": ";
            if (seg.duration <= 0)
                throw std::invalid_argument(at + "duration must be positive.");
            if (!is_finite(seg.start_pose) || !is_finite(seg.end_pose))
                throw std::invalid_argument(at + "poses must be finite.");
            if (seg.phase == FlightPhase::takeoff && seg.start_pose.z != 0.0)
                throw std::invalid_argument(at + "takeoff must start at altitude 0.");
            if (seg.phase == FlightPhase::land && seg.end_pose.z != 0.0)
                throw std::invalid_argument(at + "land must end at altitude 0.");
            if (i + 1 < phases_.size() && !(seg.end_pose == phases_[i + 1].start_pose))
                throw std::invalid_argument(at + "end pose differs from the next phase start pose.");
            total_steps_ += seg.duration;
        }
    }

    double TrajectoryPlan::max_step_length() const
    {
        double longest = 0.0;
        for (const auto &seg : phases_)
            longest = std::max(longest, norm(seg.end_pose - seg.start_pose) / double(seg.duration));
        return longest;
    }

    UavState trajectory_state(const TrajectoryPlan &plan, std::int64_t t)
    {
        if (t < 0)
            throw std::invalid_argument("Time index must be nonnegative.");

        const auto &phases = plan.phases();
        if (t >= plan.total_steps())
            return {t, phases.back().end_pose, FlightPhase::land};

        std::int64_t phase_start = 0;
        for (const auto &seg : phases)
        {
            if (t < phase_start + seg.duration)
            {
                const double frac = double(t - phase_start) / double(seg.duration);
                return {t, seg.start_pose + frac * (seg.end_pose - seg.start_pose), seg.phase};
            }
            phase_start += seg.duration;
        }
        return {t, phases.back().end_pose, FlightPhase::land}; // unreachable
    }

    double elevation_rad(const Vec3 &bs, const Vec3 &uav)
    {
        const Vec3 d = uav - bs;
        const double horizontal = std::hypot(d.x, d.y);
        if (horizontal == 0.0 && d.z == 0.0)
            throw std::invalid_argument("BS and UAV positions coincide.");
        return std::atan2(d.z, horizontal);
    }

    double bs_to_uav_angle_deg(const Vec3 &bs, const Vec3 &uav) { return rad_to_deg(elevation_rad(bs, uav)); }

    bool segment_hits_box(const Vec3 &a, const Vec3 &b, const ObstacleBox &box)
    {
        const double origin[3] = {a.x, a.y, a.z};
        const double dir[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
        const double lo[3] = {box.min_corner.x, box.min_corner.y, box.min_corner.z};
        const double hi[3] = {box.max_corner.x, box.max_corner.y, box.max_corner.z};

        double t_enter = -INFINITY;
        double t_exit = INFINITY;
        for (int k = 0; k < 3; ++k)
        {
            if (dir[k] == 0.0)
            {
                if (origin[k] < lo[k] || origin[k] > hi[k])
                    return false;
                continue;
            }
            double t0 = (lo[k] - origin[k]) / dir[k];
            double t1 = (hi[k] - origin[k]) / dir[k];
            if (t0 > t1)
                std::swap(t0, t1);
            t_enter = std::max(t_enter, t0);
            t_exit = std::min(t_exit, t1);
            if (t_enter > t_exit)
                return false;
        }
        // open segment: parameters strictly inside (0, 1)
        return t_exit > 0.0 && t_enter < 1.0;
    }

    bool los_blocked(const Scene &scene, const Vec3 &bs, const Vec3 &uav)
    {
        for (const auto &box : scene.obstacles)
            if (segment_hits_box(bs, uav, box))
                return true;

        if (!scene.nlos_angle_masks.empty())
        {
            const double theta = bs_to_uav_angle_deg(bs, uav);
            for (const auto &mask : scene.nlos_angle_masks)
                if (mask.contains(theta))
                    return true;
        }
        return false;
    }
} // namespace caviar
