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

#ifndef CAVIAR_WORLD_HPP
#define CAVIAR_WORLD_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace caviar
{
    struct Vec3
    {
        double x = 0.0; // meters
        double y = 0.0;
        double z = 0.0;

        friend bool operator==(const Vec3 &, const Vec3 &) = default;
    };

    Vec3 operator+(const Vec3 &a, const Vec3 &b);
    Vec3 operator-(const Vec3 &a, const Vec3 &b);
    Vec3 operator*(double s, const Vec3 &v);
    double norm(const Vec3 &v);
    bool is_finite(const Vec3 &v);

    // Axis-aligned box, closed on all faces.
    struct ObstacleBox
    {
        Vec3 min_corner;
        Vec3 max_corner;

        bool contains(const Vec3 &p) const;
    };

    // Closed elevation interval in degrees.
    struct AngleInterval
    {
        double lower_deg = 0.0;
        double upper_deg = 0.0;

        bool contains(double deg) const { return deg >= lower_deg && deg <= upper_deg; }
    };

    struct Scene
    {
        Vec3 bs_position;
        std::vector<ObstacleBox> obstacles;
        std::vector<AngleInterval> nlos_angle_masks;
    };

    // Unvalidated scene description as it comes out of a config file.
    struct SceneConfig
    {
        Vec3 bs_position;
        std::vector<ObstacleBox> obstacles;
        std::vector<AngleInterval> nlos_angle_masks;
    };

    // Validates corners, mask intervals and BS placement. Throws std::invalid_argument.
    Scene build_scene(const SceneConfig &config);

    enum class FlightPhase
    {
        takeoff,
        cruise,
        land
    };

    std::string_view to_string(FlightPhase phase);
    FlightPhase flight_phase_from_string(std::string_view name); // throws std::invalid_argument

    struct PhaseSegment
    {
        FlightPhase phase = FlightPhase::cruise;
        std::int64_t duration = 0; // discrete steps, > 0
        Vec3 start_pose;
        Vec3 end_pose;
    };

    // Piecewise-linear flight plan. The first phase is a takeoff from the ground,
    // the last is a landing, consecutive phases share their boundary pose.
    class TrajectoryPlan
    {
    public:
        explicit TrajectoryPlan(std::vector<PhaseSegment> phases);

        const std::vector<PhaseSegment> &phases() const { return phases_; }
        std::int64_t total_steps() const { return total_steps_; }

        // Longest per-step displacement over all phases.
        double max_step_length() const;

    private:
        std::vector<PhaseSegment> phases_;
        std::int64_t total_steps_ = 0;
    };

    struct UavState
    {
        std::int64_t t = 0;
        Vec3 position;
        FlightPhase phase = FlightPhase::takeoff;
    };

    // Linear interpolation inside the active phase; t beyond the plan clamps to
    // the landing pose. Throws std::invalid_argument for negative t.
    UavState trajectory_state(const TrajectoryPlan &plan, std::int64_t t);

    // Elevation of uav as seen from bs, arctan(rise / horizontal range).
    // Result in [-pi/2, pi/2]. Throws std::invalid_argument for coincident points.
    double elevation_rad(const Vec3 &bs, const Vec3 &uav);
    double bs_to_uav_angle_deg(const Vec3 &bs, const Vec3 &uav);

    // Slab test of the open segment a->b against a closed box. Grazing counts.
    bool segment_hits_box(const Vec3 &a, const Vec3 &b, const ObstacleBox &box);

    // TRUE when any obstacle cuts the segment or the elevation falls in a mask.
    bool los_blocked(const Scene &scene, const Vec3 &bs, const Vec3 &uav);

    double deg_to_rad(double deg);
    double rad_to_deg(double rad);
} // namespace caviar

#endif
