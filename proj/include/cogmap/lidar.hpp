#pragma once

// Simulated planar range scanner. Rays are cast from the robot pose against
// the scenario's obstacle polygons; returns hit points in the robot frame.

#include <random>
#include <stdexcept>

#include "cogmap/cloud.hpp"
#include "cogmap/scenario.hpp"

namespace cogmap {

/// Beam bearing in the sensor frame. Beam 0 points forward. A full-circle
/// span distributes beams evenly without duplicating the wrap-around
/// direction; a partial span fans symmetrically about forward.
inline double beam_bearing(const LidarModel& lidar, int beam) {
    if (lidar.beam_count == 1) return 0.0;
    const bool full_circle = lidar.angular_span >= 2.0 * kPi - 1e-9;
    if (full_circle)
        return wrap_angle(beam * 2.0 * kPi / lidar.beam_count);
    return -0.5 * lidar.angular_span +
           beam * lidar.angular_span / (lidar.beam_count - 1);
}

/// Casts one scan from `pose` (world frame). Returned points sit in the pose's
/// own frame; beams that exceed max_range contribute nothing. Throws
/// SensorOccluded when the sensor origin is inside an obstacle. When the model
/// carries range noise an RNG must be supplied; noise perturbs the measured
/// range along the beam and is clamped to [0, max_range].
inline PointCloud ray_cast_scan(const Scenario& scenario, const Pose& pose,
                                std::mt19937_64* rng = nullptr) {
    for (const auto& poly : scenario.obstacles)
        if (poly.contains(pose.position)) throw SensorOccluded();

    const LidarModel& lidar = scenario.lidar;
    if (lidar.range_noise_sd > 0.0 && rng == nullptr)
        throw std::invalid_argument("range noise requires an RNG");

    std::normal_distribution<double> noise(0.0, lidar.range_noise_sd);
    PointCloud cloud;
    cloud.points.reserve(static_cast<std::size_t>(lidar.beam_count));

    for (int beam = 0; beam < lidar.beam_count; ++beam) {
        const double bearing = beam_bearing(lidar, beam);
        const double world_angle = pose.heading + bearing;
        const Point2 dir{std::cos(world_angle), std::sin(world_angle)};

        std::optional<double> hit;
        for (const auto& poly : scenario.obstacles) {
            const auto t = ray_polygon_hit(pose.position, dir, poly);
            if (t && (!hit || *t < *hit)) hit = t;
        }
        if (!hit || *hit > lidar.max_range) continue;

        double range = *hit;
        if (lidar.range_noise_sd > 0.0)
            range = std::clamp(range + noise(*rng), 0.0, lidar.max_range);
        cloud.points.push_back({range * std::cos(bearing), range * std::sin(bearing)});
    }
    return cloud;
}

}  // namespace cogmap
