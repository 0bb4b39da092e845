#pragma once

// Corridor of interest swept by a task, used to discard sensor points that
// cannot interfere with it.

#include "cogmap/cloud.hpp"
#include "cogmap/task.hpp"

namespace cogmap {

inline constexpr double kDefaultClearance = 0.05;

/// Region around a task's nominal path, in the task start frame. The
/// centreline is a polyline (possibly a single point); the corridor is the
/// set of points within half_width of it.
struct TaskCorridor {
    std::vector<Point2> centreline;
    double half_width = 0.0;
};

/// Straight tasks sweep a strip as wide as the robot plus clearance along the
/// travel axis. Turns rotate in place, so their corridor is the disc swept by
/// the footprint corners, again padded by the clearance.
inline TaskCorridor corridor_of(const Task& task, const Footprint& footprint,
                                double clearance = kDefaultClearance) {
    TaskCorridor corridor;
    if (task.kind == BehaviourKind::Straight) {
        const double travel = straight_travel_target(task);
        corridor.centreline.push_back({0.0, 0.0});
        if (travel > 0.0) corridor.centreline.push_back({travel, 0.0});
        corridor.half_width = footprint.half_width + clearance;
    } else {
        corridor.centreline.push_back({0.0, 0.0});
        corridor.half_width = footprint.corner_radius() + clearance;
    }
    return corridor;
}

inline double corridor_distance(const TaskCorridor& corridor, const Point2& p) {
    double best = std::numeric_limits<double>::infinity();
    if (corridor.centreline.size() == 1) return distance(p, corridor.centreline.front());
    for (std::size_t i = 0; i + 1 < corridor.centreline.size(); ++i)
        best = std::min(best,
                        point_segment_distance(p, corridor.centreline[i], corridor.centreline[i + 1]));
    return best;
}

/// Keeps only the cloud points inside the corridor, preserving order.
/// Applying it twice with the same corridor changes nothing.
inline PointCloud resample_pointcloud(const PointCloud& cloud, const TaskCorridor& corridor) {
    PointCloud out;
    for (const auto& p : cloud.points)
        if (corridor_distance(corridor, p) <= corridor.half_width) out.points.push_back(p);
    return out;
}

}  // namespace cogmap
