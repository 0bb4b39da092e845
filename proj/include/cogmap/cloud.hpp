#pragma once

// Planar point clouds as produced by the range sensor.

#include <vector>

#include "cogmap/geometry.hpp"

namespace cogmap {

struct PointCloud {
    std::vector<Point2> points;

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
};

/// Re-expresses a cloud given in `from`'s frame into `to`'s frame, where both
/// poses share a common parent frame.
inline PointCloud reframe(const PointCloud& cloud, const Pose& from, const Pose& to) {
    PointCloud out;
    out.points.reserve(cloud.points.size());
    for (const auto& p : cloud.points) out.points.push_back(to_local(to, to_world(from, p)));
    return out;
}

/// Cloud points (given in world coordinates) expressed in `frame`.
inline PointCloud world_to_frame(const PointCloud& cloud, const Pose& frame) {
    PointCloud out;
    out.points.reserve(cloud.points.size());
    for (const auto& p : cloud.points) out.points.push_back(to_local(frame, p));
    return out;
}

}  // namespace cogmap
