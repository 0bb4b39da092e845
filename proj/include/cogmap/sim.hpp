#pragma once

// Forward simulation of a task against the robot's internal world model (a
// point cloud snapshot). Everything here runs in the task's start frame.

#include <optional>

#include "cogmap/corridor.hpp"
#include "cogmap/task.hpp"

namespace cogmap {

struct EngineConfig {
    double time_step = kDefaultTimeStep;
    double collision_inflation = 0.0;
};

/// Outcome of simulating one task. Poses are in the task start frame; the end
/// pose is the last collision-free pose reached. `interrupting` is None when
/// the task ran to termination, otherwise the obstacle point that cut it short.
struct SimulationResult {
    Pose end_pose{};
    Disturbance interrupting{};
    double distance_travelled = 0.0;
    long steps = 0;
    std::vector<Pose> path;

    bool interrupted() const { return interrupting.kind != DisturbanceKind::None; }
};

/// True when `point` (same frame as `pose`) lies inside the robot footprint
/// placed at `pose`, inflated on all sides. Boundary counts as inside.
inline bool point_in_footprint(const Pose& pose, const Point2& point, const Footprint& footprint,
                               double inflation = 0.0) {
    const Point2 local = to_local(pose, point);
    return std::abs(local.x) <= footprint.half_length + inflation &&
           std::abs(local.y) <= footprint.half_width + inflation;
}

/// First point (input order) inside the footprint at `pose`, if any.
inline std::optional<Point2> find_point_in_footprint(const std::vector<Point2>& points,
                                                     const Pose& pose, const Footprint& footprint,
                                                     double inflation = 0.0) {
    for (const auto& p : points)
        if (point_in_footprint(pose, p, footprint, inflation)) return p;
    return std::nullopt;
}

/// Internal model a task is simulated against: the sensor points that fall in
/// the task's corridor, in the task start frame.
struct WorldModel {
    PointCloud obstacle_points;
    Footprint footprint{};
    EngineConfig config{};
};

/// Builds the model for one task from a cloud already expressed in the task's
/// start frame. Rejects clouds that overlap the footprint before any motion.
inline WorldModel build_world_model(const PointCloud& cloud, const Task& task,
                                    const Footprint& footprint, const EngineConfig& config = {},
                                    double clearance = kDefaultClearance) {
    if (find_point_in_footprint(cloud.points, Pose::identity(), footprint,
                                config.collision_inflation))
        throw StartInCollision();
    WorldModel model;
    model.obstacle_points = resample_pointcloud(cloud, corridor_of(task, footprint, clearance));
    model.footprint = footprint;
    model.config = config;
    return model;
}

/// Rolls the task forward in its own start frame until it terminates or a
/// model point enters the footprint. On interruption the failing step is
/// discarded: the result ends at the last safe pose and carries the offending
/// point as an obstacle disturbance.
inline SimulationResult simulate_task(const WorldModel& model, const Task& task) {
    Task local = task;
    local.start_pose = Pose::identity();

    const double bound = task_bound(local);
    const double rate = local.kind == BehaviourKind::Straight ? local.params.linear_speed
                                                              : local.params.angular_speed;
    const double dt = model.config.time_step;
    const long cap = static_cast<long>(std::ceil(bound / (rate * dt))) + 16;

    SimulationResult result;
    result.path.push_back(local.start_pose);
    Pose pose = local.start_pose;

    for (long step = 0; step < cap; ++step) {
        if (terminated(local, pose)) {
            result.end_pose = pose;
            return result;
        }
        const ControlSignal signal = control_step(local, pose);
        const Pose next = advance_pose(local, pose, signal.motor.linear, signal.motor.angular, dt);
        const auto hit = find_point_in_footprint(model.obstacle_points.points, next,
                                                 model.footprint, model.config.collision_inflation);
        if (hit) {
            result.end_pose = pose;
            result.interrupting = {DisturbanceKind::Obstacle, *hit};
            return result;
        }
        result.distance_travelled += distance(next.position, pose.position);
        result.steps += 1;
        result.path.push_back(next);
        pose = next;
    }
    if (!terminated(local, pose)) throw UnboundedTask();
    result.end_pose = pose;
    return result;
}

}  // namespace cogmap
