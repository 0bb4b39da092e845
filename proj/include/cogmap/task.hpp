#pragma once

// Closed-loop behaviour primitives. A task pairs a behaviour (drive straight,
// turn left, turn right) with the disturbance it runs against; it terminates
// on its own criterion rather than after a fixed time.

#include <vector>

#include "cogmap/geometry.hpp"

namespace cogmap {

inline constexpr double kDefaultTimeStep = 0.05;

enum class BehaviourKind { Straight, LeftTurn, RightTurn };

inline const char* to_string(BehaviourKind k) {
    switch (k) {
        case BehaviourKind::Straight: return "straight";
        case BehaviourKind::LeftTurn: return "left_turn";
        case BehaviourKind::RightTurn: return "right_turn";
    }
    return "?";
}

enum class DisturbanceKind { Goal, Obstacle, None };

inline const char* to_string(DisturbanceKind k) {
    switch (k) {
        case DisturbanceKind::Goal: return "goal";
        case DisturbanceKind::Obstacle: return "obstacle";
        case DisturbanceKind::None: return "none";
    }
    return "?";
}

/// A feature the robot reacts to. `location` is expressed in the frame of the
/// pose the owning task started from.
struct Disturbance {
    DisturbanceKind kind = DisturbanceKind::None;
    Point2 location{};
};

struct TaskParams {
    double linear_speed = 0.2;    // m/s, straight behaviour
    double angular_speed = 1.0;   // rad/s, turn behaviours
    double turn_angle = kPi / 2;  // rad, turn termination target, in (0, pi]
    double max_travel = 2.0;      // m, straight travel ceiling
};

struct Task {
    BehaviourKind kind = BehaviourKind::Straight;
    Disturbance contingent{};  // location in the start_pose frame
    Pose start_pose{};
    TaskParams params{};
};

struct ControlSignal {
    struct {
        double bearing = 0.0;
        double range = 0.0;
    } error;  // toward the contingent disturbance, in the current pose frame
    struct {
        double linear = 0.0;
        double angular = 0.0;
    } motor;
};

/// Straight tasks run toward the contingent disturbance's closest-approach
/// abscissa. A disturbance at or behind the start (within rounding of the
/// perpendicular) never yields an approach point ahead, so the travel
/// ceiling bounds the task instead.
inline double straight_travel_target(const Task& task) {
    constexpr double kAheadEps = 1e-9;
    const double along = task.contingent.location.x;
    if (!std::isfinite(along)) throw UnboundedTask();
    return along > kAheadEps ? std::min(along, task.params.max_travel) : task.params.max_travel;
}

/// Signed distance travelled from the task start, projected on the start
/// heading. `pose` shares the start pose's parent frame.
inline double travelled_along(const Task& task, const Pose& pose) {
    return dot(pose.position - task.start_pose.position, heading_direction(task.start_pose));
}

/// Rotation accumulated since the task start, as an unsigned angle.
inline double turn_progress(const Task& task, const Pose& pose) {
    return std::abs(wrap_angle(pose.heading - task.start_pose.heading));
}

/// Termination bound for the task: metres for straights, radians for turns.
/// Throws when the parameters admit no termination.
inline double task_bound(const Task& task) {
    if (task.kind == BehaviourKind::Straight) {
        if (!(task.params.linear_speed > 0.0)) throw UnboundedTask();
        return straight_travel_target(task);
    }
    if (!(task.params.angular_speed > 0.0)) throw UnboundedTask();
    if (task.params.turn_angle > kPi + 1e-12) throw UnboundedTask();
    return task.params.turn_angle;
}

inline bool terminated(const Task& task, const Pose& pose) {
    constexpr double eps = 1e-12;
    if (task.kind == BehaviourKind::Straight)
        return travelled_along(task, pose) >= straight_travel_target(task) - eps;
    return turn_progress(task, pose) >= task.params.turn_angle - eps;
}

/// One controller tick. The error channel always tracks the contingent
/// disturbance; motor commands are zero exactly when the task has terminated.
inline ControlSignal control_step(const Task& task, const Pose& pose) {
    ControlSignal signal;
    if (task.contingent.kind != DisturbanceKind::None) {
        const Point2 world = to_world(task.start_pose, task.contingent.location);
        const Point2 rel = to_local(pose, world);
        signal.error.bearing = std::atan2(rel.y, rel.x);
        signal.error.range = norm(rel);
    }
    if (terminated(task, pose)) return signal;
    switch (task.kind) {
        case BehaviourKind::Straight:
            signal.motor.linear = task.params.linear_speed;
            break;
        case BehaviourKind::LeftTurn:
            signal.motor.angular = task.params.angular_speed;
            break;
        case BehaviourKind::RightTurn:
            signal.motor.angular = -task.params.angular_speed;
            break;
    }
    return signal;
}

/// Unicycle step with the step duration clipped so the task lands exactly on
/// its termination bound in the noiseless case.
inline Pose advance_pose(const Task& task, const Pose& pose, double linear, double angular,
                         double dt) {
    double dt_eff = dt;
    if (task.kind == BehaviourKind::Straight) {
        if (linear > 0.0) {
            const double remaining = straight_travel_target(task) - travelled_along(task, pose);
            if (remaining > 0.0) dt_eff = std::min(dt, remaining / linear);
        }
    } else if (std::abs(angular) > 0.0) {
        const double remaining = task.params.turn_angle - turn_progress(task, pose);
        if (remaining > 0.0) dt_eff = std::min(dt, remaining / std::abs(angular));
    }

    Pose next = pose;
    if (std::abs(angular) < 1e-12) {
        next.position.x += linear * std::cos(pose.heading) * dt_eff;
        next.position.y += linear * std::sin(pose.heading) * dt_eff;
    } else {
        const double h0 = pose.heading;
        const double h1 = h0 + angular * dt_eff;
        const double r = linear / angular;
        next.position.x += r * (std::sin(h1) - std::sin(h0));
        next.position.y -= r * (std::cos(h1) - std::cos(h0));
        next.heading = wrap_angle(h1);
    }
    return next;
}

/// Noiseless rollout of the task from its start pose. The first element is
/// the start pose itself; the last satisfies the termination criterion.
inline std::vector<Pose> trajectory_of(const Task& task, double dt = kDefaultTimeStep) {
    const double bound = task_bound(task);
    const double rate = task.kind == BehaviourKind::Straight ? task.params.linear_speed
                                                             : task.params.angular_speed;
    const long cap = static_cast<long>(std::ceil(bound / (rate * dt))) + 16;

    std::vector<Pose> poses{task.start_pose};
    Pose pose = task.start_pose;
    for (long step = 0; step < cap; ++step) {
        if (terminated(task, pose)) return poses;
        const ControlSignal signal = control_step(task, pose);
        pose = advance_pose(task, pose, signal.motor.linear, signal.motor.angular, dt);
        poses.push_back(pose);
    }
    if (!terminated(task, pose)) throw UnboundedTask();
    return poses;
}

}  // namespace cogmap
