#pragma once

// Execution layer: runs plans and the reactive baseline against the
// ground-truth scenario world (polygon obstacles, optional actuation noise)
// and collects benchmark statistics over seeded runs.

#include <array>
#include <chrono>
#include <cstdint>
#include <random>

#include "cogmap/configurator.hpp"
#include "cogmap/lidar.hpp"
#include "cogmap/scenario.hpp"

namespace cogmap {

/// Per-channel Gaussian noise added to the commanded speeds at every control
/// step while a behaviour runs. Standard deviations are absolute.
struct ActuationNoise {
    double linear_sd = 0.0;
    double angular_sd = 0.0;

    bool enabled() const { return linear_sd > 0.0 || angular_sd > 0.0; }
};

inline ActuationNoise noise_fraction(double fraction, const TaskParams& params) {
    return {fraction * params.linear_speed, fraction * params.angular_speed};
}

struct ExecConfig {
    double time_step = kDefaultTimeStep;
    double goal_radius = 0.05;
    double task_time_factor = 10.0;  // per-task step budget, multiple of the nominal duration
};

struct TimedPose {
    double t = 0.0;
    Pose pose{};
    bool collided = false;
};

struct CollisionEvent {
    double t = 0.0;
    Point2 contact{};
};

struct ExecutionTrace {
    std::vector<TimedPose> poses;
    std::vector<CollisionEvent> collisions;  // rising edges only
    bool goal_reached = false;
    double wall_time_planning = 0.0;  // filled by the caller that planned
    long states_explored = 0;         // likewise
    ActuationNoise actuation_noise{};
};

/// Generic unicycle integration step (exact arc), no termination clipping.
inline Pose unicycle_step(const Pose& pose, double linear, double angular, double dt) {
    Pose next = pose;
    if (std::abs(angular) < 1e-12) {
        next.position.x += linear * std::cos(pose.heading) * dt;
        next.position.y += linear * std::sin(pose.heading) * dt;
    } else {
        const double h0 = pose.heading;
        const double h1 = h0 + angular * dt;
        const double r = linear / angular;
        next.position.x += r * (std::sin(h1) - std::sin(h0));
        next.position.y -= r * (std::cos(h1) - std::cos(h0));
        next.heading = wrap_angle(h1);
    }
    return next;
}

inline std::array<Point2, 4> footprint_corners(const Pose& pose, const Footprint& fp) {
    return {to_world(pose, {fp.half_length, -fp.half_width}),
            to_world(pose, {fp.half_length, fp.half_width}),
            to_world(pose, {-fp.half_length, fp.half_width}),
            to_world(pose, {-fp.half_length, -fp.half_width})};
}

namespace detail {

template <typename RingA, typename RingB>
bool separated_by_edge_of(const RingA& a, const RingB& b) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 edge = a[(i + 1) % n] - a[i];
        const Point2 outward{edge.y, -edge.x};  // CCW ring: interior on the left
        double lowest = std::numeric_limits<double>::infinity();
        for (const auto& q : b) lowest = std::min(lowest, dot(q - a[i], outward));
        if (lowest > 1e-12) return true;
    }
    return false;
}

}  // namespace detail

/// Separating-axis test between the robot rectangle at `pose` and a convex
/// obstacle. Touching counts as contact.
inline bool footprint_hits_polygon(const Pose& pose, const Footprint& fp,
                                   const ConvexPolygon& poly) {
    const auto rect = footprint_corners(pose, fp);
    return !detail::separated_by_edge_of(rect, poly.vertices) &&
           !detail::separated_by_edge_of(poly.vertices, rect);
}

namespace detail {

struct ContactProbe {
    const Scenario* scenario = nullptr;
    bool in_contact = false;

    /// Checks the pose against every obstacle; logs a rising edge.
    void check(const Pose& pose, double t, std::vector<CollisionEvent>& events) {
        bool now = false;
        Point2 contact{};
        for (const auto& poly : scenario->obstacles) {
            if (footprint_hits_polygon(pose, scenario->footprint, poly)) {
                now = true;
                contact = polygon_closest_point(pose.position, poly);
                break;
            }
        }
        if (now && !in_contact) events.push_back({t, contact});
        in_contact = now;
    }
};

inline void apply_noise(double& linear, double& angular, const ActuationNoise& noise,
                        std::mt19937_64* rng) {
    if (!noise.enabled()) return;
    std::normal_distribution<double> dl(0.0, noise.linear_sd > 0.0 ? noise.linear_sd : 1e-300);
    std::normal_distribution<double> da(0.0, noise.angular_sd > 0.0 ? noise.angular_sd : 1e-300);
    linear += noise.linear_sd > 0.0 ? dl(*rng) : 0.0;
    angular += noise.angular_sd > 0.0 ? da(*rng) : 0.0;
}

}  // namespace detail

/// Runs the plan's tasks in sequence against the ground-truth world. Each
/// task re-anchors at the pose actually reached, so execution error carries
/// across tasks; contacts are recorded but do not halt the run.
inline ExecutionTrace execute_plan(const Scenario& scenario, const Plan& plan,
                                   const ActuationNoise& noise = {}, const ExecConfig& cfg = {},
                                   std::mt19937_64* rng = nullptr) {
    if (noise.enabled() && rng == nullptr)
        throw std::invalid_argument("actuation noise requires an RNG");

    ExecutionTrace trace;
    trace.actuation_noise = noise;
    detail::ContactProbe probe{&scenario};

    Pose pose = scenario.robot_start;
    double t = 0.0;
    probe.check(pose, t, trace.collisions);
    trace.poses.push_back({t, pose, probe.in_contact});

    for (std::size_t i = 1; i < plan.tasks.size(); ++i) {
        Task task = plan.tasks[i];
        task.start_pose = pose;

        const double bound = task_bound(task);
        const double rate = task.kind == BehaviourKind::Straight ? task.params.linear_speed
                                                                 : task.params.angular_speed;
        const long cap = static_cast<long>(
                             std::ceil(cfg.task_time_factor * bound / (rate * cfg.time_step))) +
                         16;

        for (long step = 0; step < cap && !terminated(task, pose); ++step) {
            const ControlSignal signal = control_step(task, pose);
            double linear = signal.motor.linear;
            double angular = signal.motor.angular;
            detail::apply_noise(linear, angular, noise, rng);
            pose = advance_pose(task, pose, linear, angular, cfg.time_step);
            t += cfg.time_step;
            probe.check(pose, t, trace.collisions);
            trace.poses.push_back({t, pose, probe.in_contact});
        }
    }

    trace.goal_reached = distance(pose.position, scenario.goal) <= cfg.goal_radius;
    return trace;
}

struct BaselineParams {
    TaskParams kinematics{};
    double lookahead = 0.3;       // m, one-loop-ahead threat range
    double clearance = 0.05;      // m, lateral margin beyond the half width
    double goal_radius = 0.05;    // m
    double time_step = kDefaultTimeStep;
    double max_sim_time = 120.0;  // s
    double stuck_window = 5.0;    // s of history for the no-progress cutoff
    double stuck_min_progress = 0.02;  // m
    double steer_gain = 2.0;           // rad/s per rad of goal bearing
    double align_threshold = 0.2;      // rad, rotate in place beyond this
};

/// Single always-on controller: steer toward the goal, and while the current
/// scan shows points inside the immediate corridor, turn away from their
/// centroid until the corridor clears. No lookahead simulation. Ends on
/// goal, no-progress timeout, sensor occlusion, or the time budget.
inline ExecutionTrace reactive_baseline(const Scenario& scenario, const BaselineParams& params = {},
                                        const ActuationNoise& noise = {},
                                        std::mt19937_64* rng = nullptr) {
    if ((noise.enabled() || scenario.lidar.range_noise_sd > 0.0) && rng == nullptr)
        throw std::invalid_argument("noise requires an RNG");

    ExecutionTrace trace;
    trace.actuation_noise = noise;
    detail::ContactProbe probe{&scenario};

    Pose pose = scenario.robot_start;
    double t = 0.0;
    probe.check(pose, t, trace.collisions);
    trace.poses.push_back({t, pose, probe.in_contact});

    const double corridor_half = scenario.footprint.half_width + params.clearance;
    const long stuck_steps = static_cast<long>(params.stuck_window / params.time_step);
    std::vector<Point2> history{pose.position};
    int avoidance_dir = 0;

    while (t < params.max_sim_time) {
        if (distance(pose.position, scenario.goal) <= params.goal_radius) {
            trace.goal_reached = true;
            break;
        }
        bool occluded = false;
        for (const auto& poly : scenario.obstacles)
            if (poly.contains(pose.position)) occluded = true;
        if (occluded) break;

        const PointCloud scan = ray_cast_scan(scenario, pose, rng);
        Point2 threat_sum{};
        int threat_count = 0;
        for (const auto& p : scan.points) {
            if (p.x > 0.0 && p.x <= params.lookahead && std::abs(p.y) <= corridor_half) {
                threat_sum = threat_sum + p;
                ++threat_count;
            }
        }

        double linear = 0.0, angular = 0.0;
        if (threat_count > 0) {
            if (avoidance_dir == 0) {
                const double bearing = std::atan2(threat_sum.y / threat_count,
                                                  threat_sum.x / threat_count);
                avoidance_dir = bearing >= 0.0 ? -1 : 1;
            }
            angular = avoidance_dir * params.kinematics.angular_speed;
        } else {
            avoidance_dir = 0;
            const Point2 rel = to_local(pose, scenario.goal);
            const double bearing = std::atan2(rel.y, rel.x);
            if (std::abs(bearing) > params.align_threshold) {
                angular = (bearing >= 0.0 ? 1.0 : -1.0) * params.kinematics.angular_speed;
            } else {
                linear = params.kinematics.linear_speed;
                angular = std::clamp(params.steer_gain * bearing,
                                     -params.kinematics.angular_speed,
                                     params.kinematics.angular_speed);
            }
        }

        detail::apply_noise(linear, angular, noise, rng);
        pose = unicycle_step(pose, linear, angular, params.time_step);
        t += params.time_step;
        probe.check(pose, t, trace.collisions);
        trace.poses.push_back({t, pose, probe.in_contact});

        history.push_back(pose.position);
        if (static_cast<long>(history.size()) > stuck_steps + 1) {
            const Point2& then = history[history.size() - 1 - stuck_steps];
            if (distance(pose.position, then) < params.stuck_min_progress) break;
        }
    }

    if (!trace.goal_reached)
        trace.goal_reached = distance(pose.position, scenario.goal) <= params.goal_radius;
    return trace;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t seed_for_run(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master + 0x9E3779B97F4A7C15ull * (stream + 1));
}

struct Stats {
    double mean = 0.0;
    double sd = 0.0;
};

inline Stats mean_sd(const std::vector<double>& xs) {
    if (xs.empty()) return {};
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

struct BenchConfig {
    int n_runs = 10;
    std::uint64_t seed = 1;
    double obstacle_jitter = 0.03;    // m, uniform translation per obstacle
    double exec_noise_frac = 0.05;    // of commanded speeds, baseline condition
    PlannerConfig planner{};          // goal/norm are derived per scenario
    BaselineParams baseline{};
    ExecConfig exec{};
};

struct ConditionStats {
    int goals_reached = 0;
    int runs_with_collisions = 0;
    long collision_events = 0;
    int clean_successes = 0;  // goal reached with no contact at all
};

struct BenchResult {
    int n_runs = 0;
    std::uint64_t seed = 0;
    double obstacle_jitter = 0.0;
    double exec_noise_frac = 0.0;
    int plans_found = 0;
    ConditionStats planner;
    ConditionStats baseline;
    Stats map_states;
    long states_min = 0;
    long states_max = 0;
    Stats plan_length;
    Stats planning_time;  // seconds; wall clock, not part of the deterministic summary
};

/// Translates each obstacle by an independent uniform offset, resampling
/// until the scenario stays valid (start pose free, goal outside obstacles).
inline Scenario jitter_obstacles(const Scenario& scenario, double jitter, std::mt19937_64& rng) {
    if (jitter <= 0.0 || scenario.obstacles.empty()) return scenario;
    std::uniform_real_distribution<double> offset(-jitter, jitter);
    for (int attempt = 0; attempt < 100; ++attempt) {
        Scenario candidate = scenario;
        for (auto& poly : candidate.obstacles) {
            const double dx = offset(rng);
            const double dy = offset(rng);
            for (auto& v : poly.vertices) v = v + Point2{dx, dy};
        }
        bool ok = true;
        for (const auto& poly : candidate.obstacles) {
            if (poly.contains(candidate.goal) || poly.contains(candidate.robot_start.position) ||
                footprint_hits_polygon(candidate.robot_start, candidate.footprint, poly))
                ok = false;
        }
        if (ok) return candidate;
    }
    return scenario;
}

/// Planner settings for a concrete scenario: goal re-expressed in the robot
/// start frame, normalisation defaulted to the start-to-goal distance.
inline PlannerConfig planner_config_for(const Scenario& scenario, PlannerConfig base = {}) {
    base.goal = {DisturbanceKind::Goal, to_local(scenario.robot_start, scenario.goal)};
    base.footprint = scenario.footprint;
    return base;
}

/// Runs the planned and reactive conditions over seeded jittered copies of
/// the scenario. The planned condition executes noise-free; the baseline
/// gets actuation noise. Deterministic for a fixed seed, apart from the
/// wall-clock timing stats.
inline BenchResult run_benchmark(const Scenario& scenario, const BenchConfig& cfg) {
    BenchResult result;
    result.n_runs = cfg.n_runs;
    result.seed = cfg.seed;
    result.obstacle_jitter = cfg.obstacle_jitter;
    result.exec_noise_frac = cfg.exec_noise_frac;

    std::vector<double> states, lengths, times;
    for (int run = 0; run < cfg.n_runs; ++run) {
        std::mt19937_64 rng_world(seed_for_run(cfg.seed, 2 * static_cast<std::uint64_t>(run)));
        std::mt19937_64 rng_baseline(
            seed_for_run(cfg.seed, 2 * static_cast<std::uint64_t>(run) + 1));
        const Scenario world = jitter_obstacles(scenario, cfg.obstacle_jitter, rng_world);

        const PointCloud scan = ray_cast_scan(world, world.robot_start);
        const PlannerConfig pcfg = planner_config_for(world, cfg.planner);

        const auto t0 = std::chrono::steady_clock::now();
        CognitiveMap map = build_cognitive_map(scan, pcfg);
        bool found = true;
        Plan plan;
        try {
            plan = extract_plan(map, pcfg);
        } catch (const NoViablePlan&) {
            found = false;
        }
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
        states.push_back(static_cast<double>(map.states.size()));

        if (found) {
            ++result.plans_found;
            lengths.push_back(static_cast<double>(plan.state_ids.size()));
            ExecConfig exec = cfg.exec;
            exec.goal_radius = pcfg.goal_radius;
            const ExecutionTrace trace = execute_plan(world, plan, {}, exec);
            result.planner.goals_reached += trace.goal_reached ? 1 : 0;
            result.planner.runs_with_collisions += trace.collisions.empty() ? 0 : 1;
            result.planner.collision_events += static_cast<long>(trace.collisions.size());
            result.planner.clean_successes +=
                trace.goal_reached && trace.collisions.empty() ? 1 : 0;
        }

        const ActuationNoise noise = noise_fraction(cfg.exec_noise_frac, cfg.baseline.kinematics);
        const ExecutionTrace base =
            reactive_baseline(world, cfg.baseline, noise, &rng_baseline);
        result.baseline.goals_reached += base.goal_reached ? 1 : 0;
        result.baseline.runs_with_collisions += base.collisions.empty() ? 0 : 1;
        result.baseline.collision_events += static_cast<long>(base.collisions.size());
        result.baseline.clean_successes += base.goal_reached && base.collisions.empty() ? 1 : 0;
    }

    for (double s : states) {
        const long n = static_cast<long>(s);
        if (result.states_min == 0 || n < result.states_min) result.states_min = n;
        if (n > result.states_max) result.states_max = n;
    }
    result.map_states = mean_sd(states);
    result.plan_length = mean_sd(lengths);
    result.planning_time = mean_sd(times);
    return result;
}

}  // namespace cogmap
