#pragma once

// Shared test utilities: independently derived oracles for the geometric and
// planning primitives, random scenario generation, structural map checks and
// a small CLI driver. Framework-free so both the unit suite and the
// acceptance binary can use it.

#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "cogmap/io.hpp"

namespace testsup {

using namespace cogmap;

// ---------------------------------------------------------------------------
// Geometry oracles, written with different algebra than the library.

/// Point-segment distance by explicit endpoint/interior case split.
inline double oracle_point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double wx = p.x - a.x, wy = p.y - a.y;
    const double c1 = vx * wx + vy * wy;
    if (c1 <= 0.0) return std::hypot(p.x - a.x, p.y - a.y);
    const double c2 = vx * vx + vy * vy;
    if (c2 <= c1) return std::hypot(p.x - b.x, p.y - b.y);
    const double t = c1 / c2;
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

/// Ray-segment hit parameter solved through the segment's line equation.
inline std::optional<double> oracle_ray_segment(const Point2& o, const Point2& d, const Point2& a,
                                                const Point2& b) {
    const double ex = b.x - a.x, ey = b.y - a.y;
    const double det = d.x * (-ey) - d.y * (-ex);
    if (std::abs(det) < 1e-15) return std::nullopt;
    const double rx = a.x - o.x, ry = a.y - o.y;
    const double t = (rx * (-ey) + ry * ex) / det;
    const double u = (d.x * ry - d.y * rx) / det;
    if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
    return t;
}

inline std::optional<double> oracle_ray_polygon(const Point2& o, const Point2& d,
                                                const ConvexPolygon& poly) {
    std::optional<double> best;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto t = oracle_ray_segment(o, d, poly.vertices[i], poly.vertices[(i + 1) % n]);
        if (t && (!best || *t < *best)) best = t;
    }
    return best;
}

/// Crossing-number point-in-polygon test (handles any simple polygon).
inline bool oracle_point_in_polygon(const Point2& p, const std::vector<Point2>& ring) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& vi = ring[i];
        const Point2& vj = ring[j];
        if ((vi.y > p.y) != (vj.y > p.y) &&
            p.x < (vj.x - vi.x) * (p.y - vi.y) / (vj.y - vi.y) + vi.x)
            inside = !inside;
    }
    return inside;
}

/// Footprint membership via the four explicit half-planes of the inflated
/// rectangle, evaluated in world coordinates.
inline bool oracle_point_in_footprint(const Pose& pose, const Point2& point, const Footprint& fp,
                                      double inflation = 0.0) {
    const double hl = fp.half_length + inflation;
    const double hw = fp.half_width + inflation;
    const Point2 fwd{std::cos(pose.heading), std::sin(pose.heading)};
    const Point2 left{-fwd.y, fwd.x};
    const double along = (point.x - pose.position.x) * fwd.x + (point.y - pose.position.y) * fwd.y;
    const double side = (point.x - pose.position.x) * left.x + (point.y - pose.position.y) * left.y;
    return along <= hl && along >= -hl && side <= hw && side >= -hw;
}

/// Distance travelled along the task heading, via explicit frame rotation.
inline double oracle_travelled(const Task& task, const Pose& pose) {
    const double c = std::cos(-task.start_pose.heading), s = std::sin(-task.start_pose.heading);
    const double dx = pose.position.x - task.start_pose.position.x;
    const double dy = pose.position.y - task.start_pose.position.y;
    return c * dx - s * dy;
}

// ---------------------------------------------------------------------------
// Random inputs.

inline Point2 random_point(std::mt19937_64& rng, double range) {
    std::uniform_real_distribution<double> d(-range, range);
    return {d(rng), d(rng)};
}

inline Pose random_pose(std::mt19937_64& rng, double range) {
    std::uniform_real_distribution<double> d(-range, range);
    std::uniform_real_distribution<double> a(-kPi, kPi);
    return make_pose(d(rng), d(rng), a(rng));
}

/// Axis-aligned random rectangle as a CCW polygon.
inline ConvexPolygon random_rect(std::mt19937_64& rng, double area, double min_half,
                                 double max_half) {
    std::uniform_real_distribution<double> pos(-area, area);
    std::uniform_real_distribution<double> ext(min_half, max_half);
    const double cx = pos(rng), cy = pos(rng);
    const double hx = ext(rng), hy = ext(rng);
    return make_convex_polygon(
        {{cx - hx, cy - hy}, {cx + hx, cy - hy}, {cx + hx, cy + hy}, {cx - hx, cy + hy}});
}

struct RandomScenarioOpts {
    int max_obstacles = 4;
    double area = 1.2;        // obstacle placement half-extent
    double goal_min = 0.6;
    double goal_max = 1.6;
    int beams = 120;
};

/// Valid random scenario: robot at the origin, goal at a random range and
/// bearing, axis-aligned rectangles that leave the start pose free.
inline Scenario random_scenario(std::mt19937_64& rng, const RandomScenarioOpts& opts = {}) {
    Scenario s;
    s.robot_start = Pose::identity();
    s.footprint = Footprint{};
    std::uniform_real_distribution<double> range(opts.goal_min, opts.goal_max);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    const double r = range(rng), a = angle(rng);
    s.goal = {r * std::cos(a), r * std::sin(a)};
    s.lidar.beam_count = opts.beams;

    std::uniform_int_distribution<int> count(0, opts.max_obstacles);
    const int want = count(rng);
    for (int i = 0; i < want; ++i) {
        for (int attempt = 0; attempt < 20; ++attempt) {
            ConvexPolygon rect = random_rect(rng, opts.area, 0.04, 0.25);
            if (rect.contains(s.goal)) continue;
            if (rect.contains(s.robot_start.position)) continue;
            if (footprint_hits_polygon(s.robot_start, s.footprint, rect)) continue;
            s.obstacles.push_back(std::move(rect));
            break;
        }
    }
    validate(s);
    return s;
}

// ---------------------------------------------------------------------------
// Structural map checks.

struct MapCheck {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

/// Tree shape, transition legality, cost annotations and the recorded
/// best-first expansion order, all re-derived from first principles.
inline MapCheck validate_map(const CognitiveMap& map, const PlannerConfig& cfg) {
    MapCheck check;

    for (std::size_t i = 0; i < map.states.size(); ++i)
        if (map.states[i].id != static_cast<int>(i)) check.fail("state id out of order");
    if (map.root != 0) check.fail("root is not state 0");

    if (map.transitions.size() + 1 != map.states.size())
        check.fail("transition count is not state count minus one");
    std::vector<int> incoming(map.states.size(), 0);
    for (const Transition& t : map.transitions) {
        if (t.to < 0 || t.to >= static_cast<int>(map.states.size()) || t.from < 0 ||
            t.from >= static_cast<int>(map.states.size())) {
            check.fail("transition references a missing state");
            continue;
        }
        incoming[static_cast<std::size_t>(t.to)] += 1;
        if (map.states[static_cast<std::size_t>(t.to)].parent != t.from)
            check.fail("transition disagrees with parent field");
        if (map.states[static_cast<std::size_t>(t.from)].interrupted())
            check.fail("transition out of an interrupted state");
    }
    for (std::size_t i = 0; i < map.states.size(); ++i) {
        const int expect = static_cast<int>(i) == map.root ? 0 : 1;
        if (incoming[i] != expect) check.fail("state has wrong incoming transition count");
    }

    for (const State& s : map.states) {
        const double past = past_cost_of(s.sim, cfg);
        const double heuristic = heuristic_cost_of(s.end_pose, cfg);
        if (std::abs(past - s.past_cost) > 1e-9) check.fail("stored past cost mismatch");
        if (std::abs(heuristic - s.heuristic_cost) > 1e-9)
            check.fail("stored goal cost mismatch");
        if (std::abs(s.past_cost + s.heuristic_cost - s.total_cost) > 1e-9)
            check.fail("total cost is not the sum of its parts");
    }

    // Replay the queue evolution: starts at {root}; each record must pick the
    // best member of the recorded queue, and the next queue must extend the
    // remainder with states created by that expansion.
    std::set<int> queue{map.root};
    for (std::size_t k = 0; k < map.expansion_log.size(); ++k) {
        const ExpansionRecord& rec = map.expansion_log[k];
        const std::set<int> recorded(rec.queue.begin(), rec.queue.end());
        if (recorded != queue) check.fail("recorded queue diverges from replay");
        if (recorded.find(rec.expanded) == recorded.end())
            check.fail("expanded state was not in the queue");
        for (int other : recorded) {
            const State& a = map.states[static_cast<std::size_t>(other)];
            const State& b = map.states[static_cast<std::size_t>(rec.expanded)];
            if (other != rec.expanded && selected_before(a, b, cfg))
                check.fail("expanded state was not the best queue member");
        }
        queue.erase(rec.expanded);
        if (k + 1 < map.expansion_log.size()) {
            for (int id : map.expansion_log[k + 1].queue) {
                if (queue.count(id)) continue;
                const State& s = map.states[static_cast<std::size_t>(id)];
                if (s.interrupted() || s.task.kind != BehaviourKind::Straight)
                    check.fail("queued state is not a safe straight terminal");
                if (s.depth != map.states[static_cast<std::size_t>(rec.expanded)].depth + 1)
                    check.fail("queued state depth does not match its expansion");
                queue.insert(id);
            }
        }
    }
    return check;
}

/// True when guard flags are 1 exactly on the plan's consecutive pairs.
inline bool guards_match_plan(const CognitiveMap& map, const Plan& plan) {
    std::set<std::pair<int, int>> on_plan;
    for (std::size_t i = 0; i + 1 < plan.state_ids.size(); ++i)
        on_plan.insert({plan.state_ids[i], plan.state_ids[i + 1]});
    for (const Transition& t : map.transitions) {
        const bool marked = t.guard == 1;
        const bool expected = on_plan.count({t.from, t.to}) > 0;
        if (marked != expected) return false;
    }
    return true;
}

/// Re-simulates the plan's tasks against the root cloud: every step must run
/// uninterrupted and land on the pose the map recorded.
inline bool replay_plan_safe(const CognitiveMap& map, const Plan& plan,
                             const PointCloud& root_cloud, const PlannerConfig& cfg) {
    for (std::size_t i = 1; i < plan.state_ids.size(); ++i) {
        const State& s = map.states[static_cast<std::size_t>(plan.state_ids[i])];
        const PointCloud local = world_to_frame(root_cloud, s.task.start_pose);
        if (find_point_in_footprint(local.points, Pose::identity(), cfg.footprint,
                                    cfg.engine.collision_inflation))
            return false;
        const WorldModel model = build_world_model(local, s.task, cfg.footprint, cfg.engine,
                                                   cfg.corridor_clearance);
        const SimulationResult sim = simulate_task(model, s.task);
        if (sim.interrupted()) return false;
        const Pose end = compose(s.task.start_pose, sim.end_pose);
        if (distance(end.position, s.end_pose.position) > 1e-9 ||
            std::abs(wrap_angle(end.heading - s.end_pose.heading)) > 1e-9)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of branch sequences, independent of the map search.

struct EnumTerminal {
    std::string path;  // bout labels joined by commas, e.g. "RS,LS,S"
    Pose end;          // root frame
    double phi = 0.0;
};

namespace detail {

inline void enumerate_from(const Pose& end_in_root, int depth, int max_depth,
                           const std::string& prefix, const PointCloud& cloud,
                           const PlannerConfig& cfg, std::vector<EnumTerminal>& out) {
    if (depth >= max_depth) return;
    static const struct {
        const char* label;
        BehaviourKind kinds[2];
        int length;
    } branches[3] = {
        {"S", {BehaviourKind::Straight, BehaviourKind::Straight}, 1},
        {"LS", {BehaviourKind::LeftTurn, BehaviourKind::Straight}, 2},
        {"RS", {BehaviourKind::RightTurn, BehaviourKind::Straight}, 2},
    };
    for (const auto& branch : branches) {
        Pose pose = end_in_root;
        bool safe = true;
        for (int i = 0; i < branch.length && safe; ++i) {
            Task task;
            task.kind = branch.kinds[i];
            task.start_pose = pose;
            task.contingent = {DisturbanceKind::Goal, to_local(pose, cfg.goal.location)};
            task.params = cfg.task_params;
            const PointCloud local = world_to_frame(cloud, pose);
            SimulationResult sim;
            if (find_point_in_footprint(local.points, Pose::identity(), cfg.footprint,
                                        cfg.engine.collision_inflation)) {
                safe = false;
                break;
            }
            const WorldModel model = build_world_model(local, task, cfg.footprint, cfg.engine,
                                                       cfg.corridor_clearance);
            sim = simulate_task(model, task);
            if (sim.interrupted()) {
                safe = false;
                break;
            }
            pose = compose(pose, sim.end_pose);
        }
        if (!safe) continue;
        const std::string path = prefix.empty() ? branch.label : prefix + "," + branch.label;
        out.push_back({path, pose, heuristic_cost_of(pose, cfg)});
        enumerate_from(pose, depth + 1, max_depth, path, cloud, cfg, out);
    }
}

}  // namespace detail

inline std::vector<EnumTerminal> enumerate_tree(const PointCloud& cloud, const PlannerConfig& cfg,
                                                int max_depth) {
    std::vector<EnumTerminal> out;
    detail::enumerate_from(Pose::identity(), 0, max_depth, "", cloud, cfg, out);
    return out;
}

/// Branch-label path of a map state: turns pair with the straight that
/// follows them, so paths use the same alphabet as enumerate_tree.
inline std::string branch_path_of(const CognitiveMap& map, int id) {
    std::vector<int> chain;
    for (int cur = id; cur != -1; cur = map.states[static_cast<std::size_t>(cur)].parent)
        chain.push_back(cur);
    std::reverse(chain.begin(), chain.end());
    std::string path;
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const BehaviourKind kind = map.states[static_cast<std::size_t>(chain[i])].task.kind;
        if (!path.empty()) path += ",";
        if (kind == BehaviourKind::Straight) {
            path += "S";
        } else {
            path += kind == BehaviourKind::LeftTurn ? "LS" : "RS";
            ++i;  // the paired straight
        }
    }
    return path;
}

// ---------------------------------------------------------------------------
// CLI driver.

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline CliResult run_cli(const std::string& binary, const std::string& args,
                         const std::string& workdir) {
    const std::string out_file = workdir + "/cli_stdout.txt";
    const std::string err_file = workdir + "/cli_stderr.txt";
    const std::string cmd = "cd '" + workdir + "' && '" + binary + "' " + args + " >'" +
                            out_file + "' 2>'" + err_file + "'";
    const int status = std::system(cmd.c_str());
    CliResult result;
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    try {
        result.out = read_text_file(out_file);
        result.err = read_text_file(err_file);
    } catch (const ParseError&) {
    }
    return result;
}

}  // namespace testsup
