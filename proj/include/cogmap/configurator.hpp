#pragma once

// Planning layer: states, cognitive-map construction by best-first simulated
// exploration, state costs, the reset rule and guard-based plan extraction.
// All planning runs in the frame of the pose the map was built from (the
// root frame); the input cloud is expressed in that frame.

#include <vector>

#include "cogmap/cloud.hpp"
#include "cogmap/sim.hpp"

namespace cogmap {

/// Sign convention for the goal-distance cost term. Positive treats the
/// normalised distance as a cost to minimise; Negative negates the term and
/// flips selection to a maximum, which orders states identically.
enum class GoalCostSign { kPositive, kNegative };

struct PlannerConfig {
    Disturbance goal{DisturbanceKind::Goal, {}};  // location in the root frame
    double goal_radius = 0.05;
    double norm_length = 0.0;  // 0 = use the root-to-goal distance
    int max_expansions = 1000;
    int max_depth = 0;  // expansion rounds from the root; 0 = unlimited
    bool stop_at_goal = true;
    GoalCostSign goal_cost_sign = GoalCostSign::kPositive;
    TaskParams task_params{};
    Footprint footprint{};
    EngineConfig engine{};
    double corridor_clearance = kDefaultClearance;

    double effective_norm() const {
        if (norm_length > 0.0) return norm_length;
        const double d = norm(goal.location);
        return d > 0.0 ? d : 1.0;
    }
};

struct DisturbanceSet {
    Disturbance contingent{};    // what the task runs toward, task frame
    Disturbance interrupting{};  // what cut it short, task frame; kind None if safe
};

struct State {
    int id = 0;
    int parent = -1;  // -1 for the root
    int depth = 0;    // expansion rounds from the root
    Task task;        // start_pose in the root frame, contingent in the task frame
    DisturbanceSet disturbances;
    SimulationResult sim;  // in the task frame
    Pose end_pose{};       // task end in the root frame
    bool expanded = false;
    double past_cost = 0.0;       // normalised distance travelled before interruption
    double heuristic_cost = 0.0;  // normalised end-to-goal distance (signed per config)
    double total_cost = 0.0;

    bool interrupted() const { return disturbances.interrupting.kind != DisturbanceKind::None; }
};

struct Transition {
    int from = 0;
    int to = 0;
    int guard = 0;  // 1 when the transition belongs to the extracted plan
};

/// One priority-queue decision: which state was expanded and what the queue
/// held at that moment (ids, ascending).
struct ExpansionRecord {
    int expanded = 0;
    std::vector<int> queue;
};

struct CognitiveMap {
    std::vector<State> states;
    std::vector<Transition> transitions;
    int root = 0;
    bool budget_exhausted = false;
    std::optional<int> goal_state;
    std::vector<ExpansionRecord> expansion_log;
};

struct Plan {
    std::vector<int> state_ids;  // root first
    std::vector<Task> tasks;     // parallel to state_ids; index 0 is the root anchor
};

/// Contingent disturbance for a task starting where `parent` ended: the goal,
/// re-expressed in the child's start frame. Undefined when the parent was
/// interrupted; such states are leaves.
inline Disturbance reset_disturbance(const State& parent, const PlannerConfig& cfg) {
    if (parent.interrupted()) throw ResetUndefined();
    return {DisturbanceKind::Goal, to_local(parent.end_pose, cfg.goal.location)};
}

inline double past_cost_of(const SimulationResult& sim, const PlannerConfig& cfg) {
    if (sim.interrupted()) return sim.distance_travelled / cfg.effective_norm();
    return 0.0;
}

inline double heuristic_cost_of(const Pose& end_in_root, const PlannerConfig& cfg) {
    const double d = distance(end_in_root.position, cfg.goal.location) / cfg.effective_norm();
    return cfg.goal_cost_sign == GoalCostSign::kPositive ? d : -d;
}

/// True when state a should be taken from the queue before state b.
inline bool selected_before(const State& a, const State& b, const PlannerConfig& cfg) {
    const bool flip = cfg.goal_cost_sign == GoalCostSign::kNegative;
    const double ca = flip ? -a.total_cost : a.total_cost;
    const double cb = flip ? -b.total_cost : b.total_cost;
    if (ca != cb) return ca < cb;
    return a.id < b.id;
}

namespace detail {

inline State make_state(int id, int parent, int depth, Task task, SimulationResult sim,
                        const PlannerConfig& cfg) {
    State s;
    s.id = id;
    s.parent = parent;
    s.depth = depth;
    s.end_pose = compose(task.start_pose, sim.end_pose);
    s.disturbances = {task.contingent, sim.interrupting};
    s.task = std::move(task);
    s.sim = std::move(sim);
    s.past_cost = past_cost_of(s.sim, cfg);
    s.heuristic_cost = heuristic_cost_of(s.end_pose, cfg);
    s.total_cost = s.past_cost + s.heuristic_cost;
    return s;
}

/// Simulates one task against the root cloud. A start pose already in
/// contact yields a zero-length interrupted result rather than an error; the
/// map keeps the evidence as an interrupted state.
inline SimulationResult simulate_in_root(const PointCloud& cloud_root, const Task& task,
                                         const PlannerConfig& cfg) {
    const PointCloud cloud_task = world_to_frame(cloud_root, task.start_pose);
    if (const auto hit = find_point_in_footprint(cloud_task.points, Pose::identity(),
                                                 cfg.footprint, cfg.engine.collision_inflation)) {
        SimulationResult blocked;
        blocked.interrupting = {DisturbanceKind::Obstacle, *hit};
        blocked.path.push_back(Pose::identity());
        return blocked;
    }
    const WorldModel model =
        build_world_model(cloud_task, task, cfg.footprint, cfg.engine, cfg.corridor_clearance);
    return simulate_task(model, task);
}

}  // namespace detail

/// Expands one safe, not-yet-expanded state: runs the three behaviour
/// branches (straight; left turn then straight; right turn then straight)
/// from its end pose, adding every executed task as a state. A branch stops
/// at its first interrupted task. Returns the ids of branch-terminal straight
/// states that finished safely, in creation order.
inline std::vector<int> expand(CognitiveMap& map, int id, const PointCloud& cloud_root,
                               const PlannerConfig& cfg) {
    if (map.states[id].interrupted() || map.states[id].expanded) throw ExpandInterrupted();
    map.states[id].expanded = true;

    static constexpr BehaviourKind kBranches[3][2] = {
        {BehaviourKind::Straight, BehaviourKind::Straight},
        {BehaviourKind::LeftTurn, BehaviourKind::Straight},
        {BehaviourKind::RightTurn, BehaviourKind::Straight},
    };
    const int depth = map.states[id].depth + 1;

    std::vector<int> frontier;
    for (const auto& branch : kBranches) {
        const std::size_t length = branch[0] == BehaviourKind::Straight ? 1 : 2;
        int parent = id;
        for (std::size_t i = 0; i < length; ++i) {
            const State& from = map.states[parent];
            Task task;
            task.kind = branch[i];
            task.start_pose = from.end_pose;
            task.contingent = reset_disturbance(from, cfg);
            task.params = cfg.task_params;

            SimulationResult sim = detail::simulate_in_root(cloud_root, task, cfg);
            const int child = static_cast<int>(map.states.size());
            map.states.push_back(
                detail::make_state(child, parent, depth, std::move(task), std::move(sim), cfg));
            map.transitions.push_back({parent, child, 0});

            if (map.states[child].interrupted()) break;
            if (map.states[child].task.kind == BehaviourKind::Straight) frontier.push_back(child);
            parent = child;
        }
    }
    return frontier;
}

/// Best-first construction of the cognitive map from a single scan taken at
/// the root pose. The root state anchors the tree at the scan pose with a
/// trivial simulation; exploration proceeds by expanding the cheapest queued
/// state until the goal is reached, the queue drains, or the expansion
/// budget runs out.
inline CognitiveMap build_cognitive_map(const PointCloud& cloud, const PlannerConfig& cfg) {
    if (find_point_in_footprint(cloud.points, Pose::identity(), cfg.footprint,
                                cfg.engine.collision_inflation))
        throw StartInCollision();

    CognitiveMap map;
    {
        Task anchor;
        anchor.kind = BehaviourKind::Straight;
        anchor.contingent = cfg.goal;  // root frame and task frame coincide
        anchor.start_pose = Pose::identity();
        anchor.params = cfg.task_params;
        SimulationResult still;
        still.path.push_back(Pose::identity());
        map.states.push_back(detail::make_state(0, -1, 0, std::move(anchor), std::move(still), cfg));
    }

    const auto reaches_goal = [&](const State& s) {
        return distance(s.end_pose.position, cfg.goal.location) <= cfg.goal_radius;
    };
    if (reaches_goal(map.states[0])) {
        map.goal_state = 0;
        if (cfg.stop_at_goal) return map;
    }

    std::vector<int> queue{0};
    int expansions = 0;
    while (!queue.empty()) {
        if (expansions >= cfg.max_expansions) {
            map.budget_exhausted = true;
            break;
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < queue.size(); ++i)
            if (selected_before(map.states[queue[i]], map.states[queue[best]], cfg)) best = i;
        const int chosen = queue[best];

        ExpansionRecord record;
        record.expanded = chosen;
        record.queue = queue;
        std::sort(record.queue.begin(), record.queue.end());
        map.expansion_log.push_back(std::move(record));

        queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(best));
        const int size_before = static_cast<int>(map.states.size());
        const std::vector<int> frontier = expand(map, chosen, cloud, cfg);
        ++expansions;

        for (int fid = size_before; fid < static_cast<int>(map.states.size()); ++fid) {
            const State& s = map.states[fid];
            if (!s.interrupted() && !map.goal_state && reaches_goal(s)) map.goal_state = s.id;
        }
        if (map.goal_state && cfg.stop_at_goal) break;

        for (int fid : frontier)
            if (cfg.max_depth == 0 || map.states[fid].depth < cfg.max_depth) queue.push_back(fid);
    }
    return map;
}

/// Root-to-best path. The terminal is the best-cost state among safe states
/// (ties to the lowest id); guards are rewritten so exactly the path's
/// transitions carry 1. Fails when the map holds no safe state beyond the
/// root, unless the root itself already satisfies the goal.
inline Plan extract_plan(CognitiveMap& map, const PlannerConfig& cfg) {
    int best = -1;
    bool safe_non_root = false;
    for (const State& s : map.states) {
        if (s.interrupted()) continue;
        if (s.id != map.root) safe_non_root = true;
        if (best < 0 || selected_before(s, map.states[best], cfg)) best = s.id;
    }
    if (!safe_non_root) {
        const State& root = map.states[map.root];
        if (distance(root.end_pose.position, cfg.goal.location) > cfg.goal_radius)
            throw NoViablePlan();
        best = map.root;
    }

    Plan plan;
    for (int id = best; id != -1; id = map.states[id].parent) plan.state_ids.push_back(id);
    std::reverse(plan.state_ids.begin(), plan.state_ids.end());
    for (int id : plan.state_ids) plan.tasks.push_back(map.states[id].task);

    for (auto& t : map.transitions) t.guard = 0;
    for (std::size_t i = 0; i + 1 < plan.state_ids.size(); ++i)
        for (auto& t : map.transitions)
            if (t.from == plan.state_ids[i] && t.to == plan.state_ids[i + 1]) t.guard = 1;
    return plan;
}

/// Goal-distance at the end pose of a map state, in metres.
inline double goal_distance(const State& s, const PlannerConfig& cfg) {
    return distance(s.end_pose.position, cfg.goal.location);
}

}  // namespace cogmap
