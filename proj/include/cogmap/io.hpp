#pragma once

// Artifact readers and writers: cognitive maps (JSON + DOT), plans, execution
// traces (CSV) and benchmark summaries. Every writer has a matching reader so
// emitted artifacts re-parse through the library itself.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cogmap/executor.hpp"

namespace cogmap {

namespace detail {

inline nlohmann::json pose_to_json(const Pose& p) {
    return {{"x", p.position.x}, {"y", p.position.y}, {"theta", p.heading}};
}

inline Pose pose_from_json(const nlohmann::json& j) {
    return make_pose(j.at("x").get<double>(), j.at("y").get<double>(),
                     j.at("theta").get<double>());
}

inline nlohmann::json disturbance_to_json(const Disturbance& d) {
    if (d.kind == DisturbanceKind::None) return {{"kind", "none"}};
    return {{"kind", to_string(d.kind)}, {"x", d.location.x}, {"y", d.location.y}};
}

inline Disturbance disturbance_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "none") return {};
    Disturbance d;
    if (kind == "goal")
        d.kind = DisturbanceKind::Goal;
    else if (kind == "obstacle")
        d.kind = DisturbanceKind::Obstacle;
    else
        throw ParseError("unknown disturbance kind \"" + kind + "\"");
    d.location = {j.at("x").get<double>(), j.at("y").get<double>()};
    return d;
}

inline BehaviourKind behaviour_from_string(const std::string& s) {
    if (s == "straight") return BehaviourKind::Straight;
    if (s == "left_turn") return BehaviourKind::LeftTurn;
    if (s == "right_turn") return BehaviourKind::RightTurn;
    throw ParseError("unknown behaviour kind \"" + s + "\"");
}

inline nlohmann::json task_params_to_json(const TaskParams& p) {
    return {{"linear_speed", p.linear_speed},
            {"angular_speed", p.angular_speed},
            {"turn_angle", p.turn_angle},
            {"max_travel", p.max_travel}};
}

inline TaskParams task_params_from_json(const nlohmann::json& j) {
    TaskParams p;
    p.linear_speed = j.at("linear_speed").get<double>();
    p.angular_speed = j.at("angular_speed").get<double>();
    p.turn_angle = j.at("turn_angle").get<double>();
    p.max_travel = j.at("max_travel").get<double>();
    return p;
}

}  // namespace detail

inline nlohmann::json map_to_json(const CognitiveMap& map) {
    nlohmann::json j;
    j["root"] = map.root;
    j["budget_exhausted"] = map.budget_exhausted;
    j["goal_state"] = map.goal_state ? nlohmann::json(*map.goal_state) : nlohmann::json(nullptr);
    j["states"] = nlohmann::json::array();
    for (const State& s : map.states) {
        nlohmann::json js;
        js["id"] = s.id;
        js["parent"] = s.parent;
        js["depth"] = s.depth;
        js["kind"] = to_string(s.task.kind);
        js["start"] = detail::pose_to_json(s.task.start_pose);
        js["end"] = detail::pose_to_json(s.end_pose);
        js["contingent"] = detail::disturbance_to_json(s.disturbances.contingent);
        js["interrupting"] = detail::disturbance_to_json(s.disturbances.interrupting);
        js["distance"] = s.sim.distance_travelled;
        js["steps"] = s.sim.steps;
        js["expanded"] = s.expanded;
        js["past_cost"] = s.past_cost;
        js["goal_cost"] = s.heuristic_cost;
        js["total_cost"] = s.total_cost;
        j["states"].push_back(std::move(js));
    }
    j["transitions"] = nlohmann::json::array();
    for (const Transition& t : map.transitions)
        j["transitions"].push_back({{"from", t.from}, {"to", t.to}, {"guard", t.guard}});
    j["expansions"] = nlohmann::json::array();
    for (const ExpansionRecord& r : map.expansion_log)
        j["expansions"].push_back({{"expanded", r.expanded}, {"queue", r.queue}});
    return j;
}

inline CognitiveMap map_from_json(const nlohmann::json& j) {
    CognitiveMap map;
    try {
        map.root = j.at("root").get<int>();
        map.budget_exhausted = j.at("budget_exhausted").get<bool>();
        if (!j.at("goal_state").is_null()) map.goal_state = j.at("goal_state").get<int>();
        for (const auto& js : j.at("states")) {
            State s;
            s.id = js.at("id").get<int>();
            s.parent = js.at("parent").get<int>();
            s.depth = js.at("depth").get<int>();
            s.task.kind = detail::behaviour_from_string(js.at("kind").get<std::string>());
            s.task.start_pose = detail::pose_from_json(js.at("start"));
            s.end_pose = detail::pose_from_json(js.at("end"));
            s.disturbances.contingent = detail::disturbance_from_json(js.at("contingent"));
            s.disturbances.interrupting = detail::disturbance_from_json(js.at("interrupting"));
            s.task.contingent = s.disturbances.contingent;
            s.sim.interrupting = s.disturbances.interrupting;
            s.sim.distance_travelled = js.at("distance").get<double>();
            s.sim.steps = js.at("steps").get<long>();
            const Pose end_local{to_local(s.task.start_pose, s.end_pose.position),
                                 wrap_angle(s.end_pose.heading - s.task.start_pose.heading)};
            s.sim.end_pose = end_local;
            s.expanded = js.at("expanded").get<bool>();
            s.past_cost = js.at("past_cost").get<double>();
            s.heuristic_cost = js.at("goal_cost").get<double>();
            s.total_cost = js.at("total_cost").get<double>();
            map.states.push_back(std::move(s));
        }
        for (const auto& jt : j.at("transitions"))
            map.transitions.push_back({jt.at("from").get<int>(), jt.at("to").get<int>(),
                                       jt.at("guard").get<int>()});
        for (const auto& jr : j.at("expansions")) {
            ExpansionRecord r;
            r.expanded = jr.at("expanded").get<int>();
            r.queue = jr.at("queue").get<std::vector<int>>();
            map.expansion_log.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid map artifact: ") + e.what());
    }
    return map;
}

/// Graph text export: one node per state (id, behaviour, costs, interruption
/// flag), one edge per transition, plan edges drawn bold.
inline std::string map_to_dot(const CognitiveMap& map) {
    std::ostringstream out;
    out << "digraph cogmap {\n  rankdir=LR;\n  node [shape=box, fontsize=10];\n";
    char buf[160];
    for (const State& s : map.states) {
        std::snprintf(buf, sizeof buf,
                      "  q%d [label=\"q%d %s\\nf=%.3f g=%.3f h=%.3f%s\"%s];\n", s.id, s.id,
                      to_string(s.task.kind), s.total_cost, s.past_cost, s.heuristic_cost,
                      s.interrupted() ? "\\ninterrupted" : "",
                      s.interrupted() ? " style=dashed color=red" : "");
        out << buf;
    }
    for (const Transition& t : map.transitions) {
        out << "  q" << t.from << " -> q" << t.to;
        if (t.guard) out << " [penwidth=3]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

inline nlohmann::json plan_to_json(const Plan& plan) {
    nlohmann::json j;
    j["states"] = plan.state_ids;
    j["params"] = plan.tasks.empty() ? detail::task_params_to_json(TaskParams{})
                                     : detail::task_params_to_json(plan.tasks.front().params);
    j["tasks"] = nlohmann::json::array();
    for (const Task& t : plan.tasks)
        j["tasks"].push_back({{"kind", to_string(t.kind)},
                              {"start", detail::pose_to_json(t.start_pose)},
                              {"contingent", detail::disturbance_to_json(t.contingent)}});
    return j;
}

inline Plan plan_from_json(const nlohmann::json& j) {
    Plan plan;
    try {
        plan.state_ids = j.at("states").get<std::vector<int>>();
        const TaskParams params = detail::task_params_from_json(j.at("params"));
        for (const auto& jt : j.at("tasks")) {
            Task t;
            t.kind = detail::behaviour_from_string(jt.at("kind").get<std::string>());
            t.start_pose = detail::pose_from_json(jt.at("start"));
            t.contingent = detail::disturbance_from_json(jt.at("contingent"));
            t.params = params;
            plan.tasks.push_back(std::move(t));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid plan artifact: ") + e.what());
    }
    if (plan.state_ids.size() != plan.tasks.size())
        throw ParseError("invalid plan artifact: states and tasks differ in length");
    return plan;
}

inline std::string trace_to_csv(const ExecutionTrace& trace) {
    std::ostringstream out;
    out << "t,x,y,theta,collided\n";
    char buf[128];
    for (const TimedPose& p : trace.poses) {
        std::snprintf(buf, sizeof buf, "%.6f,%.17g,%.17g,%.17g,%d\n", p.t, p.pose.position.x,
                      p.pose.position.y, p.pose.heading, p.collided ? 1 : 0);
        out << buf;
    }
    return out.str();
}

inline std::vector<TimedPose> trace_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,y,theta,collided", 0) != 0)
        throw ParseError("invalid trace: missing header");
    std::vector<TimedPose> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TimedPose p;
        int collided = 0;
        double theta = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%d", &p.t, &p.pose.position.x,
                        &p.pose.position.y, &theta, &collided) != 5)
            throw ParseError("invalid trace row: " + line);
        p.pose.heading = theta;
        p.collided = collided != 0;
        rows.push_back(p);
    }
    return rows;
}

/// Deterministic benchmark summary: counts and state statistics only. Wall
/// clock timing is reported separately so this file is byte-stable per seed.
inline nlohmann::json summary_to_json(const BenchResult& r) {
    const auto condition = [](const ConditionStats& c) {
        return nlohmann::json{{"goals_reached", c.goals_reached},
                              {"runs_with_collisions", c.runs_with_collisions},
                              {"collision_events", c.collision_events},
                              {"clean_successes", c.clean_successes}};
    };
    const auto stats = [](const Stats& s) {
        return nlohmann::json{{"mean", s.mean}, {"sd", s.sd}};
    };
    nlohmann::json j;
    j["runs"] = r.n_runs;
    j["seed"] = r.seed;
    j["jitter"] = r.obstacle_jitter;
    j["noise_frac"] = r.exec_noise_frac;
    j["plans_found"] = r.plans_found;
    j["planner"] = condition(r.planner);
    j["baseline"] = condition(r.baseline);
    j["map_states"] = stats(r.map_states);
    j["map_states_min"] = r.states_min;
    j["map_states_max"] = r.states_max;
    j["plan_length"] = stats(r.plan_length);
    return j;
}

inline std::string timing_text(const BenchResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "planning time over %d runs: mean %.6f s, sd %.6f s\n",
                  r.n_runs, r.planning_time.mean, r.planning_time.sd);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << text;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void save_map(const CognitiveMap& map, const std::string& path) {
    write_text_file(path, map_to_json(map).dump(2) + "\n");
}

inline CognitiveMap load_map(const std::string& path) {
    try {
        return map_from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
}

inline void save_plan(const Plan& plan, const std::string& path) {
    write_text_file(path, plan_to_json(plan).dump(2) + "\n");
}

inline Plan load_plan(const std::string& path) {
    try {
        return plan_from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
}

inline void save_trace(const ExecutionTrace& trace, const std::string& path) {
    write_text_file(path, trace_to_csv(trace));
}

}  // namespace cogmap
