// Command-line front end: plan / run / baseline / bench over scenario files.
// Exit codes: 0 success, 1 input error, 2 no viable plan.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cogmap/io.hpp"

namespace fs = std::filesystem;
using namespace cogmap;

namespace {

struct Options {
    std::string scenario;
    std::string out = ".";
    std::string plan_file;
    std::uint64_t seed = 1;
    int runs = 10;
    double speed = TaskParams{}.linear_speed;
    double angular_speed = TaskParams{}.angular_speed;
    double turn_angle = TaskParams{}.turn_angle;
    double max_travel = TaskParams{}.max_travel;
    double time_step = kDefaultTimeStep;
    double inflation = 0.0;
    double goal_radius = 0.05;
    int max_expansions = 1000;
    std::string chi_sign = "positive";
    double exec_noise = 0.0;
    double jitter = 0.03;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--scenario", o.scenario, "scenario JSON file")->required();
    cmd->add_option("--out", o.out, "output directory for artifacts")
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "master RNG seed")->capture_default_str();
    cmd->add_option("--speed", o.speed, "linear speed, m/s")->capture_default_str();
    cmd->add_option("--angular-speed", o.angular_speed, "angular speed, rad/s")
        ->capture_default_str();
    cmd->add_option("--turn-angle", o.turn_angle, "turn termination angle, rad")
        ->capture_default_str();
    cmd->add_option("--max-travel", o.max_travel, "straight travel ceiling, m")
        ->capture_default_str();
    cmd->add_option("--time-step", o.time_step, "integration step, s")->capture_default_str();
    cmd->add_option("--inflation", o.inflation, "collision inflation margin, m")
        ->capture_default_str();
    cmd->add_option("--goal-radius", o.goal_radius, "goal attainment radius, m")
        ->capture_default_str();
    cmd->add_option("--max-expansions", o.max_expansions, "planner expansion budget")
        ->capture_default_str();
    cmd->add_option("--chi-sign", o.chi_sign, "goal cost sign: positive or negative")
        ->capture_default_str();
    cmd->add_option("--exec-noise", o.exec_noise,
                    "actuation noise sd as a fraction of commanded speeds")
        ->capture_default_str();
}

GoalCostSign parse_sign(const std::string& s) {
    if (s == "positive") return GoalCostSign::kPositive;
    if (s == "negative" || s == "paper-negative") return GoalCostSign::kNegative;
    throw ParseError("unknown value \"" + s + "\" for key \"chi-sign\"");
}

TaskParams task_params(const Options& o) {
    TaskParams p;
    p.linear_speed = o.speed;
    p.angular_speed = o.angular_speed;
    p.turn_angle = o.turn_angle;
    p.max_travel = o.max_travel;
    return p;
}

PlannerConfig planner_base(const Options& o) {
    PlannerConfig cfg;
    cfg.goal_radius = o.goal_radius;
    cfg.max_expansions = o.max_expansions;
    cfg.goal_cost_sign = parse_sign(o.chi_sign);
    cfg.task_params = task_params(o);
    cfg.engine.time_step = o.time_step;
    cfg.engine.collision_inflation = o.inflation;
    return cfg;
}

void write_config_used(const Options& o, const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["scenario"] = o.scenario;
    j["out"] = o.out;
    j["seed"] = o.seed;
    j["runs"] = o.runs;
    j["task"] = {{"linear_speed", o.speed},
                 {"angular_speed", o.angular_speed},
                 {"turn_angle", o.turn_angle},
                 {"max_travel", o.max_travel}};
    j["engine"] = {{"time_step", o.time_step}, {"inflation", o.inflation}};
    j["planner"] = {{"goal_radius", o.goal_radius},
                    {"max_expansions", o.max_expansions},
                    {"chi_sign", o.chi_sign}};
    j["exec_noise_frac"] = o.exec_noise;
    j["jitter"] = o.jitter;
    write_text_file(o.out + "/config_used.json", j.dump(2) + "\n");
}

struct PlanOutput {
    CognitiveMap map;
    Plan plan;
    bool found = false;
    double seconds = 0.0;
};

PlanOutput plan_scenario(const Scenario& scenario, const PlannerConfig& base) {
    const PointCloud scan = ray_cast_scan(scenario, scenario.robot_start);
    const PlannerConfig cfg = planner_config_for(scenario, base);
    PlanOutput out;
    const auto t0 = std::chrono::steady_clock::now();
    out.map = build_cognitive_map(scan, cfg);
    try {
        out.plan = extract_plan(out.map, cfg);
        out.found = true;
    } catch (const NoViablePlan&) {
        out.found = false;
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

int cmd_plan(const Options& o) {
    const Scenario scenario = load_scenario(o.scenario);
    fs::create_directories(o.out);
    const PlanOutput result = plan_scenario(scenario, planner_base(o));

    save_map(result.map, o.out + "/map.json");
    write_text_file(o.out + "/map.dot", map_to_dot(result.map));
    write_config_used(o, "plan");

    std::printf("plan: states=%zu expansions=%zu time=%.6fs\n", result.map.states.size(),
                result.map.expansion_log.size(), result.seconds);
    if (!result.found) {
        std::fprintf(stderr, "no viable plan\n");
        return 2;
    }
    save_plan(result.plan, o.out + "/plan.json");
    std::printf("plan: length=%zu goal_state=%s\n", result.plan.state_ids.size(),
                result.map.goal_state ? std::to_string(*result.map.goal_state).c_str() : "none");
    return 0;
}

int cmd_run(const Options& o) {
    const Scenario scenario = load_scenario(o.scenario);
    fs::create_directories(o.out);

    Plan plan;
    double planning_seconds = 0.0;
    long states = 0;
    if (!o.plan_file.empty()) {
        plan = load_plan(o.plan_file);
    } else {
        const PlanOutput result = plan_scenario(scenario, planner_base(o));
        planning_seconds = result.seconds;
        states = static_cast<long>(result.map.states.size());
        if (!result.found) {
            std::fprintf(stderr, "no viable plan\n");
            return 2;
        }
        plan = result.plan;
    }

    ExecConfig exec;
    exec.time_step = o.time_step;
    exec.goal_radius = o.goal_radius;
    const ActuationNoise noise = noise_fraction(o.exec_noise, task_params(o));
    std::mt19937_64 rng(o.seed);
    ExecutionTrace trace =
        execute_plan(scenario, plan, noise, exec, noise.enabled() ? &rng : nullptr);
    trace.wall_time_planning = planning_seconds;
    trace.states_explored = states;

    save_trace(trace, o.out + "/trace.csv");
    write_config_used(o, "run");
    std::printf("run: goal_reached=%d collisions=%zu steps=%zu\n", trace.goal_reached ? 1 : 0,
                trace.collisions.size(), trace.poses.size());
    return 0;
}

int cmd_baseline(const Options& o) {
    const Scenario scenario = load_scenario(o.scenario);
    fs::create_directories(o.out);

    BaselineParams params;
    params.kinematics = task_params(o);
    params.goal_radius = o.goal_radius;
    params.time_step = o.time_step;
    const ActuationNoise noise = noise_fraction(o.exec_noise, params.kinematics);
    std::mt19937_64 rng(o.seed);
    const bool needs_rng = noise.enabled() || scenario.lidar.range_noise_sd > 0.0;
    const ExecutionTrace trace =
        reactive_baseline(scenario, params, noise, needs_rng ? &rng : nullptr);

    save_trace(trace, o.out + "/trace_baseline.csv");
    write_config_used(o, "baseline");
    std::printf("baseline: goal_reached=%d collisions=%zu steps=%zu\n",
                trace.goal_reached ? 1 : 0, trace.collisions.size(), trace.poses.size());
    return 0;
}

int cmd_bench(const Options& o) {
    const Scenario scenario = load_scenario(o.scenario);
    fs::create_directories(o.out);

    BenchConfig cfg;
    cfg.n_runs = o.runs;
    cfg.seed = o.seed;
    cfg.obstacle_jitter = o.jitter;
    cfg.exec_noise_frac = o.exec_noise > 0.0 ? o.exec_noise : 0.05;
    cfg.planner = planner_base(o);
    cfg.baseline.kinematics = task_params(o);
    cfg.baseline.goal_radius = o.goal_radius;
    cfg.baseline.time_step = o.time_step;
    cfg.exec.time_step = o.time_step;
    cfg.exec.goal_radius = o.goal_radius;

    const BenchResult result = run_benchmark(scenario, cfg);
    write_text_file(o.out + "/summary.json", summary_to_json(result).dump(2) + "\n");
    write_text_file(o.out + "/timing.txt", timing_text(result));
    write_config_used(o, "bench");

    std::printf("condition  goals  collision_runs  collision_events\n");
    std::printf("planner    %d/%d   %d               %ld\n", result.planner.goals_reached,
                result.n_runs, result.planner.runs_with_collisions,
                result.planner.collision_events);
    std::printf("baseline   %d/%d   %d               %ld\n", result.baseline.goals_reached,
                result.n_runs, result.baseline.runs_with_collisions,
                result.baseline.collision_events);
    std::printf("plans found: %d/%d\n", result.plans_found, result.n_runs);
    std::printf("map states: %.1f +/- %.1f\n", result.map_states.mean, result.map_states.sd);
    std::printf("planning time: %.6f +/- %.6f s\n", result.planning_time.mean,
                result.planning_time.sd);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-loop multi-step planner: simulate behaviours against a scan,"
                 " build a cognitive map, extract and execute plans"};
    app.require_subcommand(1);

    Options o;
    CLI::App* plan = app.add_subcommand("plan", "build the cognitive map and extract a plan");
    add_common(plan, o);
    CLI::App* run = app.add_subcommand("run", "plan (or load a plan) and execute it");
    add_common(run, o);
    run->add_option("--plan", o.plan_file, "use an existing plan artifact instead of planning");
    CLI::App* baseline = app.add_subcommand("baseline", "run the reactive baseline controller");
    add_common(baseline, o);
    CLI::App* bench = app.add_subcommand("bench", "benchmark planner vs baseline over seeded runs");
    add_common(bench, o);
    bench->add_option("--runs", o.runs, "number of benchmark runs")->capture_default_str();
    bench->add_option("--jitter", o.jitter, "obstacle translation jitter, m")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (plan->parsed()) return cmd_plan(o);
        if (run->parsed()) return cmd_run(o);
        if (baseline->parsed()) return cmd_baseline(o);
        if (bench->parsed()) return cmd_bench(o);
    } catch (const NoViablePlan& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
