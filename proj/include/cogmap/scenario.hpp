#pragma once

// Scenario description: robot start pose and footprint, goal position,
// obstacle polygons and range-sensor parameters, with strict JSON I/O.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cogmap/geometry.hpp"

namespace cogmap {

struct LidarModel {
    int beam_count = 360;
    double max_range = 4.0;
    double angular_span = 2.0 * kPi;
    double range_noise_sd = 0.0;
};

struct Scenario {
    Pose robot_start{};
    Footprint footprint{};
    Point2 goal{};
    std::vector<ConvexPolygon> obstacles;
    LidarModel lidar{};
};

inline void validate(const Scenario& s) {
    if (!is_finite(s.robot_start.position) || !std::isfinite(s.robot_start.heading))
        throw ParseError("robot pose not finite");
    if (!(s.footprint.half_width > 0.0) || !(s.footprint.half_length > 0.0))
        throw ParseError("footprint extents must be positive");
    if (!is_finite(s.goal)) throw ParseError("goal not finite");
    if (s.lidar.beam_count < 1) throw ParseError("lidar needs at least one beam");
    if (!(s.lidar.max_range > 0.0)) throw ParseError("lidar max_range must be positive");
    if (!(s.lidar.angular_span > 0.0) || s.lidar.angular_span > 2.0 * kPi + 1e-9)
        throw ParseError("lidar span must lie in (0, 2*pi]");
    if (s.lidar.range_noise_sd < 0.0) throw ParseError("lidar noise_sd must be non-negative");
    for (const auto& poly : s.obstacles)
        if (poly.contains(s.goal)) throw ParseError("goal lies inside an obstacle");
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known) throw ParseError("unknown key \"" + it.key() + "\" in " + where);
    }
}

inline double get_number(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ParseError("missing key \"" + std::string(key) + "\" in " + where);
    if (!j.at(key).is_number()) throw ParseError("key \"" + std::string(key) + "\" in " + where + " must be a number");
    return j.at(key).get<double>();
}

inline double get_number_or(const nlohmann::json& j, const char* key, const std::string& where,
                            double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ParseError("key \"" + std::string(key) + "\" in " + where + " must be a number");
    return j.at(key).get<double>();
}

}  // namespace detail

inline Scenario scenario_from_json(const nlohmann::json& j) {
    using detail::get_number;
    using detail::get_number_or;
    using detail::reject_unknown_keys;

    if (!j.is_object()) throw ParseError("scenario root must be an object");
    reject_unknown_keys(j, {"robot", "goal", "obstacles", "lidar"}, "scenario");

    Scenario s;

    if (!j.contains("robot")) throw ParseError("missing key \"robot\" in scenario");
    const auto& jr = j.at("robot");
    if (!jr.is_object()) throw ParseError("\"robot\" must be an object");
    reject_unknown_keys(jr, {"x", "y", "theta", "half_width", "half_length"}, "robot");
    s.robot_start = make_pose(get_number(jr, "x", "robot"), get_number(jr, "y", "robot"),
                              get_number_or(jr, "theta", "robot", 0.0));
    s.footprint.half_width = get_number_or(jr, "half_width", "robot", s.footprint.half_width);
    s.footprint.half_length = get_number_or(jr, "half_length", "robot", s.footprint.half_length);

    if (!j.contains("goal")) throw ParseError("missing key \"goal\" in scenario");
    const auto& jg = j.at("goal");
    if (!jg.is_object()) throw ParseError("\"goal\" must be an object");
    reject_unknown_keys(jg, {"x", "y"}, "goal");
    s.goal = {get_number(jg, "x", "goal"), get_number(jg, "y", "goal")};

    if (j.contains("obstacles")) {
        const auto& jo = j.at("obstacles");
        if (!jo.is_array()) throw ParseError("\"obstacles\" must be an array of polygons");
        for (const auto& jp : jo) {
            if (!jp.is_array()) throw ParseError("each obstacle must be an array of [x, y] vertices");
            std::vector<Point2> ring;
            for (const auto& jv : jp) {
                if (!jv.is_array() || jv.size() != 2 || !jv[0].is_number() || !jv[1].is_number())
                    throw ParseError("obstacle vertex must be a [x, y] number pair");
                ring.push_back({jv[0].get<double>(), jv[1].get<double>()});
            }
            s.obstacles.push_back(make_convex_polygon(std::move(ring)));
        }
    }

    if (j.contains("lidar")) {
        const auto& jl = j.at("lidar");
        if (!jl.is_object()) throw ParseError("\"lidar\" must be an object");
        reject_unknown_keys(jl, {"beams", "max_range", "span", "noise_sd"}, "lidar");
        if (jl.contains("beams")) {
            if (!jl.at("beams").is_number_integer())
                throw ParseError("key \"beams\" in lidar must be an integer");
            s.lidar.beam_count = jl.at("beams").get<int>();
        }
        s.lidar.max_range = get_number_or(jl, "max_range", "lidar", s.lidar.max_range);
        s.lidar.angular_span = get_number_or(jl, "span", "lidar", s.lidar.angular_span);
        s.lidar.range_noise_sd = get_number_or(jl, "noise_sd", "lidar", s.lidar.range_noise_sd);
    }

    validate(s);
    return s;
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["robot"] = {{"x", s.robot_start.position.x},
                  {"y", s.robot_start.position.y},
                  {"theta", s.robot_start.heading},
                  {"half_width", s.footprint.half_width},
                  {"half_length", s.footprint.half_length}};
    j["goal"] = {{"x", s.goal.x}, {"y", s.goal.y}};
    j["obstacles"] = nlohmann::json::array();
    for (const auto& poly : s.obstacles) {
        nlohmann::json jp = nlohmann::json::array();
        for (const auto& v : poly.vertices) jp.push_back({v.x, v.y});
        j["obstacles"].push_back(jp);
    }
    j["lidar"] = {{"beams", s.lidar.beam_count},
                  {"max_range", s.lidar.max_range},
                  {"span", s.lidar.angular_span},
                  {"noise_sd", s.lidar.range_noise_sd}};
    return j;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return scenario_from_json(j);
}

inline void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write scenario file: " + path);
    out << scenario_to_json(s).dump(2) << "\n";
}

}  // namespace cogmap
