#pragma once

#include <stdexcept>
#include <string>

namespace cogmap {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario/artifact file could not be parsed or validated.
struct ParseError : Error {
    using Error::Error;
};

/// Ray-cast origin lies inside an obstacle.
struct SensorOccluded : Error {
    SensorOccluded() : Error("sensor origin occluded") {}
};

/// Robot footprint already overlaps an obstacle point at the start pose.
struct StartInCollision : Error {
    StartInCollision() : Error("start in collision") {}
};

/// Task parameters admit no termination.
struct UnboundedTask : Error {
    UnboundedTask() : Error("unbounded task") {}
};

/// Reset requested for an interrupted parent state.
struct ResetUndefined : Error {
    ResetUndefined() : Error("reset undefined for interrupted state") {}
};

/// Expansion requested from an interrupted state.
struct ExpandInterrupted : Error {
    ExpandInterrupted() : Error("expanding interrupted state") {}
};

/// The cognitive map holds no safe state beyond the root.
struct NoViablePlan : Error {
    NoViablePlan() : Error("no viable plan") {}
};

}  // namespace cogmap
