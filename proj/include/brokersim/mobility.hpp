#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "brokersim/geometry.hpp"

namespace brokersim {

struct Static {};

struct LinearTo {
    Position dest;
    double speed = 1.0;       // m/s
    double start_time = 0.0;  // s
};

struct Waypoint {
    double t = 0.0;
    Position pos;
};

struct WaypointTrace {
    std::vector<Waypoint> points;  // strictly increasing t
};

using MobilityPlan = std::variant<Static, LinearTo, WaypointTrace>;

// Throws std::invalid_argument when the plan breaks its invariants.
void validate(const MobilityPlan& plan);

// `origin` is the initial position for Static and LinearTo plans.
Position position_at(const MobilityPlan& plan, Position origin, double t);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// One waypoint trace per non-empty line of "t x y t x y ..." triples.
std::vector<MobilityPlan> parse_bonnmotion(std::string_view text);
std::string to_bonnmotion(const std::vector<WaypointTrace>& traces);

struct RandomWaypointParams {
    int nodes = 80;
    double duration = 300.0;
    double width = 26.0;
    double height = 26.0;
    double min_speed = 0.8;
    double max_speed = 1.2;
    double max_pause = 60.0;
};

std::vector<WaypointTrace> random_waypoint(const RandomWaypointParams& params, std::uint64_t seed);

}  // namespace brokersim
