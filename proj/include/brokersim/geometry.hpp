#pragma once

namespace brokersim {

struct Position {
    double x = 0.0;  // m
    double y = 0.0;  // m
    bool operator==(const Position&) const = default;
};

double distance(Position a, Position b);

// Inverse-square RSS calibrated to pow_thr at the coverage edge; 0 outside.
double received_power(Position terminal, Position nap, double coverage_radius, double pow_thr);

inline constexpr double kMinDistance = 1.0;  // m

}  // namespace brokersim
