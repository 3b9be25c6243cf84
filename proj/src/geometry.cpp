#include "brokersim/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace brokersim {

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

double received_power(Position terminal, Position nap, double coverage_radius, double pow_thr) {
    const double d = distance(terminal, nap);
    if (d > coverage_radius) return 0.0;
    const double d_eff = std::max(d, kMinDistance);
    return pow_thr * coverage_radius * coverage_radius / (d_eff * d_eff);
}

}  // namespace brokersim
