#pragma once

#include <optional>
#include <span>

namespace brokersim {

struct Estimate {
    double mean = 0.0;                // NaN when no finite sample
    std::optional<double> half_width;  // 95 % Student-t, needs n >= 2
    int n = 0;
};

// NaN samples are skipped.
Estimate estimate(std::span<const double> samples);

// Two-sided 95 % critical value of Student's t with `dof` degrees of freedom.
double t_critical_95(int dof);

}  // namespace brokersim
