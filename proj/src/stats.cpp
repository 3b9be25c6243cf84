#include "brokersim/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace brokersim {

double t_critical_95(int dof) {
    if (dof < 1) throw std::invalid_argument("t distribution needs dof >= 1");
    return boost::math::quantile(boost::math::students_t(dof), 0.975);
}

Estimate estimate(std::span<const double> samples) {
    Estimate e;
    double sum = 0.0;
    for (double v : samples) {
        if (std::isnan(v)) continue;
        sum += v;
        ++e.n;
    }
    if (e.n == 0) {
        e.mean = std::numeric_limits<double>::quiet_NaN();
        return e;
    }
    e.mean = sum / e.n;
    if (e.n < 2) return e;
    double ss = 0.0;
    for (double v : samples)
        if (!std::isnan(v)) ss += (v - e.mean) * (v - e.mean);
    const double sd = std::sqrt(ss / (e.n - 1));
    e.half_width = t_critical_95(e.n - 1) * sd / std::sqrt(static_cast<double>(e.n));
    return e;
}

}  // namespace brokersim
