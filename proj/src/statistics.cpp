#include "scmdebias/statistics.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "scmdebias/errors.hpp"

namespace scmdebias {

double mean(std::span<const double> values) {
    if (values.empty()) throw UsageError("mean of empty list");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

Interval confidence_interval(std::span<const double> values, double level) {
    if (values.size() < 2) {
        throw UsageError("confidence_interval: need at least 2 values, got " +
                         std::to_string(values.size()));
    }
    if (!(level > 0.0 && level < 1.0)) throw UsageError("confidence_interval: level must be in (0, 1)");
    const double m = mean(values);
    const double s = sample_stddev(values);
    if (s == 0.0) return {m, m};
    const double n = static_cast<double>(values.size());
    const boost::math::students_t dist(n - 1.0);
    const double t = boost::math::quantile(dist, (1.0 + level) / 2.0);
    const double half = t * s / std::sqrt(n);
    return {m - half, m + half};
}

}  // namespace scmdebias
