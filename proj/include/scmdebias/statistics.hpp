#pragma once

#include <span>

namespace scmdebias {

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

double mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for a single value.
double sample_stddev(std::span<const double> values);

// Student-t interval: mean +/- t_{n-1, (1+level)/2} * s / sqrt(n).
Interval confidence_interval(std::span<const double> values, double level = 0.95);

}  // namespace scmdebias
