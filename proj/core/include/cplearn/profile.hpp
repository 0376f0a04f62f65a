#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace cplearn {

struct ProfilePoint {
    double tau = 1.0;
    double rho = 0.0;
};

// Cumulative distribution of a solver's per-instance ratio to the best
// solver; nondecreasing in tau, bounded in [0, 1].
struct ProfileCurve {
    std::string solver;
    std::vector<ProfilePoint> points;
};

constexpr double profile_failure = std::numeric_limits<double>::infinity();

// metrics[solver][i] = cost on instance i (lower is better); failures are
// +inf. Every solver must cover the same instances. Curves are sampled at
// every distinct finite ratio.
std::vector<ProfileCurve> performance_profile(
    const std::map<std::string, std::vector<double>>& metrics);

} // namespace cplearn
