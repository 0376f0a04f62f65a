#include "cplearn/profile.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace cplearn {

std::vector<ProfileCurve> performance_profile(
    const std::map<std::string, std::vector<double>>& metrics) {
    if (metrics.size() < 2)
        throw std::invalid_argument("profile: need at least two solvers");
    const std::size_t n = metrics.begin()->second.size();
    if (n == 0) throw std::invalid_argument("profile: empty instance set");
    for (const auto& [solver, m] : metrics)
        if (m.size() != n)
            throw std::invalid_argument("profile: instance sets differ (" + solver + ")");

    // per-instance best and per-solver ratios
    std::vector<double> best(n, profile_failure);
    for (const auto& [_, m] : metrics)
        for (std::size_t i = 0; i < n; ++i) best[i] = std::min(best[i], m[i]);

    std::map<std::string, std::vector<double>> ratios;
    std::set<double> taus;
    taus.insert(1.0);
    for (const auto& [solver, m] : metrics) {
        auto& r = ratios[solver];
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(m[i]) || !std::isfinite(best[i])) {
                r.push_back(profile_failure);
            } else {
                const double ratio = best[i] > 0 ? m[i] / best[i]
                                                 : (m[i] > 0 ? profile_failure : 1.0);
                r.push_back(ratio);
                taus.insert(ratio);
            }
        }
    }

    std::vector<ProfileCurve> out;
    for (const auto& [solver, r] : ratios) {
        ProfileCurve c;
        c.solver = solver;
        for (double tau : taus) {
            int covered = 0;
            for (double v : r) covered += v <= tau;
            c.points.push_back({tau, static_cast<double>(covered) / n});
        }
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace cplearn
