#ifndef PODSKETCH_REPORT_HPP
#define PODSKETCH_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "podsketch/isma.hpp"
#include "podsketch/quality.hpp"

namespace podsketch {

using json = nlohmann::json;

// Run reports are JSON objects with the keys
//   config, sigma, traces, timing, passes   (always)
//   angles, wedin                           (when a reference is given)
// Angles are in degrees. Timing-dependent values live under "timing" and in
// the per-trace "seconds" field only.

json trace_to_json(const IterationTrace& trace);
json traces_to_json(const std::vector<IterationTrace>& traces);
json sigma_to_json(const Vector& sigma);
json wedin_to_json(const WedinReport& report);
json angles_to_json(const std::vector<double>& mode, const std::vector<double>& principal);

inline constexpr const char* kIncreaseKAdvice =
    "omega_hat is numerically zero (clustered singular values at k); rerun with k increased by one or two";

// Structural check of a run report. Returns one message per problem.
std::vector<std::string> validate_run_report(const json& report);

// Structural check of a compare report.
std::vector<std::string> validate_compare_report(const json& report);

// Copy of a report with every timing-dependent field removed.
json strip_timing(const json& report);

}  // namespace podsketch

#endif  // PODSKETCH_REPORT_HPP
