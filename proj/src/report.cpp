#include "podsketch/report.hpp"

#include <algorithm>

namespace podsketch {

json trace_to_json(const IterationTrace& trace)
{
    json j;
    j["iteration"] = trace.iteration;
    j["distinct_columns"] = trace.distinct_columns;
    j["distinct_rows"] = trace.distinct_rows;
    j["remaining"] = trace.remaining;
    j["cosines"] = trace.cosines;
    j["columns"] = trace.columns;
    j["seconds"] = trace.seconds;
    return j;
}

json traces_to_json(const std::vector<IterationTrace>& traces)
{
    json out = json::array();
    for (const auto& t : traces)
        out.push_back(trace_to_json(t));
    return out;
}

json sigma_to_json(const Vector& sigma)
{
    json out = json::array();
    for (Index i = 0; i < sigma.size(); ++i)
        out.push_back(sigma(i));
    return out;
}

json wedin_to_json(const WedinReport& report)
{
    json j;
    j["r_norm"] = report.r_norm;
    j["s_norm"] = report.s_norm;
    j["omega_hat"] = report.omega_hat;
    // +inf has no JSON spelling; degenerate carries the meaning
    j["measure"] = report.degenerate ? json(nullptr) : json(report.measure);
    j["ceiling"] = report.ceiling;
    j["degenerate"] = report.degenerate;
    if (report.degenerate)
        j["advice"] = kIncreaseKAdvice;
    return j;
}

json angles_to_json(const std::vector<double>& mode, const std::vector<double>& principal)
{
    json j;
    j["mode_degrees"] = mode;
    j["principal_degrees"] = principal;
    return j;
}

namespace {

void require(std::vector<std::string>& problems, const json& obj, const char* key, json::value_t type,
             const std::string& where)
{
    if (!obj.contains(key)) {
        problems.push_back(where + ": missing key '" + key + "'");
        return;
    }
    const json& value = obj.at(key);
    const bool numeric_ok = type == json::value_t::number_float && value.is_number();
    const bool unsigned_ok = type == json::value_t::number_integer && value.is_number_integer();
    if (value.type() != type && !numeric_ok && !unsigned_ok)
        problems.push_back(where + ": key '" + key + "' has type " + value.type_name());
}

void check_number_array(std::vector<std::string>& problems, const json& value, const std::string& where)
{
    if (!value.is_array()) {
        problems.push_back(where + ": expected an array");
        return;
    }
    for (const auto& x : value) {
        if (!x.is_number()) {
            problems.push_back(where + ": non-numeric entry");
            return;
        }
    }
}

void check_angles(std::vector<std::string>& problems, const json& angles)
{
    if (!angles.is_object()) {
        problems.push_back("angles: expected an object");
        return;
    }
    for (const char* key : {"mode_degrees", "principal_degrees"}) {
        if (!angles.contains(key)) {
            problems.push_back(std::string("angles: missing '") + key + "'");
            continue;
        }
        check_number_array(problems, angles.at(key), std::string("angles.") + key);
        for (const auto& x : angles.at(key)) {
            if (x.is_number() && (x.get<double>() < 0.0 || x.get<double>() > 90.0))
                problems.push_back(std::string("angles.") + key + ": value outside [0, 90]");
        }
    }
}

void check_wedin(std::vector<std::string>& problems, const json& wedin)
{
    if (!wedin.is_object()) {
        problems.push_back("wedin: expected an object");
        return;
    }
    for (const char* key : {"r_norm", "s_norm", "omega_hat", "ceiling"})
        require(problems, wedin, key, json::value_t::number_float, "wedin");
    require(problems, wedin, "degenerate", json::value_t::boolean, "wedin");
    if (!wedin.contains("measure")) {
        problems.push_back("wedin: missing key 'measure'");
    } else if (!wedin.at("measure").is_number() && !wedin.at("measure").is_null()) {
        problems.push_back("wedin: measure must be a number or null");
    }
    if (wedin.value("degenerate", false) && !wedin.contains("advice"))
        problems.push_back("wedin: degenerate report without advice");
}

}  // namespace

std::vector<std::string> validate_run_report(const json& report)
{
    std::vector<std::string> problems;
    if (!report.is_object())
        return {"report: expected a JSON object"};
    static const char* const allowed[] = {"config", "sigma", "traces", "angles", "wedin", "timing", "passes"};
    for (const auto& item : report.items()) {
        if (std::find(std::begin(allowed), std::end(allowed), item.key()) == std::end(allowed))
            problems.push_back("report: unexpected key '" + item.key() + "'");
    }
    require(problems, report, "config", json::value_t::object, "report");
    require(problems, report, "traces", json::value_t::array, "report");
    require(problems, report, "timing", json::value_t::object, "report");
    require(problems, report, "passes", json::value_t::number_integer, "report");
    if (report.contains("sigma")) {
        check_number_array(problems, report.at("sigma"), "sigma");
        const auto& s = report.at("sigma");
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (s[i].is_number() && s[i - 1].is_number() && s[i].get<double>() > s[i - 1].get<double>())
                problems.push_back("sigma: not nonincreasing");
        }
    } else {
        problems.push_back("report: missing key 'sigma'");
    }
    if (report.contains("config") && report.at("config").is_object()) {
        const auto& config = report.at("config");
        require(problems, config, "algorithm", json::value_t::string, "config");
        require(problems, config, "k", json::value_t::number_integer, "config");
        require(problems, config, "seed", json::value_t::number_integer, "config");
    }
    if (report.contains("traces") && report.at("traces").is_array()) {
        for (const auto& t : report.at("traces")) {
            require(problems, t, "iteration", json::value_t::number_integer, "trace");
            require(problems, t, "distinct_columns", json::value_t::number_integer, "trace");
            require(problems, t, "distinct_rows", json::value_t::number_integer, "trace");
            require(problems, t, "remaining", json::value_t::number_integer, "trace");
            require(problems, t, "cosines", json::value_t::array, "trace");
            require(problems, t, "seconds", json::value_t::number_float, "trace");
            if (t.contains("cosines") && t.at("cosines").is_array()) {
                for (const auto& c : t.at("cosines")) {
                    if (!c.is_number() || c.get<double>() < -1.0 || c.get<double>() > 1.0)
                        problems.push_back("trace: cosine outside [-1, 1]");
                }
            }
        }
    }
    if (report.contains("timing") && report.at("timing").is_object()) {
        require(problems, report.at("timing"), "wall_seconds", json::value_t::number_float, "timing");
        require(problems, report.at("timing"), "cpu_seconds", json::value_t::number_float, "timing");
    }
    if (report.contains("angles"))
        check_angles(problems, report.at("angles"));
    if (report.contains("wedin"))
        check_wedin(problems, report.at("wedin"));
    return problems;
}

std::vector<std::string> validate_compare_report(const json& report)
{
    std::vector<std::string> problems;
    if (!report.is_object())
        return {"report: expected a JSON object"};
    require(problems, report, "k", json::value_t::number_integer, "report");
    if (!report.contains("angles"))
        problems.push_back("report: missing key 'angles'");
    else
        check_angles(problems, report.at("angles"));
    if (report.contains("wedin"))
        check_wedin(problems, report.at("wedin"));
    return problems;
}

json strip_timing(const json& report)
{
    json out = report;
    out.erase("timing");
    if (out.contains("traces") && out["traces"].is_array()) {
        for (auto& t : out["traces"])
            t.erase("seconds");
    }
    return out;
}

}  // namespace podsketch
