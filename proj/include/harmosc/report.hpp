#pragma once

// Structured pass/fail reports for verification suites: a flat list of named
// checks (residual vs tolerance) with a config echo, serialized to versioned
// JSON or to a flat CSV. Rendering is deterministic for a fixed build: the
// JSON field order is fixed, doubles use shortest round-trip formatting, and
// the only run-dependent field is the timestamp.

#include <cmath>
#include <cstdint>
#include <ctime>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "common.hpp"

namespace harmosc::report {

using json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "1.0";
inline constexpr const char* tool_name = "harmosc";
inline constexpr const char* tool_version = "0.1.0";

// One verified assertion: `pass` is residual <= tolerance with a finite
// residual. Non-finite residuals (divergence evidence) serialize as strings.
struct Check {
    std::string name;
    std::string paper_anchor;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline Check make_check(std::string name, std::string anchor, double residual,
                        double tolerance) {
    Check c;
    c.name = std::move(name);
    c.paper_anchor = std::move(anchor);
    c.residual = residual;
    c.tolerance = tolerance;
    c.pass = std::isfinite(residual) && residual <= tolerance;
    return c;
}

struct SuiteReport {
    std::string suite;
    std::string timestamp;  // ISO-8601 UTC; the only run-dependent field
    json config = json::object();
    std::vector<Check> checks;

    int failed() const {
        int n = 0;
        for (const auto& c : checks)
            if (!c.pass) ++n;
        return n;
    }
    bool pass() const { return failed() == 0; }
};

inline std::string iso_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
#if defined(_WIN32)
    gmtime_s(&tm, &now);
#else
    gmtime_r(&now, &tm);
#endif
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

// JSON cannot carry non-finite numbers; encode them as unambiguous strings.
inline json number_json(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

inline double number_from_json(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    const std::string s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

inline json to_json(const SuiteReport& r) {
    json out;
    out["schema_version"] = schema_version;
    out["tool"] = {{"name", tool_name}, {"version", tool_version}};
    out["suite"] = r.suite;
    out["timestamp"] = r.timestamp;
    out["config"] = r.config;
    json checks = json::array();
    for (const auto& c : r.checks) {
        json jc;
        jc["name"] = c.name;
        jc["paper_anchor"] = c.paper_anchor;
        jc["residual"] = number_json(c.residual);
        jc["tolerance"] = number_json(c.tolerance);
        jc["pass"] = c.pass;
        checks.push_back(std::move(jc));
    }
    out["checks"] = std::move(checks);
    out["summary"] = {{"total", static_cast<int>(r.checks.size())},
                      {"failed", r.failed()},
                      {"pass", r.pass()}};
    return out;
}

inline SuiteReport from_json(const json& j) {
    require(j.contains("schema_version") && j["schema_version"].is_string(),
            "report: missing schema_version");
    require(j["schema_version"].get<std::string>() == schema_version,
            "report: unsupported schema version");
    SuiteReport r;
    r.suite = j.at("suite").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.config = j.at("config");
    for (const auto& jc : j.at("checks")) {
        Check c;
        c.name = jc.at("name").get<std::string>();
        c.paper_anchor = jc.at("paper_anchor").get<std::string>();
        c.residual = number_from_json(jc.at("residual"));
        c.tolerance = number_from_json(jc.at("tolerance"));
        c.pass = jc.at("pass").get<bool>();
        r.checks.push_back(std::move(c));
    }
    return r;
}

inline std::string to_json_text(const SuiteReport& r) { return to_json(r).dump(2) + "\n"; }

inline std::string csv_escape(const std::string& s) {
    bool needs = s.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline std::string csv_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Flat per-check table; carries no timestamp, so CSV output is fully
// deterministic for identical config + seed.
inline std::string to_csv(const SuiteReport& r) {
    std::string out = "suite,check,paper_anchor,residual,tolerance,pass\n";
    for (const auto& c : r.checks) {
        out += csv_escape(r.suite);
        out += ',';
        out += csv_escape(c.name);
        out += ',';
        out += csv_escape(c.paper_anchor);
        out += ',';
        out += csv_number(c.residual);
        out += ',';
        out += csv_number(c.tolerance);
        out += ',';
        out += c.pass ? "true" : "false";
        out += '\n';
    }
    return out;
}

inline std::string render(const SuiteReport& r, const std::string& format) {
    require(format == "json" || format == "csv", "report: format must be json or csv");
    return format == "json" ? to_json_text(r) : to_csv(r);
}

// Byte-level report comparison ignoring the timestamp field. Non-JSON input
// (e.g. CSV) is compared byte-for-byte.
inline bool identical_modulo_timestamp(const std::string& a, const std::string& b) {
    json ja = json::parse(a, nullptr, false);
    json jb = json::parse(b, nullptr, false);
    if (ja.is_discarded() || jb.is_discarded()) return a == b;
    ja.erase("timestamp");
    jb.erase("timestamp");
    return ja.dump() == jb.dump();
}

}  // namespace harmosc::report
