#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "gftlab/errors.hpp"

// Per-check result rows plus CSV/JSON serialization. Reports are the CLI's
// only output: one row per checked claim, with the measured statistic, the
// bound it is compared against, the Monte Carlo standard error (0 for exact
// computations), and the verdict.

namespace gftlab {

struct ReportRow {
    std::string claim_id;
    std::string paper_anchor;  // human-readable statement of the claim being checked
    double measured = 0.0;
    double bound = 0.0;
    double std_error = 0.0;
    bool pass = false;
};

struct Report {
    std::string suite;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    double wall_time_seconds = 0.0;  // excluded from determinism comparisons
    std::vector<ReportRow> rows;

    bool all_pass() const {
        for (const auto& row : rows)
            if (!row.pass) return false;
        return true;
    }
};

// 17 significant digits: enough to round-trip an IEEE double exactly.
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline std::string to_csv(const Report& report) {
    std::string out = "claim_id,paper_anchor,measured,bound,stderr,pass\n";
    for (const auto& row : report.rows) {
        out += csv_escape(row.claim_id);
        out += ',';
        out += csv_escape(row.paper_anchor);
        out += ',';
        out += format_double(row.measured);
        out += ',';
        out += format_double(row.bound);
        out += ',';
        out += format_double(row.std_error);
        out += ',';
        out += row.pass ? "true" : "false";
        out += '\n';
    }
    return out;
}

inline nlohmann::json to_json(const Report& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"claim_id", row.claim_id},
                        {"paper_anchor", row.paper_anchor},
                        {"measured", row.measured},
                        {"bound", row.bound},
                        {"stderr", row.std_error},
                        {"pass", row.pass}});
    }
    return nlohmann::json{{"suite", report.suite},
                          {"metadata",
                           {{"seed", report.seed},
                            {"trials", report.trials},
                            {"wall_time_seconds", report.wall_time_seconds}}},
                          {"rows", rows}};
}

inline Report report_from_json(const nlohmann::json& j) {
    try {
        Report report;
        report.suite = j.at("suite").get<std::string>();
        const auto& meta = j.at("metadata");
        report.seed = meta.at("seed").get<std::uint64_t>();
        report.trials = meta.at("trials").get<std::uint64_t>();
        report.wall_time_seconds = meta.at("wall_time_seconds").get<double>();
        for (const auto& r : j.at("rows")) {
            ReportRow row;
            row.claim_id = r.at("claim_id").get<std::string>();
            row.paper_anchor = r.at("paper_anchor").get<std::string>();
            row.measured = r.at("measured").get<double>();
            row.bound = r.at("bound").get<double>();
            row.std_error = r.at("stderr").get<double>();
            row.pass = r.at("pass").get<bool>();
            report.rows.push_back(std::move(row));
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed report JSON: ") + e.what());
    }
}

}  // namespace gftlab
