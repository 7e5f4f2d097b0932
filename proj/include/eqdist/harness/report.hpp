#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace eqdist::harness {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form, so reports are byte-stable.
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ExperimentReport {
    json meta = json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    json summary = json::object();
    int assertionFailures = 0;

    void add_row(std::vector<std::string> r) {
        if (r.size() != columns.size()) throw std::logic_error("report row width mismatch");
        rows.push_back(std::move(r));
    }
};

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string to_csv(const ExperimentReport& r) {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& v) {
        for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << csv_field(v[k]);
        os << "\r\n";
    };
    line(r.columns);
    for (const auto& row : r.rows) line(row);
    return os.str();
}

inline json to_json(const ExperimentReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json o = json::object();
        for (std::size_t k = 0; k < row.size(); ++k) o[r.columns[k]] = row[k];
        rows.push_back(std::move(o));
    }
    json summary = r.summary;
    summary["assertionFailures"] = r.assertionFailures;
    return json{{"meta", r.meta}, {"rows", rows}, {"summary", summary}};
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Writes JSON for *.json paths and CSV otherwise.
inline void write_report(const ExperimentReport& r, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    if (ends_with(path, ".json")) f << to_json(r).dump(2) << "\n";
    else f << to_csv(r);
}

}  // namespace eqdist::harness
