#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "routesim/error.hpp"
#include "routesim/simkernel.hpp"

namespace routesim {

// One exported measurement. seed holds an integer for raw rows and
// "mean"/"std" in summary rows; avg_delivery_ms is empty for windows with no
// deliveries.
struct ResultRow {
    std::string scenario;
    std::string policy;
    std::string seed;
    std::string axis_name;
    double axis_value = 0.0;
    double window_start_ms = 0.0;
    double window_end_ms = 0.0;
    std::optional<double> avg_delivery_ms;
};

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw Error("number formatting failed");
    return std::string(buf, ptr);
}

inline const char* result_csv_header() {
    return "scenario,policy,seed,axis_name,axis_value,window_start_ms,window_end_ms,"
           "avg_delivery_ms";
}

inline std::string to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << result_csv_header() << "\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.policy << ',' << r.seed << ',' << r.axis_name << ','
            << format_double(r.axis_value) << ',' << format_double(r.window_start_ms) << ','
            << format_double(r.window_end_ms) << ','
            << (r.avg_delivery_ms ? format_double(*r.avg_delivery_ms) : "") << "\n";
    }
    return out.str();
}

inline nlohmann::json to_json(const std::vector<ResultRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j;
        j["scenario"] = r.scenario;
        j["policy"] = r.policy;
        j["seed"] = r.seed;
        j["axis_name"] = r.axis_name;
        j["axis_value"] = r.axis_value;
        j["window_start_ms"] = r.window_start_ms;
        j["window_end_ms"] = r.window_end_ms;
        if (r.avg_delivery_ms)
            j["avg_delivery_ms"] = *r.avg_delivery_ms;
        else
            j["avg_delivery_ms"] = nullptr;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

inline void export_rows(const std::vector<ResultRow>& rows, const std::string& path,
                        const std::string& format) {
    if (rows.empty()) throw Error("nothing to export");
    if (format == "csv")
        write_file(path, to_csv(rows));
    else if (format == "json")
        write_file(path, to_json(rows).dump(2) + "\n");
    else
        throw ParseError("unknown export format: " + format);
}

// Inverse of to_csv, for round-trip checks and downstream tooling.
inline std::vector<ResultRow> parse_result_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != result_csv_header())
        throw ParseError("bad result csv header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        while (f.size() < 8) f.push_back("");
        ResultRow r;
        r.scenario = f[0];
        r.policy = f[1];
        r.seed = f[2];
        r.axis_name = f[3];
        r.axis_value = std::stod(f[4]);
        r.window_start_ms = std::stod(f[5]);
        r.window_end_ms = std::stod(f[6]);
        if (!f[7].empty()) r.avg_delivery_ms = std::stod(f[7]);
        rows.push_back(std::move(r));
    }
    return rows;
}

// mean/std rows per (scenario, policy, axis, window) group across integer
// seeds, appended in first-seen group order.
inline std::vector<ResultRow> summary_rows(const std::vector<ResultRow>& rows) {
    std::vector<std::string> order;
    std::map<std::string, std::pair<ResultRow, std::vector<double>>> groups;
    for (const auto& r : rows) {
        if (r.seed == "mean" || r.seed == "std") continue;
        if (!r.avg_delivery_ms) continue;
        std::string key = r.scenario + "|" + r.policy + "|" + r.axis_name + "|" +
                          format_double(r.axis_value) + "|" + format_double(r.window_start_ms) +
                          "|" + format_double(r.window_end_ms);
        auto [it, inserted] = groups.try_emplace(key, std::make_pair(r, std::vector<double>{}));
        if (inserted) order.push_back(key);
        it->second.second.push_back(*r.avg_delivery_ms);
    }
    std::vector<ResultRow> out;
    for (const auto& key : order) {
        const auto& [proto, vals] = groups.at(key);
        MeanStd ms = mean_std(vals);
        ResultRow mean = proto;
        mean.seed = "mean";
        mean.avg_delivery_ms = ms.mean;
        out.push_back(mean);
        ResultRow sd = proto;
        sd.seed = "std";
        sd.avg_delivery_ms = ms.std;  // empty ("n/a") with a single seed
        out.push_back(sd);
    }
    return out;
}

inline std::string trace_to_csv(const std::vector<TraceEvent>& trace) {
    std::ostringstream out;
    out << "time_ms,event,packet_id,node,next_node,q_ms\n";
    for (const auto& e : trace)
        out << format_double(e.time_ms) << ',' << e.event << ',' << e.packet_id << ',' << e.node
            << ',' << e.next_node << ',' << format_double(e.q_ms) << "\n";
    return out.str();
}

}  // namespace routesim
