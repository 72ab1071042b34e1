// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "relaysim/errors.hpp"
#include "relaysim/montecarlo.hpp"

namespace relaysim {

inline constexpr const char* kCsvHeader = "snr_db,metric,strategy,estimate,trials,events,ci_low,ci_high,stream";

/// Shortest round-trippable decimal form, so files are stable across reruns
/// and faithful to the computed doubles.
inline std::string format_double(double value) {
    char buf[40];
    if (value == static_cast<std::int64_t>(value) && std::abs(value) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(value));
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    double parsed = 0.0;
    for (int precision = 1; precision <= 16; ++precision) {
        char trial[40];
        std::snprintf(trial, sizeof(trial), "%.*g", precision, value);
        std::sscanf(trial, "%lf", &parsed);
        if (parsed == value) return trial;
    }
    return buf;
}

inline std::string curve_to_csv(const SimCurve& curve) {
    std::string out = kCsvHeader;
    out += '\n';
    const std::string metric = to_string(curve.metric);
    const std::string strategy = curve.strategy.label();
    for (const StreamSeries& series : curve.streams) {
        for (const CurvePoint& pt : series.points) {
            out += format_double(pt.snr_db);
            out += ',';
            out += metric;
            out += ',';
            out += strategy;
            out += ',';
            out += format_double(pt.estimate);
            out += ',';
            out += std::to_string(pt.trials);
            out += ',';
            out += std::to_string(pt.events);
            out += ',';
            out += format_double(pt.ci_low);
            out += ',';
            out += format_double(pt.ci_high);
            out += ',';
            out += series.stream;
            out += '\n';
        }
    }
    return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) throw IoError("short write to '" + path.string() + "'");
}

inline void write_curve_csv(const SimCurve& curve, const std::filesystem::path& path) {
    write_file(path, curve_to_csv(curve));
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "'");
    std::string contents((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return contents;
}

}  // namespace relaysim
