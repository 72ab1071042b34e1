// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relaysim/config.hpp"
#include "relaysim/io.hpp"
#include "relaysim/montecarlo.hpp"
#include "relaysim/random.hpp"
#include "relaysim/version.hpp"

namespace relaysim {

/// One curve written by a sweep, with its per-stream fitted decay orders
/// (null when too few points qualify for the fit).
struct CurveRecord {
    std::string file;
    std::string strategy;
    std::string metric;
    std::vector<std::pair<std::string, std::optional<double>>> fitted_orders;
};

struct RunManifest {
    SweepConfig config;
    std::uint64_t master_seed = 0;
    std::string build;
    std::vector<CurveRecord> curves;
    double wall_ms = 0.0;
};

inline nlohmann::json manifest_to_json(const RunManifest& m) {
    nlohmann::json j;
    j["schema"] = "relay-sim-manifest-v1";
    j["snr_axis"] = "snr_db = 10*log10(P); P is the per-transmitter power (per-node model) or the "
                    "network budget (total model); per-stage noise power is 1";
    j["config_echo"] = config_to_json(m.config);
    j["master_seed"] = m.master_seed;
    j["build"] = m.build;
    j["wall_ms"] = m.wall_ms;
    j["curves"] = nlohmann::json::array();
    for (const CurveRecord& c : m.curves) {
        nlohmann::json jc;
        jc["file"] = c.file;
        jc["strategy"] = c.strategy;
        jc["metric"] = c.metric;
        for (const auto& [stream, order] : c.fitted_orders) {
            if (order.has_value())
                jc["fitted_orders"][stream] = *order;
            else
                jc["fitted_orders"][stream] = nullptr;
        }
        j["curves"].push_back(jc);
    }
    return j;
}

namespace detail {

/// Decorrelated per-curve seed; curve index, not execution order, determines
/// it, so adding curves never perturbs earlier ones.
inline std::uint64_t curve_seed(std::uint64_t master_seed, std::size_t curve_index) {
    return mix64(master_seed ^ mix64(static_cast<std::uint64_t>(curve_index) + 1));
}

inline std::vector<std::pair<std::string, std::optional<double>>> fit_streams(const SimCurve& curve) {
    std::vector<std::pair<std::string, std::optional<double>>> fits;
    for (const StreamSeries& s : curve.streams) {
        std::optional<double> order;
        try {
            order = fit_diversity_order(s.points).order;
        } catch (const InsufficientDataError&) {
        }
        fits.emplace_back(s.stream, order);
    }
    return fits;
}

}  // namespace detail

/// Run every (strategy x metric) combination of the config and write one CSV
/// per curve plus manifest.json into out_dir. Throws on unsupported
/// combinations; nothing is retried or skipped silently.
inline RunManifest run_sweep(const SweepConfig& config, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output dir '" + out_dir.string() + "': " + ec.message());

    const auto t0 = std::chrono::steady_clock::now();
    RunManifest manifest;
    manifest.config = config;
    manifest.master_seed = config.seed;
    manifest.build = build_id();

    const std::vector<double> grid = config.snr_grid();
    std::size_t curve_index = 0;
    for (StrategyKind kind : config.strategies) {
        for (Metric metric : config.metrics) {
            const StrategySpec spec = config.spec_for(kind);
            const std::uint64_t seed = detail::curve_seed(config.seed, curve_index);
            ++curve_index;
            SimCurve curve;
            if (metric == Metric::Outage) {
                curve = estimate_outage(config.topology, spec, config.rate_bits, grid, config.trials, seed,
                                        config.workers, config.multiplexing_gain);
            } else {
                curve = estimate_ber(config.topology, spec, grid, config.symbols_per_trial, config.trials, seed,
                                     config.workers);
            }
            CurveRecord record;
            record.strategy = spec.label();
            record.metric = to_string(metric);
            record.file = record.strategy + "-" + record.metric + ".csv";
            record.fitted_orders = detail::fit_streams(curve);
            write_curve_csv(curve, out_dir / record.file);
            manifest.curves.push_back(std::move(record));
        }
    }
    manifest.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    write_file(out_dir / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
    return manifest;
}

inline RunManifest run_sweep(const std::filesystem::path& config_path, const std::filesystem::path& out_dir) {
    return run_sweep(load_config(config_path), out_dir);
}

}  // namespace relaysim
