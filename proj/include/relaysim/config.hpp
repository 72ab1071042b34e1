// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "relaysim/errors.hpp"
#include "relaysim/io.hpp"
#include "relaysim/montecarlo.hpp"
#include "relaysim/strategies.hpp"
#include "relaysim/topology.hpp"

namespace relaysim {

/// One sweep request: every listed strategy is run against every listed
/// metric over a shared SNR grid. The seed is mandatory; runs must be
/// replayable from their manifest alone.
struct SweepConfig {
    Topology topology = Topology::validate({2, {1, 1, 1}, {}});
    std::vector<Metric> metrics{Metric::Outage};
    std::vector<StrategyKind> strategies{StrategyKind::FdAf};
    double snr_start = 10.0;
    double snr_stop = 30.0;
    double snr_step = 2.0;
    std::uint64_t trials = 100000;
    int symbols_per_trial = 2;
    double rate_bits = 1.0;
    double multiplexing_gain = 0.0;
    PowerModel power_model = PowerModel::PerNode;
    SearchSpace search = SearchSpace::All;
    std::uint64_t seed = 0;
    int workers = 1;

    std::vector<double> snr_grid() const { return make_snr_grid(snr_start, snr_stop, snr_step); }

    StrategySpec spec_for(StrategyKind kind) const { return StrategySpec{kind, search, power_model}; }
};

namespace detail {

template <typename T>
inline T get_field(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

}  // namespace detail

/// Parse a config object. Accepts either a bare config or a run manifest
/// (whose config_echo is then used), so a manifest replays its own run.
inline SweepConfig config_from_json(const nlohmann::json& root) {
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    const nlohmann::json& j = root.contains("config_echo") ? root.at("config_echo") : root;
    if (!j.is_object()) throw ConfigError("config_echo must be a JSON object");

    SweepConfig cfg;
    if (!j.contains("topology")) throw ConfigError("missing 'topology'");
    {
        const nlohmann::json& t = j.at("topology");
        TopologyConfig raw;
        raw.hops = detail::get_field<int>(t, "hops", 0);
        raw.stage_antennas = detail::get_field<std::vector<int>>(t, "stage_antennas", {});
        if (t.contains("relay_partitions"))
            raw.relay_partitions = detail::get_field<std::vector<std::vector<int>>>(t, "relay_partitions", {});
        cfg.topology = Topology::validate(raw);
    }

    cfg.metrics.clear();
    for (const std::string& name : detail::get_field<std::vector<std::string>>(j, "metrics", {"outage"}))
        cfg.metrics.push_back(metric_from_string(name));
    if (cfg.metrics.empty()) throw ConfigError("'metrics' must not be empty");

    cfg.strategies.clear();
    for (const std::string& name : detail::get_field<std::vector<std::string>>(j, "strategies", {"fd-af"}))
        cfg.strategies.push_back(strategy_kind_from_string(name));
    if (cfg.strategies.empty()) throw ConfigError("'strategies' must not be empty");

    if (j.contains("snr")) {
        const nlohmann::json& s = j.at("snr");
        cfg.snr_start = detail::get_field<double>(s, "start", cfg.snr_start);
        cfg.snr_stop = detail::get_field<double>(s, "stop", cfg.snr_stop);
        cfg.snr_step = detail::get_field<double>(s, "step", cfg.snr_step);
    }
    cfg.trials = detail::get_field<std::uint64_t>(j, "trials", cfg.trials);
    cfg.symbols_per_trial = detail::get_field<int>(j, "symbols_per_trial", cfg.symbols_per_trial);
    cfg.rate_bits = detail::get_field<double>(j, "rate_bits", cfg.rate_bits);
    cfg.multiplexing_gain = detail::get_field<double>(j, "multiplexing_gain", cfg.multiplexing_gain);
    cfg.power_model = power_model_from_string(detail::get_field<std::string>(j, "power_model", "per-node"));
    cfg.search = search_space_from_string(detail::get_field<std::string>(j, "search", "all"));
    cfg.workers = detail::get_field<int>(j, "workers", cfg.workers);

    if (!j.contains("seed"))
        throw ConfigError("missing 'seed': runs must be explicitly seeded to stay reproducible");
    cfg.seed = detail::get_field<std::uint64_t>(j, "seed", 0);

    if (cfg.trials == 0) throw ConfigError("'trials' must be >= 1");
    if (cfg.symbols_per_trial < 1) throw ConfigError("'symbols_per_trial' must be >= 1");
    if (cfg.workers < 1) throw ConfigError("'workers' must be >= 1");
    make_snr_grid(cfg.snr_start, cfg.snr_stop, cfg.snr_step);  // validates the grid shape
    return cfg;
}

/// Exact JSON echo of a config; config_from_json(config_to_json(c)) == c.
inline nlohmann::json config_to_json(const SweepConfig& cfg) {
    nlohmann::json j;
    j["topology"]["hops"] = cfg.topology.hop_count();
    j["topology"]["stage_antennas"] = cfg.topology.stage_antennas();
    j["topology"]["relay_partitions"] = cfg.topology.relay_partitions();
    std::vector<std::string> metrics;
    for (Metric m : cfg.metrics) metrics.push_back(to_string(m));
    j["metrics"] = metrics;
    std::vector<std::string> strategies;
    for (StrategyKind k : cfg.strategies) strategies.push_back(to_string(k));
    j["strategies"] = strategies;
    j["snr"]["start"] = cfg.snr_start;
    j["snr"]["stop"] = cfg.snr_stop;
    j["snr"]["step"] = cfg.snr_step;
    j["trials"] = cfg.trials;
    j["symbols_per_trial"] = cfg.symbols_per_trial;
    j["rate_bits"] = cfg.rate_bits;
    j["multiplexing_gain"] = cfg.multiplexing_gain;
    j["power_model"] = to_string(cfg.power_model);
    j["search"] = to_string(cfg.search);
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    return j;
}

inline SweepConfig load_config(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse '" + path.string() + "': " + e.what());
    }
    return config_from_json(j);
}

}  // namespace relaysim
