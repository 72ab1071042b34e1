// SPDX-License-Identifier: Apache-2.0
//
// relay-sim: batch front-end. Runs the sweeps described by a JSON config
// (command-line flags override config fields) or the built-in verification
// suites. Every batch run needs an explicit seed; results replay bit-exactly
// from the manifest written next to the curves.

#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "relaysim/config.hpp"
#include "relaysim/errors.hpp"
#include "relaysim/io.hpp"
#include "relaysim/sweep.hpp"
#include "relaysim/verify.hpp"
#include "relaysim/version.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::string out_dir;
    std::string strategy;
    std::string power_model;
    std::string search;
    std::string verify_level;
    std::uint64_t seed = 0;
    bool have_seed = false;
    double snr_start = 0.0, snr_stop = 0.0, snr_step = 0.0;
    bool have_start = false, have_stop = false, have_step = false;
    std::uint64_t trials = 0;
    bool have_trials = false;
    int workers = 0;
    bool have_workers = false;
};

int run_batch(const Overrides& o) {
    if (o.config_path.empty()) {
        std::fprintf(stderr, "relay-sim: error: --config is required unless --verify is given\n");
        return 2;
    }
    if (o.out_dir.empty()) {
        std::fprintf(stderr, "relay-sim: error: --out is required unless --verify is given\n");
        return 2;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(relaysim::read_file(o.config_path));
    } catch (const nlohmann::json::exception& e) {
        throw relaysim::ConfigError("cannot parse '" + o.config_path + "': " + e.what());
    }
    if (j.contains("config_echo")) j = j.at("config_echo");  // manifests replay their own run

    // Flags take precedence over config fields.
    if (o.have_seed) j["seed"] = o.seed;
    if (!o.strategy.empty()) j["strategies"] = std::vector<std::string>{o.strategy};
    if (!o.power_model.empty()) j["power_model"] = o.power_model;
    if (!o.search.empty()) j["search"] = o.search;
    if (o.have_start) j["snr"]["start"] = o.snr_start;
    if (o.have_stop) j["snr"]["stop"] = o.snr_stop;
    if (o.have_step) j["snr"]["step"] = o.snr_step;
    if (o.have_trials) j["trials"] = o.trials;
    if (o.have_workers) j["workers"] = o.workers;

    const relaysim::SweepConfig cfg = relaysim::config_from_json(j);
    const relaysim::RunManifest manifest = relaysim::run_sweep(cfg, o.out_dir);
    for (const relaysim::CurveRecord& c : manifest.curves)
        std::printf("wrote %s\n", (std::filesystem::path(o.out_dir) / c.file).string().c_str());
    std::printf("wrote %s (%zu curves, %.1f s)\n",
                (std::filesystem::path(o.out_dir) / "manifest.json").string().c_str(), manifest.curves.size(),
                manifest.wall_ms / 1000.0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo sweeps for multi-hop relay channels with end-to-end antenna selection"};
    app.set_version_flag("--version", relaysim::kVersion);

    Overrides o;
    app.add_option("--config", o.config_path, "JSON sweep config (or a manifest.json to replay)");
    app.add_option("--out", o.out_dir, "output directory for CSV curves and manifest.json");
    app.add_option("--seed", o.seed, "master seed; overrides the config (never seeded from the clock)");
    app.add_option("--strategy", o.strategy, "run a single strategy instead of the config list")
        ->check(CLI::IsMember({"fd-af", "fd-df", "hd", "two-way", "fixed", "dstbc"}));
    app.add_option("--power-model", o.power_model, "per-node: each transmitter spends P; total: P split over hops")
        ->check(CLI::IsMember({"per-node", "total"}));
    app.add_option("--search", o.search, "candidate paths: all, or the edge-disjoint independent set")
        ->check(CLI::IsMember({"all", "independent"}));
    app.add_option("--snr-start", o.snr_start, "grid start, dB");
    app.add_option("--snr-stop", o.snr_stop, "grid stop, dB");
    app.add_option("--snr-step", o.snr_step, "grid step, dB");
    app.add_option("--trials", o.trials, "trials per grid point");
    app.add_option("--workers", o.workers, "worker threads (never changes results)");
    app.add_option("--verify", o.verify_level, "run the built-in checks and exit")
        ->check(CLI::IsMember({"fast", "full"}));

    CLI11_PARSE(app, argc, argv);
    o.have_seed = app.count("--seed") > 0;
    o.have_start = app.count("--snr-start") > 0;
    o.have_stop = app.count("--snr-stop") > 0;
    o.have_step = app.count("--snr-step") > 0;
    o.have_trials = app.count("--trials") > 0;
    o.have_workers = app.count("--workers") > 0;

    try {
        if (!o.verify_level.empty()) {
            const relaysim::VerifyReport report =
                o.verify_level == "fast" ? relaysim::run_fast_checks() : relaysim::run_full_checks();
            relaysim::print_report(report, stdout);
            return report.all_passed() ? 0 : 1;
        }
        return run_batch(o);
    } catch (const relaysim::Error& e) {
        std::fprintf(stderr, "relay-sim: error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "relay-sim: error: %s\n", e.what());
        return 2;
    }
}
