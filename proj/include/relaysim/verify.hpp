// SPDX-License-Identifier: Apache-2.0
//
// Built-in verification suites. The fast suite cross-checks the path
// combinatorics against independent oracles in seconds; the full suite adds
// the Monte Carlo checks, each pinned to a fixed seed, grid, and trial
// budget so a pass or fail reproduces exactly. Expected runtime for the
// full suite is a few minutes on one core.

#pragma once

#include <chrono>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/config.hpp"
#include "relaysim/io.hpp"
#include "relaysim/montecarlo.hpp"
#include "relaysim/paths.hpp"
#include "relaysim/strategies.hpp"
#include "relaysim/sweep.hpp"
#include "relaysim/topology.hpp"

namespace relaysim {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_passed() const {
        for (const CheckResult& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

namespace detail {

/// Seed shared by every pinned verification sweep.
constexpr std::uint64_t kVerifySeed = 20260825;

inline int verify_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

inline std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

template <typename Body>
inline CheckResult timed_check(const std::string& name, Body&& body) {
    CheckResult result;
    result.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(result);
    } catch (const std::exception& e) {
        result.passed = false;
        result.detail = std::string("exception: ") + e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace detail

/// Independent-path combinatorics: on random topologies the constructed
/// edge-disjoint set must reach the min-cut size alpha, agree with the
/// max-flow oracle, and actually be edge-disjoint. Includes the 2-hop
/// all-twos channel with its 4 independent and 8 total paths.
inline CheckResult check_path_combinatorics() {
    return detail::timed_check("independent-path combinatorics", [](CheckResult& r) {
        std::mt19937_64 rng(7);
        int cases = 0;
        for (int i = 0; i < 240; ++i) {
            const int hops = 2 + static_cast<int>(rng() % 4);
            std::vector<int> antennas;
            for (int s = 0; s <= hops; ++s) antennas.push_back(1 + static_cast<int>(rng() % 4));
            const Topology topo = Topology::validate({hops, antennas, {}});
            const int a = alpha(topo);
            const int flow = max_flow_alpha_oracle(topo);
            const std::vector<Path> set = construct_independent_set(topo);
            if (flow != a || static_cast<int>(set.size()) != a || !verify_edge_disjoint(set)) {
                r.detail = detail::fmt("disagreement on %s: alpha=%d max-flow=%d constructed=%zu disjoint=%d",
                                       topo.summary().c_str(), a, flow, set.size(), int(verify_edge_disjoint(set)));
                return;
            }
            ++cases;
        }
        const Topology two_by_two = Topology::validate({2, {2, 2, 2}, {}});
        if (alpha(two_by_two) != 4 || two_by_two.path_count() != 8 ||
            construct_independent_set(two_by_two).size() != 4) {
            r.detail = "the 2-hop all-twos channel must have 4 independent of 8 total paths";
            return;
        }
        r.passed = true;
        r.detail = detail::fmt("%d random topologies + the 2-hop all-twos instance agree with the oracles", cases);
    });
}

/// Full-duplex diversity order on the 1-2-1 channel: deep-window outage
/// slope within 2.0 +- 0.3.
inline CheckResult check_fd_diversity_order() {
    return detail::timed_check("fd diversity order (M=1,2,1)", [](CheckResult& r) {
        const Topology topo = Topology::validate({2, {1, 2, 1}, {}});
        const StrategySpec spec{StrategyKind::FdAf, SearchSpace::All, PowerModel::PerNode};
        const SimCurve curve = estimate_outage(topo, spec, 1.0, {30, 32, 34, 36, 38}, 400000000ull,
                                               detail::kVerifySeed, detail::verify_workers());
        const SlopeFit fit = fit_diversity_order(curve.all_points());
        r.passed = fit.order >= 1.7 && fit.order <= 2.3;
        r.detail = detail::fmt("fitted order %.4f (stderr %.4f, %d points over %.0f..%.0f dB), bound [1.70, 2.30]",
                               fit.order, fit.stderr_, fit.points_used, fit.window_lo_db, fit.window_hi_db);
    });
}

/// Selection vs fixed path on the 2-2-2 channel: the fixed path decays with
/// order about 1 while selection exceeds 2.5 in the measurable window.
inline CheckResult check_selection_vs_fixed() {
    return detail::timed_check("selection vs fixed path (M=2,2,2)", [](CheckResult& r) {
        const Topology topo = Topology::validate({2, {2, 2, 2}, {}});
        const StrategySpec fd{StrategyKind::FdAf, SearchSpace::All, PowerModel::PerNode};
        const StrategySpec fixed{StrategyKind::Fixed, SearchSpace::All, PowerModel::PerNode};
        const SimCurve fd_curve = estimate_outage(topo, fd, 1.0, {10, 12, 14, 16, 18}, 100000000ull,
                                                  detail::kVerifySeed, detail::verify_workers());
        const SimCurve fx_curve = estimate_outage(topo, fixed, 1.0, {28, 31, 34, 37, 40, 43, 46}, 20000000ull,
                                                  detail::kVerifySeed, detail::verify_workers());
        const SlopeFit fd_fit = fit_diversity_order(fd_curve.all_points());
        const SlopeFit fx_fit = fit_diversity_order(fx_curve.all_points());
        const bool fixed_ok = fx_fit.order >= 0.8 && fx_fit.order <= 1.2;
        const bool fd_ok = fd_fit.order >= 2.5;
        r.passed = fixed_ok && fd_ok;
        r.detail = detail::fmt("fixed order %.4f bound [0.80, 1.20]; selection order %.4f bound [2.50, inf)",
                               fx_fit.order, fd_fit.order);
    });
}

/// Half-duplex on the 2-2-2 channel: aggregate outage order near the
/// disjoint-pair ceiling of 1, and exactly twice the delivered symbols per
/// slot of full-duplex operation run on a half-duplex schedule.
inline CheckResult check_hd_order_and_throughput() {
    return detail::timed_check("hd order and throughput (M=2,2,2)", [](CheckResult& r) {
        const Topology topo = Topology::validate({2, {2, 2, 2}, {}});
        const StrategySpec hd{StrategyKind::Hd, SearchSpace::All, PowerModel::PerNode};
        const SimCurve curve = estimate_outage(topo, hd, 1.0, {32, 35, 38, 41, 44}, 20000000ull,
                                               detail::kVerifySeed, detail::verify_workers());
        const SlopeFit fit = fit_diversity_order(curve.stream("all").points);
        const bool slope_ok = fit.order >= 0.7 && fit.order <= 1.3;
        const std::uint64_t slots = 1000;
        const std::uint64_t hd_symbols = hd_symbols_delivered(slots);
        const std::uint64_t fd_symbols = fd_in_hd_symbols_delivered(slots);
        const bool throughput_ok = hd_symbols == slots && fd_symbols == slots / 2 && hd_symbols == 2 * fd_symbols;
        r.passed = slope_ok && throughput_ok;
        r.detail = detail::fmt("aggregate order %.4f bound [0.70, 1.30]; %llu vs %llu symbols per %llu slots",
                               fit.order, static_cast<unsigned long long>(hd_symbols),
                               static_cast<unsigned long long>(fd_symbols), static_cast<unsigned long long>(slots));
    });
}

/// Selection against the two-relay space-time baseline on the 1-2-1 channel
/// under a total power budget: selection reaches bit error rate 1e-3 with
/// 2 +- 1 dB less power, and both curves keep a deep-window order of
/// 2.0 +- 0.4.
inline CheckResult check_selection_vs_stbc() {
    return detail::timed_check("selection vs space-time baseline (M=1,2,1)", [](CheckResult& r) {
        const Topology topo = Topology::validate({2, {1, 2, 1}, {}});
        const StrategySpec af{StrategyKind::FdAf, SearchSpace::All, PowerModel::Total};
        const StrategySpec stbc{StrategyKind::Dstbc, SearchSpace::All, PowerModel::Total};
        const std::vector<double> grid{24, 28, 32, 36, 40};
        const SimCurve af_curve =
            estimate_ber(topo, af, grid, 2, 4000000ull, detail::kVerifySeed, detail::verify_workers());
        const SimCurve stbc_curve =
            estimate_ber(topo, stbc, grid, 2, 4000000ull, detail::kVerifySeed, detail::verify_workers());
        const double af_cross = crossing_snr_db(af_curve.all_points(), 1e-3);
        const double stbc_cross = crossing_snr_db(stbc_curve.all_points(), 1e-3);
        const double gap_db = stbc_cross - af_cross;
        FitOptions deep;
        deep.estimate_hi = 1e-3;  // fit below the waterfall knee
        const SlopeFit af_fit = fit_diversity_order(af_curve.all_points(), deep);
        const SlopeFit stbc_fit = fit_diversity_order(stbc_curve.all_points(), deep);
        const bool gap_ok = gap_db >= 1.0 && gap_db <= 3.0;
        const bool slopes_ok =
            af_fit.order >= 1.6 && af_fit.order <= 2.4 && stbc_fit.order >= 1.6 && stbc_fit.order <= 2.4;
        r.passed = gap_ok && slopes_ok;
        r.detail = detail::fmt("power gap %.2f dB at ber 1e-3 bound [1.00, 3.00]; orders %.4f / %.4f bound "
                               "[1.60, 2.40]",
                               gap_db, af_fit.order, stbc_fit.order);
    });
}

/// Two-way operation on the 1-2-1 channel: the two directions must agree
/// (overlapping intervals and mirror-image selections) and each direction's
/// deep-window order must be within 2.0 +- 0.3.
inline CheckResult check_two_way_symmetry() {
    return detail::timed_check("two-way direction symmetry (M=1,2,1)", [](CheckResult& r) {
        const Topology topo = Topology::validate({2, {1, 2, 1}, {}});
        const StrategySpec spec{StrategyKind::TwoWay, SearchSpace::All, PowerModel::PerNode};
        const SimCurve curve = estimate_ber(topo, spec, {26, 30, 34, 38, 42}, 2, 8000000ull, detail::kVerifySeed,
                                            detail::verify_workers());
        const std::vector<CurvePoint>& fw = curve.stream("t1-to-t2").points;
        const std::vector<CurvePoint>& bw = curve.stream("t2-to-t1").points;

        bool overlap_ok = true;
        for (std::size_t i = 0; i < fw.size(); ++i)
            if (fw[i].ci_low > bw[i].ci_high || bw[i].ci_low > fw[i].ci_high) overlap_ok = false;

        FitOptions deep;
        deep.estimate_hi = 2.5e-4;  // deepest window the budget supports
        const SlopeFit fw_fit = fit_diversity_order(fw, deep);
        const SlopeFit bw_fit = fit_diversity_order(bw, deep);
        const bool slopes_ok =
            fw_fit.order >= 1.7 && fw_fit.order <= 2.3 && bw_fit.order >= 1.7 && bw_fit.order <= 2.3;

        // Selecting on the reciprocal gains must mirror the forward choice.
        bool mirror_ok = true;
        const std::vector<Path> candidates = candidate_paths(topo, SearchSpace::All);
        RandomStream stream(detail::kVerifySeed, 0x74776f77ull);
        ChannelRealization channel;
        for (int i = 0; i < 20000 && mirror_ok; ++i) {
            sample_realization_into(channel, topo, stream);
            const ChannelRealization reverse = reciprocal_view(channel);
            const Selection fwd = select_twoway(channel, candidates, 10.0, two_way_af_scales(2, 10.0));
            const Selection rev = select_twoway(reverse, candidates, 10.0, two_way_af_scales(2, 10.0));
            if (!(rev.primary == fwd.primary.reversed())) mirror_ok = false;
        }

        r.passed = overlap_ok && slopes_ok && mirror_ok;
        r.detail = detail::fmt("interval overlap %s; orders %.4f / %.4f bound [1.70, 2.30]; mirrored selection %s",
                               overlap_ok ? "at all 5 points" : "violated", fw_fit.order, bw_fit.order,
                               mirror_ok ? "on all 20000 draws" : "violated");
    });
}

/// Fixed-path outage on the 1-1-1 chain against a pregenerated brute-force
/// reference (tools/outage_reference.cpp, 1e7 samples per point): each
/// estimate within 3 interval half-widths of the reference.
inline CheckResult check_outage_reference() {
    return detail::timed_check("fixed-path outage reference (M=1,1,1)", [](CheckResult& r) {
        const Topology topo = Topology::validate({2, {1, 1, 1}, {}});
        const StrategySpec spec{StrategyKind::Fixed, SearchSpace::All, PowerModel::PerNode};
        const std::vector<double> grid{3, 6, 9, 12, 15};
        const double reference[] = {0.6536141, 0.4476405, 0.2890517, 0.1803625, 0.1092831};
        const SimCurve curve =
            estimate_outage(topo, spec, 1.0, grid, 1000000ull, detail::kVerifySeed, detail::verify_workers());
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const CurvePoint& pt = curve.all_points()[i];
            const double half_width = (pt.ci_high - pt.ci_low) / 2.0;
            const double deviation = std::abs(pt.estimate - reference[i]) / half_width;
            worst = std::max(worst, deviation);
        }
        r.passed = worst <= 3.0;
        r.detail = detail::fmt("worst deviation %.2f interval half-widths across 5 points, bound 3.00", worst);
    });
}

/// Determinism: one sweep config run with 1, 4, and 8 workers, then rerun,
/// must give byte-identical CSV files every time.
inline CheckResult check_worker_determinism() {
    return detail::timed_check("worker-count determinism", [](CheckResult& r) {
        namespace fs = std::filesystem;
        SweepConfig cfg;
        cfg.topology = Topology::validate({2, {1, 2, 1}, {}});
        cfg.metrics = {Metric::Outage, Metric::Ber};
        cfg.strategies = {StrategyKind::FdAf, StrategyKind::TwoWay};
        cfg.snr_start = 10.0;
        cfg.snr_stop = 20.0;
        cfg.snr_step = 5.0;
        cfg.trials = 200000;
        cfg.symbols_per_trial = 2;
        cfg.seed = 99;

        const fs::path base = fs::temp_directory_path() /
                              ("relay-sim-verify-" +
                               std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
        const int worker_counts[] = {1, 4, 8, 1};
        std::vector<std::string> dirs;
        for (std::size_t run = 0; run < 4; ++run) {
            cfg.workers = worker_counts[run];
            const fs::path out = base / ("run" + std::to_string(run));
            run_sweep(cfg, out);
            dirs.push_back(out.string());
        }
        bool identical = true;
        std::string mismatch;
        const std::vector<std::string> files = {"fd-af-outage.csv", "fd-af-ber.csv", "two-way-outage.csv",
                                                "two-way-ber.csv"};
        for (const std::string& file : files) {
            const std::string first = read_file(fs::path(dirs[0]) / file);
            for (std::size_t run = 1; run < dirs.size(); ++run) {
                if (read_file(fs::path(dirs[run]) / file) != first) {
                    identical = false;
                    mismatch = file + " differs between runs 0 and " + std::to_string(run);
                }
            }
        }
        std::error_code ec;
        fs::remove_all(base, ec);
        r.passed = identical;
        r.detail = identical ? "4 curve files byte-identical across workers 1, 4, 8 and a rerun"
                             : mismatch;
    });
}

inline VerifyReport run_fast_checks() {
    VerifyReport report;
    report.checks.push_back(check_path_combinatorics());
    return report;
}

inline VerifyReport run_full_checks() {
    VerifyReport report;
    report.checks.push_back(check_path_combinatorics());
    report.checks.push_back(check_fd_diversity_order());
    report.checks.push_back(check_selection_vs_fixed());
    report.checks.push_back(check_hd_order_and_throughput());
    report.checks.push_back(check_selection_vs_stbc());
    report.checks.push_back(check_two_way_symmetry());
    report.checks.push_back(check_outage_reference());
    report.checks.push_back(check_worker_determinism());
    return report;
}

inline void print_report(const VerifyReport& report, std::FILE* out) {
    for (const CheckResult& c : report.checks)
        std::fprintf(out, "[%s] %s: %s (%.1f s)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str(),
                     c.seconds);
    int passed = 0;
    for (const CheckResult& c : report.checks) passed += c.passed ? 1 : 0;
    std::fprintf(out, "%d/%zu checks passed\n", passed, report.checks.size());
}

}  // namespace relaysim
