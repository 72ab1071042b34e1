// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "relaysim/errors.hpp"
#include "relaysim/montecarlo.hpp"
#include "relaysim/random.hpp"
#include "relaysim/strategies.hpp"
#include "relaysim/topology.hpp"

using namespace relaysim;

namespace {

Topology topo(std::vector<int> antennas) {
    TopologyConfig config;
    config.hops = static_cast<int>(antennas.size()) - 1;
    config.stage_antennas = std::move(antennas);
    return Topology::validate(config);
}

StrategySpec spec(StrategyKind kind, PowerModel model = PowerModel::PerNode) {
    StrategySpec s;
    s.kind = kind;
    s.power_model = model;
    return s;
}

// Synthetic curve point with enough events to qualify for slope fitting.
CurvePoint synth_point(double snr_db, double estimate, std::uint64_t events = 1000) {
    CurvePoint p;
    p.snr_db = snr_db;
    p.estimate = estimate;
    p.events = events;
    p.trials = static_cast<std::uint64_t>(static_cast<double>(events) / estimate);
    return p;
}

bool same_counts(const SimCurve& a, const SimCurve& b) {
    if (a.streams.size() != b.streams.size()) return false;
    for (std::size_t s = 0; s < a.streams.size(); ++s) {
        if (a.streams[s].stream != b.streams[s].stream) return false;
        if (a.streams[s].points.size() != b.streams[s].points.size()) return false;
        for (std::size_t p = 0; p < a.streams[s].points.size(); ++p) {
            const CurvePoint& x = a.streams[s].points[p];
            const CurvePoint& y = b.streams[s].points[p];
            if (x.events != y.events || x.trials != y.trials || x.snr_db != y.snr_db) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("metric names round-trip") {
    CHECK(to_string(Metric::Outage) == "outage");
    CHECK(to_string(Metric::Ber) == "ber");
    CHECK(metric_from_string("outage") == Metric::Outage);
    CHECK(metric_from_string("ber") == Metric::Ber);
    CHECK_THROWS_AS(metric_from_string("fer"), ConfigError);
}

TEST_CASE("confidence intervals bound the estimate") {
    const auto empty = wilson_interval(0, 0);
    CHECK(empty.first == 0.0);
    CHECK(empty.second == 1.0);

    const auto none = wilson_interval(0, 1000);
    CHECK(none.first == 0.0);
    CHECK(none.second > 0.0);
    CHECK(none.second < 0.01);

    const auto full = wilson_interval(1000, 1000);
    CHECK(full.second == 1.0);
    CHECK(full.first > 0.99);

    const std::uint64_t cases[][2] = {{3, 10}, {50, 200}, {999, 1000}, {1, 100000}};
    for (const auto& c : cases) {
        const auto [lo, hi] = wilson_interval(c[0], c[1]);
        const double p = static_cast<double>(c[0]) / static_cast<double>(c[1]);
        CHECK(lo >= 0.0);
        CHECK(hi <= 1.0);
        CHECK(lo <= p);
        CHECK(p <= hi);
        CHECK(lo < hi);
    }
}

TEST_CASE("confidence interval coverage is near nominal") {
    const double p = 0.3;
    const std::uint64_t n = 200;
    RandomStream stream(2024, 0);
    int covered = 0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
        std::uint64_t events = 0;
        for (std::uint64_t i = 0; i < n; ++i)
            if (stream.uniform() < p) ++events;
        const auto [lo, hi] = wilson_interval(events, n);
        if (lo <= p && p <= hi) ++covered;
    }
    CHECK(covered >= 930);  // nominal 950 of 1000
}

TEST_CASE("snr grids include both endpoints") {
    const std::vector<double> grid = make_snr_grid(10.0, 30.0, 2.0);
    REQUIRE(grid.size() == 11);
    CHECK(grid.front() == 10.0);
    CHECK(grid.back() == 30.0);

    const std::vector<double> fractional = make_snr_grid(0.0, 1.0, 0.1);
    CHECK(fractional.size() == 11);
    CHECK(fractional.back() == Catch::Approx(1.0));

    const std::vector<double> single = make_snr_grid(5.0, 5.0, 1.0);
    REQUIRE(single.size() == 1);
    CHECK(single.front() == 5.0);

    CHECK_THROWS_AS(make_snr_grid(10.0, 20.0, 0.0), ConfigError);
    CHECK_THROWS_AS(make_snr_grid(10.0, 20.0, -1.0), ConfigError);
    CHECK_THROWS_AS(make_snr_grid(20.0, 10.0, 2.0), ConfigError);
}

TEST_CASE("slope fit recovers a synthetic decay exactly") {
    const double order = 1.2;
    std::vector<CurvePoint> points;
    for (double snr : {10.0, 15.0, 20.0, 25.0})
        points.push_back(synth_point(snr, std::pow(10.0, -2.0 - order * snr / 10.0)));

    const SlopeFit fit = fit_diversity_order(points);
    CHECK(fit.order == Catch::Approx(order).margin(1e-9));
    CHECK(fit.stderr_ == Catch::Approx(0.0).margin(1e-9));
    CHECK(fit.points_used == 4);
    CHECK(fit.window_lo_db == 10.0);
    CHECK(fit.window_hi_db == 25.0);
}

TEST_CASE("slope fit skips points that do not qualify") {
    const double order = 2.0;
    std::vector<CurvePoint> points;
    for (double snr : {10.0, 14.0, 18.0})
        points.push_back(synth_point(snr, std::pow(10.0, -2.1 - order * snr / 10.0)));

    points.push_back(synth_point(6.0, 0.5));              // estimate above the measurable band
    points.push_back(synth_point(22.0, 3e-4, 50));        // too few events
    points.push_back(synth_point(26.0, 5e-8));            // estimate below the measurable band

    const SlopeFit fit = fit_diversity_order(points);
    CHECK(fit.order == Catch::Approx(order).margin(1e-9));
    CHECK(fit.points_used == 3);
    CHECK(fit.window_lo_db == 10.0);
    CHECK(fit.window_hi_db == 18.0);

    FitOptions window;
    window.snr_db_lo = 14.0;
    CHECK_THROWS_AS(fit_diversity_order(points, window), InsufficientDataError);

    FitOptions loose;
    loose.min_events = 10;
    loose.estimate_lo = 1e-9;
    const SlopeFit wide = fit_diversity_order(points, loose);
    CHECK(wide.points_used == 5);

    std::vector<CurvePoint> sparse(points.begin(), points.begin() + 2);
    CHECK_THROWS_AS(fit_diversity_order(sparse), InsufficientDataError);
}

TEST_CASE("crossing interpolation is log-linear") {
    std::vector<CurvePoint> points;
    points.push_back(synth_point(10.0, 1e-2));
    points.push_back(synth_point(20.0, 1e-4));
    points.push_back(synth_point(30.0, 1e-6));

    CHECK(crossing_snr_db(points, 1e-3) == Catch::Approx(15.0));
    CHECK(crossing_snr_db(points, 1e-5) == Catch::Approx(25.0));
    CHECK(crossing_snr_db(points, 1e-2) == Catch::Approx(10.0));
    CHECK(crossing_snr_db(points, 1e-6) == Catch::Approx(30.0));

    CHECK_THROWS_AS(crossing_snr_db(points, 0.5), InsufficientDataError);
    CHECK_THROWS_AS(crossing_snr_db(points, 1e-9), InsufficientDataError);
    CHECK_THROWS_AS(crossing_snr_db(points, 0.0), ConfigError);
    CHECK_THROWS_AS(crossing_snr_db(points, -1.0), ConfigError);
}

TEST_CASE("outage runs are reproducible across worker counts") {
    const Topology topology = topo({1, 2, 1});
    const std::vector<double> grid = make_snr_grid(10.0, 20.0, 5.0);

    const SimCurve serial = estimate_outage(topology, spec(StrategyKind::FdAf), 1.0, grid, 20000, 11, 1);
    const SimCurve parallel = estimate_outage(topology, spec(StrategyKind::FdAf), 1.0, grid, 20000, 11, 3);
    CHECK(same_counts(serial, parallel));

    CHECK(serial.metric == Metric::Outage);
    CHECK(serial.strategy.label() == "fd-af");
    CHECK(serial.topology_summary == "N=2 M=1,2,1");
    CHECK(serial.rate_bits == 1.0);
    CHECK(serial.master_seed == 11);
    REQUIRE(serial.streams.size() == 1);
    CHECK(serial.streams.front().stream == "all");
    REQUIRE(serial.all_points().size() == 3);
    for (const CurvePoint& p : serial.all_points()) {
        CHECK(p.trials == 20000);
        CHECK(p.estimate == Catch::Approx(static_cast<double>(p.events) / 20000.0));
        CHECK(p.ci_low <= p.estimate);
        CHECK(p.estimate <= p.ci_high);
    }
    CHECK_THROWS_AS(serial.stream("s1"), Error);
}

TEST_CASE("selection dominates the fixed path trial by trial") {
    const Topology topology = topo({2, 2, 2});
    const std::vector<double> grid = make_snr_grid(8.0, 16.0, 4.0);
    const std::uint64_t trials = 30000;

    const SimCurve selected = estimate_outage(topology, spec(StrategyKind::FdAf), 1.0, grid, trials, 17);
    const SimCurve fixed = estimate_outage(topology, spec(StrategyKind::Fixed), 1.0, grid, trials, 17);

    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(selected.all_points()[i].events <= fixed.all_points()[i].events);
        if (i > 0) {
            // Shared realizations make higher-SNR events an exact subset.
            CHECK(selected.all_points()[i].events <= selected.all_points()[i - 1].events);
            CHECK(fixed.all_points()[i].events <= fixed.all_points()[i - 1].events);
        }
    }
    CHECK(fixed.all_points().front().events > 0);
}

TEST_CASE("outage rejects unsupported strategies and bad arguments") {
    const Topology narrow = topo({1, 2, 1});
    const Topology wide = topo({2, 2, 2});
    const std::vector<double> grid = make_snr_grid(10.0, 20.0, 5.0);

    CHECK_THROWS_AS(estimate_outage(narrow, spec(StrategyKind::FdDf), 1.0, grid, 10, 1), UnsupportedStrategyError);
    CHECK_THROWS_AS(estimate_outage(narrow, spec(StrategyKind::Dstbc), 1.0, grid, 10, 1), UnsupportedStrategyError);
    CHECK_THROWS_AS(estimate_outage(narrow, spec(StrategyKind::Hd), 1.0, grid, 10, 1), NoDisjointPathError);
    CHECK_THROWS_AS(estimate_outage(wide, spec(StrategyKind::FdAf), 0.0, grid, 10, 1), ConfigError);
    CHECK_THROWS_AS(estimate_outage(wide, spec(StrategyKind::FdAf), -1.0, grid, 10, 1), ConfigError);
    CHECK_THROWS_AS(estimate_outage(wide, spec(StrategyKind::FdAf), 1.0, {}, 10, 1), ConfigError);
    CHECK_THROWS_AS(estimate_outage(wide, spec(StrategyKind::FdAf), 1.0, {10.0, 10.0}, 10, 1), ConfigError);
    CHECK_THROWS_AS(estimate_outage(wide, spec(StrategyKind::FdAf), 1.0, grid, 10, 1, 1, -0.5), ConfigError);
}

TEST_CASE("stream labels follow the strategy") {
    const std::vector<double> grid = make_snr_grid(10.0, 14.0, 2.0);

    const SimCurve hd = estimate_outage(topo({2, 2, 2}), spec(StrategyKind::Hd), 1.0, grid, 5000, 3);
    REQUIRE(hd.streams.size() == 3);
    CHECK(hd.streams[0].stream == "all");
    CHECK(hd.streams[1].stream == "s1");
    CHECK(hd.streams[2].stream == "s2");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::uint64_t u = hd.stream("all").points[i].events;
        const std::uint64_t s1 = hd.stream("s1").points[i].events;
        const std::uint64_t s2 = hd.stream("s2").points[i].events;
        CHECK(u >= std::max(s1, s2));  // union of the per-stream events
        CHECK(u <= s1 + s2);
    }

    const SimCurve tw = estimate_outage(topo({1, 2, 1}), spec(StrategyKind::TwoWay), 1.0, grid, 5000, 3);
    REQUIRE(tw.streams.size() == 3);
    CHECK(tw.streams[1].stream == "t1-to-t2");
    CHECK(tw.streams[2].stream == "t2-to-t1");
    // The idealized outage event is reciprocal, so the directions coincide.
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(tw.stream("t1-to-t2").points[i].events == tw.stream("t2-to-t1").points[i].events);
}

TEST_CASE("scaled-rate mode follows the power-dependent threshold") {
    const Topology topology = topo({1, 2, 1});
    const std::vector<double> grid = make_snr_grid(10.0, 20.0, 5.0);

    const SimCurve fixed_rate = estimate_outage(topology, spec(StrategyKind::FdAf), 1.0, grid, 20000, 5);
    const SimCurve scaled = estimate_outage(topology, spec(StrategyKind::FdAf), 1.0, grid, 20000, 5, 1, 0.5);
    CHECK(scaled.multiplexing_gain == 0.5);
    CHECK(fixed_rate.multiplexing_gain == 0.0);
    bool differs = false;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (scaled.all_points()[i].events != fixed_rate.all_points()[i].events) differs = true;
    CHECK(differs);

    // r = 2 makes the threshold grow with power; with shared realizations the
    // event sets are then nested the other way.
    const SimCurve steep = estimate_outage(topology, spec(StrategyKind::FdAf), 1.0, grid, 20000, 5, 1, 2.0);
    for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(steep.all_points()[i].events >= steep.all_points()[i - 1].events);
}

TEST_CASE("bit error runs are reproducible across worker counts") {
    const Topology topology = topo({1, 2, 1});
    const std::vector<double> grid = make_snr_grid(10.0, 14.0, 4.0);

    const SimCurve serial = estimate_ber(topology, spec(StrategyKind::FdAf), grid, 2, 20000, 23, 1);
    const SimCurve parallel = estimate_ber(topology, spec(StrategyKind::FdAf), grid, 2, 20000, 23, 3);
    CHECK(same_counts(serial, parallel));

    CHECK(serial.metric == Metric::Ber);
    CHECK(serial.symbols_per_trial == 2);
    for (const CurvePoint& p : serial.all_points()) {
        CHECK(p.trials == 20000ull * 2 * 2);  // bits: two bits per symbol
        CHECK(p.events > 0);
    }
}

TEST_CASE("bit error accounting covers every strategy") {
    const std::vector<double> grid = make_snr_grid(12.0, 12.0, 1.0);
    const std::uint64_t trials = 2000;

    const SimCurve hd = estimate_ber(topo({2, 2, 2}), spec(StrategyKind::Hd), grid, 2, trials, 7, 1);
    REQUIRE(hd.streams.size() == 3);
    CHECK(hd.stream("all").points[0].trials == trials * 8);  // two streams of two symbols
    CHECK(hd.stream("s1").points[0].trials == trials * 4);
    CHECK(hd.stream("s2").points[0].trials == trials * 4);
    CHECK(hd.stream("all").points[0].events ==
          hd.stream("s1").points[0].events + hd.stream("s2").points[0].events);

    const SimCurve tw = estimate_ber(topo({1, 2, 1}), spec(StrategyKind::TwoWay), grid, 2, trials, 7, 1);
    CHECK(tw.stream("all").points[0].trials == trials * 8);
    CHECK(tw.stream("t1-to-t2").points[0].trials == trials * 4);

    const SimCurve db = estimate_ber(topo({1, 2, 1}), spec(StrategyKind::Dstbc), grid, 2, trials, 7, 1);
    CHECK(db.all_points()[0].trials == trials * 4);  // one two-symbol block per trial

    const SimCurve df = estimate_ber(topo({1, 2, 1}), spec(StrategyKind::FdDf), grid, 2, trials, 7, 1);
    CHECK(df.all_points()[0].trials == trials * 4);

    CHECK_THROWS_AS(estimate_ber(topo({1, 2, 1}), spec(StrategyKind::FdAf), grid, 0, trials, 7, 1), ConfigError);
    CHECK_THROWS_AS(estimate_ber(topo({2, 2, 2}), spec(StrategyKind::Dstbc), grid, 2, trials, 7, 1),
                    UnsupportedTopologyError);
}

TEST_CASE("bit error rate falls with power for the selected path") {
    const Topology topology = topo({1, 2, 1});
    const std::vector<double> grid = make_snr_grid(6.0, 26.0, 10.0);
    const SimCurve curve = estimate_ber(topology, spec(StrategyKind::FdAf), grid, 2, 30000, 29, 1);
    const auto& points = curve.all_points();
    REQUIRE(points.size() == 3);
    CHECK(points[0].estimate > points[1].estimate);
    CHECK(points[1].estimate > points[2].estimate);
}
