// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/errors.hpp"
#include "relaysim/metrics.hpp"
#include "relaysim/paths.hpp"
#include "relaysim/random.hpp"
#include "relaysim/strategies.hpp"
#include "relaysim/topology.hpp"

namespace relaysim {

enum class Metric { Outage, Ber };

inline std::string to_string(Metric metric) { return metric == Metric::Outage ? "outage" : "ber"; }

inline Metric metric_from_string(const std::string& name) {
    if (name == "outage") return Metric::Outage;
    if (name == "ber") return Metric::Ber;
    throw ConfigError("unknown metric '" + name + "'");
}

/// 95% Wilson score interval for a binomial proportion. Valid down to small
/// event counts, unlike the normal approximation.
inline std::pair<double, double> wilson_interval(std::uint64_t events, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(events) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = (z / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    // At the boundaries center and half agree analytically; pin the exact end.
    const double lo = events == 0 ? 0.0 : std::max(0.0, center - half);
    const double hi = events == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

/// One estimated point of a curve. For BER curves, trials counts bits and
/// events counts bit errors.
struct CurvePoint {
    double snr_db = 0.0;
    double estimate = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t events = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// A stream of a curve: "all" plus, where applicable, the half-duplex
/// substreams s1/s2 or the two-way directions t1-to-t2/t2-to-t1.
struct StreamSeries {
    std::string stream;
    std::vector<CurvePoint> points;
};

/// Estimated metric over an SNR grid for one strategy. streams[0] is always
/// "all"; snr_db is strictly increasing within each stream.
struct SimCurve {
    Metric metric = Metric::Outage;
    StrategySpec strategy;
    std::string topology_summary;
    double rate_bits = 0.0;           // outage only
    double multiplexing_gain = 0.0;   // outage only; > 0 scales the rate with log2(P)
    int symbols_per_trial = 0;        // ber only
    std::uint64_t master_seed = 0;
    std::vector<StreamSeries> streams;

    const StreamSeries& stream(const std::string& name) const {
        for (const StreamSeries& s : streams)
            if (s.stream == name) return s;
        throw Error("curve has no stream '" + name + "'");
    }
    const std::vector<CurvePoint>& all_points() const { return streams.front().points; }
};

/// The SNR axis is transmit power in dB: snr_db = 10 log10(P) with unit
/// per-stage noise. P is the per-node power or the total budget, depending
/// on the power model.
inline double power_from_snr_db(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

inline std::vector<double> make_snr_grid(double start, double stop, double step) {
    if (step <= 0.0) throw ConfigError("snr step must be positive");
    if (stop < start) throw ConfigError("snr stop must be >= start");
    std::vector<double> grid;
    // Half-step slack keeps the endpoint included despite rounding.
    for (double v = start; v <= stop + step * 0.5; v += step) grid.push_back(v);
    return grid;
}

namespace detail {

/// Per-chunk tally: event and trial counts per (grid point, stream slot).
/// Integer sums make the reduction exact and order-independent, so the
/// worker count never changes the result.
struct Tally {
    std::vector<std::uint64_t> events;
    std::vector<std::uint64_t> trials;

    Tally(std::size_t points, std::size_t streams) : events(points * streams, 0), trials(points * streams, 0) {}

    void add(std::size_t point, std::size_t stream, std::size_t stream_count, std::uint64_t ev, std::uint64_t tr) {
        events[point * stream_count + stream] += ev;
        trials[point * stream_count + stream] += tr;
    }
};

/// Trials are split into fixed-size chunks; chunk k always uses substream k
/// of the master seed, regardless of which worker runs it. Results are
/// reduced by summation, so output is identical for any worker count.
constexpr std::uint64_t kTrialsPerChunk = 1u << 16;

template <typename ChunkBody>
inline Tally run_chunked(std::uint64_t total_trials, std::size_t points, std::size_t streams, int workers,
                         std::uint64_t master_seed, ChunkBody&& body) {
    const std::uint64_t chunk_count = (total_trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
    Tally total(points, streams);
    if (chunk_count == 0) return total;

    const int thread_count = std::max(1, std::min<int>(workers, static_cast<int>(std::min<std::uint64_t>(
                                                                    chunk_count, std::uint64_t(256)))));
    std::vector<Tally> partials(static_cast<std::size_t>(thread_count), Tally(points, streams));
    std::atomic<std::uint64_t> next_chunk{0};

    auto work = [&](int thread_index) {
        Tally& mine = partials[static_cast<std::size_t>(thread_index)];
        for (;;) {
            const std::uint64_t chunk = next_chunk.fetch_add(1);
            if (chunk >= chunk_count) break;
            const std::uint64_t begin = chunk * kTrialsPerChunk;
            const std::uint64_t trials = std::min<std::uint64_t>(kTrialsPerChunk, total_trials - begin);
            RandomStream stream(master_seed, chunk);
            body(stream, trials, mine);
        }
    };

    if (thread_count == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int i = 0; i < thread_count; ++i) pool.emplace_back(work, i);
        for (std::thread& t : pool) t.join();
    }

    for (const Tally& partial : partials) {
        for (std::size_t i = 0; i < total.events.size(); ++i) {
            total.events[i] += partial.events[i];
            total.trials[i] += partial.trials[i];
        }
    }
    return total;
}

inline std::vector<std::string> stream_labels(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Hd: return {"all", "s1", "s2"};
        case StrategyKind::TwoWay: return {"all", "t1-to-t2", "t2-to-t1"};
        default: return {"all"};
    }
}

inline SimCurve assemble_curve(Metric metric, const StrategySpec& strategy, const Topology& topology,
                               const std::vector<double>& grid, const std::vector<std::string>& labels,
                               const Tally& tally, std::uint64_t master_seed) {
    SimCurve curve;
    curve.metric = metric;
    curve.strategy = strategy;
    curve.topology_summary = topology.summary();
    curve.master_seed = master_seed;
    const std::size_t streams = labels.size();
    for (std::size_t s = 0; s < streams; ++s) {
        StreamSeries series;
        series.stream = labels[s];
        for (std::size_t p = 0; p < grid.size(); ++p) {
            CurvePoint point;
            point.snr_db = grid[p];
            point.trials = tally.trials[p * streams + s];
            point.events = tally.events[p * streams + s];
            point.estimate = point.trials == 0 ? 0.0
                                               : static_cast<double>(point.events) / static_cast<double>(point.trials);
            const auto ci = wilson_interval(point.events, point.trials);
            point.ci_low = ci.first;
            point.ci_high = ci.second;
            series.points.push_back(point);
        }
        curve.streams.push_back(std::move(series));
    }
    return curve;
}

}  // namespace detail

/// Outage probability of the selected transmission over an SNR grid.
///
/// The outage event uses the idealized destination SNR P_tx prod(mu) G of
/// the selected path (unit noise), the quantity whose tail sets the
/// diversity order; G is the path gain product and selection maximizes it.
/// Every grid point is evaluated against the same realizations, so two runs
/// with equal seeds are paired trial by trial and the per-point events of a
/// better selector are an exact subset of a worse one's.
///
/// Supported strategies: fd-af, fixed, hd, two-way. Decode-and-forward and
/// the space-time baseline have no mutual-information threshold rule here.
///
/// multiplexing_gain = 0 keeps the rate fixed at rate_bits; r > 0 instead
/// uses the power-scaled rate r log2(P) at every grid point.
inline SimCurve estimate_outage(const Topology& topology, const StrategySpec& strategy, double rate_bits,
                                const std::vector<double>& snr_grid_db, std::uint64_t trials_per_point,
                                std::uint64_t master_seed, int workers = 1, double multiplexing_gain = 0.0) {
    if (rate_bits <= 0.0) throw ConfigError("rate_bits must be positive");
    if (multiplexing_gain < 0.0) throw ConfigError("multiplexing_gain must be >= 0");
    if (snr_grid_db.empty()) throw ConfigError("snr grid is empty");
    validate_strategy(strategy, topology);
    const StrategyKind kind = strategy.kind;
    if (kind == StrategyKind::FdDf || kind == StrategyKind::Dstbc)
        throw UnsupportedStrategyError("outage metric is not defined for strategy '" + to_string(kind) + "'");

    // Threshold on the gain product: log2(1 + P_tx prod(mu) G) <= rate.
    const int hops = topology.hop_count();
    std::vector<double> thresholds(snr_grid_db.size());
    for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
        if (i > 0 && snr_grid_db[i] <= snr_grid_db[i - 1]) throw ConfigError("snr grid must be strictly increasing");
        const double budget = power_from_snr_db(snr_grid_db[i]);
        const double p_tx = per_transmitter_power(strategy.power_model, budget, hops);
        const std::vector<double> scales =
            kind == StrategyKind::TwoWay ? two_way_af_scales(hops, p_tx) : af_scales(hops, p_tx);
        double c = p_tx;
        for (double s : scales) c *= s;
        const double rate = multiplexing_gain > 0.0 ? multiplexing_gain * std::log2(budget) : rate_bits;
        thresholds[i] = (std::pow(2.0, rate) - 1.0) / c;
    }
    // At fixed rate thresholds descend along the grid and each trial's events
    // are a prefix of the points, allowing early exit. A scaled rate can break
    // the ordering, in which case every point is evaluated.
    bool descending = true;
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (thresholds[i] > thresholds[i - 1]) descending = false;

    const std::vector<std::string> labels = detail::stream_labels(kind);
    const std::size_t streams = labels.size();
    const std::size_t points = snr_grid_db.size();
    const std::vector<Path> candidates =
        kind == StrategyKind::Fixed ? std::vector<Path>{first_path(topology)} : candidate_paths(topology, strategy.search);

    detail::Tally tally = detail::run_chunked(
        trials_per_point, points, streams, workers, master_seed,
        [&](RandomStream& stream, std::uint64_t trials, detail::Tally& out) {
            GainRealization gains;
            std::vector<std::uint64_t> events(points * streams, 0);
            for (std::uint64_t t = 0; t < trials; ++t) {
                sample_gain_realization_into(gains, topology, stream);
                if (kind == StrategyKind::Hd) {
                    const HdGainPair pair = hd_pair_gains(gains, topology);
                    for (std::size_t p = 0; p < points; ++p) {
                        const bool out1 = pair.primary <= thresholds[p];
                        const bool out2 = pair.secondary <= thresholds[p];
                        if (out1 || out2) events[p * streams + 0] += 1;
                        if (out1) events[p * streams + 1] += 1;
                        if (out2) events[p * streams + 2] += 1;
                        if (descending && !out1 && !out2) break;  // thresholds only shrink
                    }
                } else {
                    const double gain = max_path_gain(gains, candidates);
                    for (std::size_t p = 0; p < points; ++p) {
                        if (gain <= thresholds[p])
                            for (std::size_t s = 0; s < streams; ++s) events[p * streams + s] += 1;
                        else if (descending)
                            break;
                    }
                }
            }
            for (std::size_t p = 0; p < points; ++p)
                for (std::size_t s = 0; s < streams; ++s)
                    out.add(p, s, streams, events[p * streams + s], trials);
        });

    SimCurve curve = detail::assemble_curve(Metric::Outage, strategy, topology, snr_grid_db, labels, tally, master_seed);
    curve.rate_bits = rate_bits;
    curve.multiplexing_gain = multiplexing_gain;
    return curve;
}

/// Uncoded 4-QAM bit error rate over an SNR grid. Each trial draws one
/// fading block shared across the grid, then runs symbols_per_trial symbols
/// per point with fresh noise. Points of BER curves count bits as trials and
/// bit errors as events.
inline SimCurve estimate_ber(const Topology& topology, const StrategySpec& strategy,
                             const std::vector<double>& snr_grid_db, int symbols_per_trial,
                             std::uint64_t trials_per_point, std::uint64_t master_seed, int workers = 1) {
    if (symbols_per_trial < 1) throw ConfigError("symbols_per_trial must be >= 1");
    if (snr_grid_db.empty()) throw ConfigError("snr grid is empty");
    for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
        if (snr_grid_db[i] <= snr_grid_db[i - 1]) throw ConfigError("snr grid must be strictly increasing");
    validate_strategy(strategy, topology);
    const StrategyKind kind = strategy.kind;

    const int hops = topology.hop_count();
    const std::size_t points = snr_grid_db.size();
    struct PointPower {
        double p_tx;
        std::vector<double> scales;
        DstbcPowers dstbc;
    };
    std::vector<PointPower> powers(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double budget = power_from_snr_db(snr_grid_db[i]);
        powers[i].p_tx = per_transmitter_power(strategy.power_model, budget, hops);
        powers[i].scales =
            kind == StrategyKind::TwoWay ? two_way_af_scales(hops, powers[i].p_tx) : af_scales(hops, powers[i].p_tx);
        powers[i].dstbc = dstbc_powers(strategy.power_model, budget);
    }

    const std::vector<std::string> labels = detail::stream_labels(kind);
    const std::size_t streams = labels.size();
    const std::vector<Path> candidates = candidate_paths(topology, strategy.search);
    const Path fixed = first_path(topology);

    detail::Tally tally = detail::run_chunked(
        trials_per_point, points, streams, workers, master_seed,
        [&](RandomStream& stream, std::uint64_t trials, detail::Tally& out) {
            ChannelRealization channel;
            for (std::uint64_t t = 0; t < trials; ++t) {
                sample_realization_into(channel, topology, stream);
                for (std::size_t p = 0; p < points; ++p) {
                    const PointPower& pw = powers[p];
                    switch (kind) {
                        case StrategyKind::Fixed: {
                            const TrialResult r =
                                run_trial_fd_af(channel, fixed, pw.p_tx, pw.scales, symbols_per_trial, stream);
                            out.add(p, 0, streams, r.bit_errors, r.bits);
                            break;
                        }
                        case StrategyKind::FdAf: {
                            const Selection sel = select_fd(channel, candidates, pw.p_tx, pw.scales);
                            const TrialResult r =
                                run_trial_fd_af(channel, sel.primary, pw.p_tx, pw.scales, symbols_per_trial, stream);
                            out.add(p, 0, streams, r.bit_errors, r.bits);
                            break;
                        }
                        case StrategyKind::FdDf: {
                            const Selection sel = select_fd(channel, candidates, pw.p_tx, pw.scales);
                            const TrialResult r =
                                run_trial_fd_df(channel, sel.primary, pw.p_tx, symbols_per_trial, stream);
                            out.add(p, 0, streams, r.bit_errors, r.bits);
                            break;
                        }
                        case StrategyKind::Hd: {
                            const Selection sel = select_hd_pair(channel, topology, pw.p_tx, pw.scales);
                            const HdTrialResult r =
                                run_trial_hd(channel, sel, pw.p_tx, pw.scales, symbols_per_trial, stream);
                            const TrialResult all = r.aggregate();
                            out.add(p, 0, streams, all.bit_errors, all.bits);
                            out.add(p, 1, streams, r.stream1.bit_errors, r.stream1.bits);
                            out.add(p, 2, streams, r.stream2.bit_errors, r.stream2.bits);
                            break;
                        }
                        case StrategyKind::TwoWay: {
                            const Selection sel = select_twoway(channel, candidates, pw.p_tx, pw.scales);
                            const TwoWayTrialResult r =
                                run_trial_twoway(channel, sel, pw.p_tx, pw.scales, symbols_per_trial, stream);
                            const TrialResult all = r.aggregate();
                            out.add(p, 0, streams, all.bit_errors, all.bits);
                            out.add(p, 1, streams, r.t1_to_t2.bit_errors, r.t1_to_t2.bits);
                            out.add(p, 2, streams, r.t2_to_t1.bit_errors, r.t2_to_t1.bits);
                            break;
                        }
                        case StrategyKind::Dstbc: {
                            const TrialResult r =
                                run_trial_dstbc(channel, topology, pw.dstbc, symbols_per_trial, stream);
                            out.add(p, 0, streams, r.bit_errors, r.bits);
                            break;
                        }
                    }
                }
            }
        });

    SimCurve curve = detail::assemble_curve(Metric::Ber, strategy, topology, snr_grid_db, labels, tally, master_seed);
    curve.symbols_per_trial = symbols_per_trial;
    return curve;
}

/// Fitted decay order of a curve.
struct SlopeFit {
    double order = 0.0;
    double stderr_ = 0.0;
    double window_lo_db = 0.0;
    double window_hi_db = 0.0;
    int points_used = 0;
};

/// Qualification rules for slope fitting. Points need enough events for a
/// stable log estimate and must sit in the measurable probability band.
struct FitOptions {
    double snr_db_lo = -std::numeric_limits<double>::infinity();
    double snr_db_hi = std::numeric_limits<double>::infinity();
    std::uint64_t min_events = 100;
    double estimate_lo = 1e-6;
    double estimate_hi = 1e-2;
};

/// Least-squares slope of -log10(estimate) against snr_db / 10 over the
/// qualifying points. This is the empirical decay order: a curve
/// proportional to P^-d fits d exactly.
inline SlopeFit fit_diversity_order(const std::vector<CurvePoint>& points, const FitOptions& options = {}) {
    std::vector<double> x, y;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const CurvePoint& p : points) {
        if (p.snr_db < options.snr_db_lo || p.snr_db > options.snr_db_hi) continue;
        if (p.events < options.min_events) continue;
        if (p.estimate < options.estimate_lo || p.estimate > options.estimate_hi) continue;
        x.push_back(p.snr_db / 10.0);
        y.push_back(-std::log10(p.estimate));
        lo = std::min(lo, p.snr_db);
        hi = std::max(hi, p.snr_db);
    }
    if (x.size() < 3)
        throw InsufficientDataError("slope fit needs at least 3 qualifying points, have " +
                                    std::to_string(x.size()));
    const double n = static_cast<double>(x.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
    }
    SlopeFit fit;
    fit.order = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - mean_y - fit.order * (x[i] - mean_x);
        ss_res += r * r;
    }
    fit.stderr_ = std::sqrt(ss_res / (n - 2.0) / sxx);
    fit.window_lo_db = lo;
    fit.window_hi_db = hi;
    fit.points_used = static_cast<int>(x.size());
    return fit;
}

/// SNR at which a decaying curve crosses `target`, interpolated linearly in
/// (snr_db, log10 estimate) between the bracketing grid points.
inline double crossing_snr_db(const std::vector<CurvePoint>& points, double target) {
    if (target <= 0.0) throw ConfigError("crossing target must be positive");
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const CurvePoint& a = points[i];
        const CurvePoint& b = points[i + 1];
        if (a.estimate >= target && target >= b.estimate && a.estimate > 0.0 && b.estimate > 0.0) {
            if (a.estimate == b.estimate) return a.snr_db;
            const double f = (std::log10(a.estimate) - std::log10(target)) /
                             (std::log10(a.estimate) - std::log10(b.estimate));
            return a.snr_db + f * (b.snr_db - a.snr_db);
        }
    }
    throw InsufficientDataError("no adjacent grid points bracket the target estimate " + std::to_string(target));
}

}  // namespace relaysim
