// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/errors.hpp"
#include "relaysim/metrics.hpp"
#include "relaysim/modulation.hpp"
#include "relaysim/paths.hpp"
#include "relaysim/random.hpp"
#include "relaysim/topology.hpp"

namespace relaysim {

enum class StrategyKind { FdAf, FdDf, Hd, TwoWay, Fixed, Dstbc };
enum class SearchSpace { All, Independent };
enum class PowerModel { PerNode, Total };

inline std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::FdAf: return "fd-af";
        case StrategyKind::FdDf: return "fd-df";
        case StrategyKind::Hd: return "hd";
        case StrategyKind::TwoWay: return "two-way";
        case StrategyKind::Fixed: return "fixed";
        case StrategyKind::Dstbc: return "dstbc";
    }
    return "fd-af";
}

inline StrategyKind strategy_kind_from_string(const std::string& name) {
    if (name == "fd-af") return StrategyKind::FdAf;
    if (name == "fd-df") return StrategyKind::FdDf;
    if (name == "hd") return StrategyKind::Hd;
    if (name == "two-way") return StrategyKind::TwoWay;
    if (name == "fixed") return StrategyKind::Fixed;
    if (name == "dstbc") return StrategyKind::Dstbc;
    throw UnsupportedStrategyError("unknown strategy '" + name + "'");
}

inline std::string to_string(SearchSpace space) {
    return space == SearchSpace::All ? "all" : "independent";
}

inline SearchSpace search_space_from_string(const std::string& name) {
    if (name == "all") return SearchSpace::All;
    if (name == "independent") return SearchSpace::Independent;
    throw ConfigError("unknown search space '" + name + "'");
}

inline std::string to_string(PowerModel model) {
    return model == PowerModel::PerNode ? "per-node" : "total";
}

inline PowerModel power_model_from_string(const std::string& name) {
    if (name == "per-node") return PowerModel::PerNode;
    if (name == "total") return PowerModel::Total;
    throw ConfigError("unknown power model '" + name + "'");
}

/// Full description of a strategy run: which selection rule, which candidate
/// set it may search, and how the power budget maps to transmitters.
struct StrategySpec {
    StrategyKind kind = StrategyKind::FdAf;
    SearchSpace search = SearchSpace::All;
    PowerModel power_model = PowerModel::PerNode;

    std::string label() const { return to_string(kind); }
    bool operator==(const StrategySpec& other) const {
        return kind == other.kind && search == other.search && power_model == other.power_model;
    }
};

/// Reject strategy/topology pairings that have no defined transceiver chain.
inline void validate_strategy(const StrategySpec& spec, const Topology& topology) {
    if (spec.kind == StrategyKind::Dstbc) {
        const std::vector<int> required{1, 2, 1};
        if (topology.stage_antennas() != required)
            throw UnsupportedTopologyError("dstbc baseline requires stage antennas 1,2,1");
    }
    if (spec.kind == StrategyKind::Hd && beta(topology) < 1)
        throw NoDisjointPathError("half-duplex pairing needs beta >= 1, topology " + topology.summary() +
                                  " has beta = " + std::to_string(beta(topology)));
}

/// Power handed to each transmitter on an N-hop path. PER_NODE grants the
/// budget to every node; TOTAL splits it across the N transmitters (source
/// plus N-1 relays).
inline double per_transmitter_power(PowerModel model, double budget, int hop_count) {
    return model == PowerModel::PerNode ? budget : budget / static_cast<double>(hop_count);
}

/// Power split for the two-relay-antenna space-time baseline: half the
/// budget to the source, half shared by the two relay antennas. PER_NODE
/// grants the budget to each transmitter unchanged.
struct DstbcPowers {
    double source = 0.0;
    double relay = 0.0;  // per relay antenna
};

inline DstbcPowers dstbc_powers(PowerModel model, double budget) {
    if (model == PowerModel::PerNode) return {budget, budget};
    return {budget / 2.0, budget / 4.0};
}

/// Outcome of a selection rule: the path(s) to use plus their metrics.
struct Selection {
    Path primary;
    std::optional<Path> secondary;  // half-duplex companion path
    PathMetrics primary_metrics;
    std::optional<PathMetrics> secondary_metrics;
};

/// Candidate set a selector may search: every path, or only the
/// edge-disjoint independent set.
inline std::vector<Path> candidate_paths(const Topology& topology, SearchSpace space) {
    return space == SearchSpace::All ? enumerate_paths(topology) : construct_independent_set(topology);
}

/// Full-duplex rule: the path with the best destination SNR, relay noise
/// accumulation included. Ties break toward the earliest candidate, which is
/// the lexicographically smallest path for both candidate sets.
inline Selection select_fd(const ChannelRealization& channel, const std::vector<Path>& candidates, double power,
                           const std::vector<double>& scales) {
    Selection best;
    bool have = false;
    for (const Path& path : candidates) {
        const PathMetrics m = path_metrics(channel, path, power, scales);
        if (!have || m.snr > best.primary_metrics.snr) {
            best.primary = path;
            best.primary_metrics = m;
            have = true;
        }
    }
    return best;
}

/// Gain-product rule: the path maximizing prod |h|^2. The amplification
/// chain multiplies every path by the same constant, so this is also the
/// argmax of the idealized (relay-noise-free) destination SNR used by the
/// outage metric. Reciprocity keeps the choice direction-independent.
inline Selection select_twoway(const ChannelRealization& channel, const std::vector<Path>& candidates, double power,
                               const std::vector<double>& scales) {
    Selection best;
    double best_gain = -1.0;
    for (const Path& path : candidates) {
        const double gain = effective_path_gain(channel, path);
        if (gain > best_gain) {
            best.primary = path;
            best_gain = gain;
        }
    }
    best.primary_metrics = path_metrics(channel, best.primary, power, scales);
    return best;
}

namespace detail {

/// True iff the paths use distinct antennas at every stage.
inline bool stage_disjoint(const Path& a, const Path& b) {
    for (int s = 0; s < a.stage_count(); ++s)
        if (a.at(s) == b.at(s)) return false;
    return true;
}

}  // namespace detail

/// Half-duplex rule: primary = full-duplex argmax over all paths; secondary
/// = best-SNR path using a different antenna than the primary at every
/// stage, so the two pipelines can alternate transmit/receive slots.
inline Selection select_hd_pair(const ChannelRealization& channel, const Topology& topology, double power,
                                const std::vector<double>& scales) {
    if (beta(topology) < 1)
        throw NoDisjointPathError("no stage-disjoint companion path exists for " + topology.summary());
    Selection best;
    bool have_primary = false;
    for_each_path(topology, [&](const std::vector<int>& indices) {
        const Path path{indices};
        const PathMetrics m = path_metrics(channel, path, power, scales);
        if (!have_primary || m.snr > best.primary_metrics.snr) {
            best.primary = path;
            best.primary_metrics = m;
            have_primary = true;
        }
    });
    bool have_secondary = false;
    PathMetrics secondary_metrics;
    Path secondary;
    for_each_path(topology, [&](const std::vector<int>& indices) {
        const Path path{indices};
        if (!detail::stage_disjoint(path, best.primary)) return;
        const PathMetrics m = path_metrics(channel, path, power, scales);
        if (!have_secondary || m.snr > secondary_metrics.snr) {
            secondary = path;
            secondary_metrics = m;
            have_secondary = true;
        }
    });
    best.secondary = secondary;
    best.secondary_metrics = secondary_metrics;
    return best;
}

/// Gain product of one path over a squared-magnitude realization.
inline double path_gain_product(const GainRealization& gains, const Path& path) {
    double g = 1.0;
    for (std::size_t n = 0; n + 1 < path.antenna_indices.size(); ++n)
        g *= gains.gain(static_cast<int>(n), path.at(static_cast<int>(n)), path.at(static_cast<int>(n) + 1));
    return g;
}

/// Best gain product over a candidate set. This is the quantity whose tail
/// sets the outage exponent; selection by it matches selection by the
/// idealized destination SNR.
inline double max_path_gain(const GainRealization& gains, const std::vector<Path>& candidates) {
    double best = -1.0;
    for (const Path& path : candidates) {
        const double g = path_gain_product(gains, path);
        if (g > best) best = g;
    }
    return best;
}

/// Gain products of the half-duplex pair under the gain rule: primary is the
/// best path overall, secondary the best path using different antennas at
/// every stage.
struct HdGainPair {
    double primary = 0.0;
    double secondary = 0.0;
};

inline HdGainPair hd_pair_gains(const GainRealization& gains, const Topology& topology) {
    HdGainPair pair;
    Path best_path;
    double best = -1.0;
    for_each_path(topology, [&](const std::vector<int>& indices) {
        double g = 1.0;
        for (std::size_t n = 0; n + 1 < indices.size(); ++n)
            g *= gains.gain(static_cast<int>(n), indices[n], indices[n + 1]);
        if (g > best) {
            best = g;
            best_path.antenna_indices = indices;
        }
    });
    pair.primary = best;
    double second = -1.0;
    for_each_path(topology, [&](const std::vector<int>& indices) {
        for (std::size_t s = 0; s < indices.size(); ++s)
            if (indices[s] == best_path.at(static_cast<int>(s))) return;
        double g = 1.0;
        for (std::size_t n = 0; n + 1 < indices.size(); ++n)
            g *= gains.gain(static_cast<int>(n), indices[n], indices[n + 1]);
        if (g > second) second = g;
    });
    pair.secondary = second;
    return pair;
}

/// Bit-level outcome of one trial chain.
struct TrialResult {
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;

    void add_symbol(int errors) {
        bits += 2;
        bit_errors += static_cast<std::uint64_t>(errors);
    }

    TrialResult& operator+=(const TrialResult& other) {
        bits += other.bits;
        bit_errors += other.bit_errors;
        return *this;
    }
};

/// Amplify-and-forward transmission of `symbols` 4-QAM symbols along one
/// path: y = sqrt(P prod(scales)) (prod h) s + z with z synthesized from
/// per-stage draws. Coherent detection against the known effective scalar.
inline TrialResult run_trial_fd_af(const ChannelRealization& channel, const Path& path, double power,
                                   const std::vector<double>& scales, int symbols, RandomStream& stream) {
    double scale_product = 1.0;
    for (double s : scales) scale_product *= s;
    const std::complex<double> coefficient = std::sqrt(power * scale_product) * path_coefficient(channel, path);
    TrialResult result;
    for (int i = 0; i < symbols; ++i) {
        const int bit_i = stream.bit();
        const int bit_q = stream.bit();
        const std::complex<double> received =
            coefficient * qam4_modulate(bit_i, bit_q) + synthesize_af_noise(channel, path, scales, stream);
        result.add_symbol(qam4_bit_errors({bit_i, bit_q}, qam4_detect(received, coefficient)));
    }
    return result;
}

/// Decode-and-forward along one path: every hop receiver makes a hard 4-QAM
/// decision and the next transmitter re-modulates it at power P. Errors are
/// counted end to end against the source bits.
inline TrialResult run_trial_fd_df(const ChannelRealization& channel, const Path& path, double power, int symbols,
                                   RandomStream& stream) {
    const double amplitude = std::sqrt(power);
    TrialResult result;
    for (int i = 0; i < symbols; ++i) {
        const int bit_i = stream.bit();
        const int bit_q = stream.bit();
        std::pair<int, int> relayed{bit_i, bit_q};
        for (int n = 0; n < channel.hop_count(); ++n) {
            const std::complex<double> h = channel.hop(n)(path.at(n), path.at(n + 1));
            const std::complex<double> received =
                amplitude * h * qam4_modulate(relayed.first, relayed.second) + stream.complex_gaussian();
            relayed = qam4_detect(received, amplitude * h);
        }
        result.add_symbol(qam4_bit_errors({bit_i, bit_q}, relayed));
    }
    return result;
}

/// Per-stream outcome of a half-duplex trial. Stream 1 rides the primary
/// path on odd slots, stream 2 the stage-disjoint secondary on even slots.
struct HdTrialResult {
    TrialResult stream1;
    TrialResult stream2;

    TrialResult aggregate() const {
        TrialResult t = stream1;
        t += stream2;
        return t;
    }

    HdTrialResult& operator+=(const HdTrialResult& other) {
        stream1 += other.stream1;
        stream2 += other.stream2;
        return *this;
    }
};

/// Half-duplex alternation: each stream is a clean amplify-and-forward
/// cascade on its own path; the stage-disjoint pairing is what lets both run
/// concurrently on half-duplex hardware.
inline HdTrialResult run_trial_hd(const ChannelRealization& channel, const Selection& selection, double power,
                                  const std::vector<double>& scales, int symbols_per_stream, RandomStream& stream) {
    HdTrialResult result;
    result.stream1 = run_trial_fd_af(channel, selection.primary, power, scales, symbols_per_stream, stream);
    result.stream2 = run_trial_fd_af(channel, *selection.secondary, power, scales, symbols_per_stream, stream);
    return result;
}

/// Per-direction outcome of a two-way trial.
struct TwoWayTrialResult {
    TrialResult t1_to_t2;
    TrialResult t2_to_t1;

    TrialResult aggregate() const {
        TrialResult t = t1_to_t2;
        t += t2_to_t1;
        return t;
    }

    TwoWayTrialResult& operator+=(const TwoWayTrialResult& other) {
        t1_to_t2 += other.t1_to_t2;
        t2_to_t1 += other.t2_to_t1;
        return *this;
    }
};

/// Two-way relaying on the shared gain-selected path. After echo removal
/// each direction is the scalar channel y = lambda x + z, with lambda built
/// from that direction's hop ordering and z from that direction's relay
/// noise accumulation.
inline TwoWayTrialResult run_trial_twoway(const ChannelRealization& channel, const Selection& selection, double power,
                                          const std::vector<double>& scales, int symbols_per_direction,
                                          RandomStream& stream) {
    const ChannelRealization reverse_channel = reciprocal_view(channel);
    const Path reverse_path = selection.primary.reversed();
    TwoWayTrialResult result;
    result.t1_to_t2 = run_trial_fd_af(channel, selection.primary, power, scales, symbols_per_direction, stream);
    result.t2_to_t1 = run_trial_fd_af(reverse_channel, reverse_path, power, scales, symbols_per_direction, stream);
    return result;
}

/// Distributed Alamouti baseline over stage antennas 1,2,1. The source sends
/// a symbol pair over two slots; relay antenna 1 forwards its two scaled
/// receptions, relay antenna 2 the conjugated/negated pair, so the
/// destination sees an orthogonal 2x2 code and matched filtering is ML.
/// An odd symbol count rounds up to whole code blocks.
inline TrialResult run_trial_dstbc(const ChannelRealization& channel, const Topology& topology, DstbcPowers powers,
                                   int symbols, RandomStream& stream) {
    const std::vector<int> required{1, 2, 1};
    if (topology.stage_antennas() != required)
        throw UnsupportedTopologyError("dstbc baseline requires stage antennas 1,2,1");
    // Relay normalization: average receive power at each relay antenna is
    // powers.source + 1, re-transmitted at powers.relay.
    const double forward_amplitude = std::sqrt(powers.relay / (powers.source + 1.0));
    const double source_amplitude = std::sqrt(powers.source);
    const std::complex<double> g1 = channel.hop(0)(0, 0);
    const std::complex<double> g2 = channel.hop(0)(0, 1);
    const std::complex<double> h1 = channel.hop(1)(0, 0);
    const std::complex<double> h2 = channel.hop(1)(1, 0);
    // Effective code on (s1, s2*): [[a, -b], [b*, a*]] with a = g1 h1,
    // b = conj(g2) h2. Matched filtering restores positive real gains.
    const std::complex<double> a = g1 * h1;
    const std::complex<double> b = std::conj(g2) * h2;

    TrialResult result;
    const int blocks = (symbols + 1) / 2;
    for (int block = 0; block < blocks; ++block) {
        const int b1i = stream.bit(), b1q = stream.bit();
        const int b2i = stream.bit(), b2q = stream.bit();
        const std::complex<double> s1 = qam4_modulate(b1i, b1q);
        const std::complex<double> s2 = qam4_modulate(b2i, b2q);

        // Relay receptions r_{antenna,slot}.
        const std::complex<double> r11 = source_amplitude * g1 * s1 + stream.complex_gaussian();
        const std::complex<double> r12 = source_amplitude * g1 * s2 + stream.complex_gaussian();
        const std::complex<double> r21 = source_amplitude * g2 * s1 + stream.complex_gaussian();
        const std::complex<double> r22 = source_amplitude * g2 * s2 + stream.complex_gaussian();

        const std::complex<double> y1 =
            forward_amplitude * (h1 * r11 - h2 * std::conj(r22)) + stream.complex_gaussian();
        const std::complex<double> y2 =
            forward_amplitude * (h1 * r12 + h2 * std::conj(r21)) + stream.complex_gaussian();

        const std::complex<double> stat1 = std::conj(a) * y1 + b * std::conj(y2);
        const std::complex<double> stat2 = std::conj(a) * y2 - b * std::conj(y1);

        result.add_symbol(qam4_bit_errors({b1i, b1q}, qam4_detect(stat1, {1.0, 0.0})));
        result.add_symbol(qam4_bit_errors({b2i, b2q}, qam4_detect(stat2, {1.0, 0.0})));
    }
    return result;
}

/// Symbols delivered by the alternating half-duplex schedule: one per slot
/// in steady state.
inline std::uint64_t hd_symbols_delivered(std::uint64_t slots) { return slots; }

/// Reference single-path operation on half-duplex hardware: a relay cannot
/// receive while it transmits, so each symbol occupies two slot phases.
inline std::uint64_t fd_in_hd_symbols_delivered(std::uint64_t slots) { return slots / 2; }

}  // namespace relaysim
