// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "relaysim/errors.hpp"

namespace relaysim {

/// Raw, unvalidated description of a multi-hop relay channel as read from a
/// config file. Stage 0 is the source, stage N the destination; stages
/// 1..N-1 are relay stages. `relay_partitions` lists per relay stage the
/// antenna count of each relay node; when omitted, each relay stage is
/// treated as a single relay holding all of that stage's antennas.
struct TopologyConfig {
    int hops = 0;                              ///< N, number of hops (relay stages + 1)
    std::vector<int> stage_antennas;           ///< [M_0, ..., M_N]
    std::optional<std::vector<std::vector<int>>> relay_partitions;
};

/// Validated shape of the relay channel. Immutable after construction and
/// safe to share across concurrent trial workers.
class Topology {
  public:
    static Topology validate(const TopologyConfig& config) {
        const int n = config.hops;
        if (n < 2) {
            throw ConfigError("hops must be >= 2 (source, at least one relay stage, destination); got " +
                              std::to_string(n));
        }
        if (static_cast<int>(config.stage_antennas.size()) != n + 1) {
            throw ConfigError("stage_antennas must list hops+1 = " + std::to_string(n + 1) +
                              " entries; got " + std::to_string(config.stage_antennas.size()));
        }
        for (std::size_t s = 0; s < config.stage_antennas.size(); ++s) {
            if (config.stage_antennas[s] < 1) {
                throw ConfigError("stage " + std::to_string(s) + " has antenna count " +
                                  std::to_string(config.stage_antennas[s]) + "; all counts must be >= 1");
            }
        }

        // Relay partitions default to one relay per stage holding all antennas.
        std::vector<std::vector<int>> partitions;
        if (config.relay_partitions.has_value()) {
            partitions = *config.relay_partitions;
            if (static_cast<int>(partitions.size()) != n - 1) {
                throw ConfigError("relay_partitions must list hops-1 = " + std::to_string(n - 1) +
                                  " relay stages; got " + std::to_string(partitions.size()));
            }
            for (int stage = 1; stage < n; ++stage) {
                const auto& part = partitions[static_cast<std::size_t>(stage - 1)];
                if (part.empty()) {
                    throw ConfigError("relay stage " + std::to_string(stage) + " has an empty partition");
                }
                int sum = 0;
                for (int antennas : part) {
                    if (antennas < 1) {
                        throw ConfigError("relay stage " + std::to_string(stage) +
                                          " has a relay with antenna count < 1");
                    }
                    sum += antennas;
                }
                if (sum != config.stage_antennas[static_cast<std::size_t>(stage)]) {
                    throw ConfigError("relay stage " + std::to_string(stage) + " partition sums to " +
                                      std::to_string(sum) + " but the stage has " +
                                      std::to_string(config.stage_antennas[static_cast<std::size_t>(stage)]) +
                                      " antennas");
                }
            }
        } else {
            partitions.reserve(static_cast<std::size_t>(n - 1));
            for (int stage = 1; stage < n; ++stage) {
                partitions.push_back({config.stage_antennas[static_cast<std::size_t>(stage)]});
            }
        }
        return Topology(n, config.stage_antennas, std::move(partitions));
    }

    int hop_count() const { return hops_; }
    int stage_count() const { return hops_ + 1; }

    /// Antenna count M_s of stage s, s in 0..hop_count().
    int antennas(int stage) const { return stage_antennas_[static_cast<std::size_t>(stage)]; }

    const std::vector<int>& stage_antennas() const { return stage_antennas_; }
    const std::vector<std::vector<int>>& relay_partitions() const { return relay_partitions_; }

    /// Total number of single-antenna paths, prod_n M_n.
    std::uint64_t path_count() const {
        std::uint64_t count = 1;
        for (int m : stage_antennas_) count *= static_cast<std::uint64_t>(m);
        return count;
    }

    std::string summary() const {
        std::string s = "N=" + std::to_string(hops_) + " M=";
        for (std::size_t i = 0; i < stage_antennas_.size(); ++i) {
            if (i > 0) s += ",";
            s += std::to_string(stage_antennas_[i]);
        }
        return s;
    }

    bool operator==(const Topology& other) const {
        return stage_antennas_ == other.stage_antennas_ && relay_partitions_ == other.relay_partitions_;
    }

  private:
    Topology(int hops, std::vector<int> stage_antennas, std::vector<std::vector<int>> partitions)
        : hops_(hops), stage_antennas_(std::move(stage_antennas)), relay_partitions_(std::move(partitions)) {}

    int hops_;
    std::vector<int> stage_antennas_;
    std::vector<std::vector<int>> relay_partitions_;
};

/// Maximum number of edge-disjoint paths: min over hops of M_n * M_{n+1}.
/// Also the diversity-gain ceiling of the channel.
inline int alpha(const Topology& topology) {
    int best = std::numeric_limits<int>::max();
    for (int n = 0; n < topology.hop_count(); ++n) {
        best = std::min(best, topology.antennas(n) * topology.antennas(n + 1));
    }
    return best;
}

/// Maximum number of edge-disjoint paths avoiding every antenna of a given
/// path: min over hops of (M_n - 1) * (M_{n+1} - 1). Zero means half-duplex
/// alternation cannot find a stage-disjoint second path.
inline int beta(const Topology& topology) {
    int best = std::numeric_limits<int>::max();
    for (int n = 0; n < topology.hop_count(); ++n) {
        best = std::min(best, (topology.antennas(n) - 1) * (topology.antennas(n + 1) - 1));
    }
    return best;
}

}  // namespace relaysim
