// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "relaysim/errors.hpp"
#include "relaysim/topology.hpp"

namespace relaysim {

/// A single-antenna path: one antenna index per stage, 0-based. A path of a
/// topology with N hops has N+1 indices and induces the edge
/// (indices[n], indices[n+1]) on hop n.
struct Path {
    std::vector<int> antenna_indices;

    int stage_count() const { return static_cast<int>(antenna_indices.size()); }
    int at(int stage) const { return antenna_indices[static_cast<std::size_t>(stage)]; }

    /// Serialized form used by CSV/JSON output, e.g. "0-1-0".
    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < antenna_indices.size(); ++i) {
            if (i > 0) s += "-";
            s += std::to_string(antenna_indices[i]);
        }
        return s;
    }

    Path reversed() const {
        Path r = *this;
        std::reverse(r.antenna_indices.begin(), r.antenna_indices.end());
        return r;
    }

    bool operator==(const Path& other) const { return antenna_indices == other.antenna_indices; }
    bool operator<(const Path& other) const { return antenna_indices < other.antenna_indices; }
};

/// Visit every path in lexicographic order of antenna indices without
/// materializing them. The callback receives the shared index buffer.
template <typename Visitor>
inline void for_each_path(const Topology& topology, Visitor&& visit) {
    const int stages = topology.stage_count();
    std::vector<int> indices(static_cast<std::size_t>(stages), 0);
    for (;;) {
        visit(static_cast<const std::vector<int>&>(indices));
        // Odometer increment, last stage fastest.
        int s = stages - 1;
        while (s >= 0) {
            if (++indices[static_cast<std::size_t>(s)] < topology.antennas(s)) break;
            indices[static_cast<std::size_t>(s)] = 0;
            --s;
        }
        if (s < 0) return;
    }
}

/// All prod_n M_n paths in lexicographic order.
inline std::vector<Path> enumerate_paths(const Topology& topology) {
    std::vector<Path> paths;
    paths.reserve(static_cast<std::size_t>(topology.path_count()));
    for_each_path(topology, [&](const std::vector<int>& indices) { paths.push_back(Path{indices}); });
    return paths;
}

/// Antenna 0 at every stage; the fixed-path baseline transmits on this path
/// without looking at the realization.
inline Path first_path(const Topology& topology) {
    return Path{std::vector<int>(static_cast<std::size_t>(topology.stage_count()), 0)};
}

/// True iff no two paths share an edge on any hop.
inline bool verify_edge_disjoint(const std::vector<Path>& paths) {
    if (paths.empty()) return true;
    const int stages = paths.front().stage_count();
    for (int n = 0; n + 1 < stages; ++n) {
        std::set<std::pair<int, int>> seen;
        for (const Path& p : paths) {
            if (!seen.insert({p.at(n), p.at(n + 1)}).second) return false;
        }
    }
    return true;
}

namespace detail {

/// Unit-capacity flow network over the layered antenna graph. Antennas are
/// vertices, inter-stage edges carry capacity 1, and a super source/sink
/// attach to stage 0 and stage N with unbounded capacity. Vertices are
/// uncapacitated, so the max flow counts edge-disjoint paths.
class LayeredFlowNetwork {
  public:
    explicit LayeredFlowNetwork(const Topology& topology) {
        const int stages = topology.stage_count();
        stage_offsets_.resize(static_cast<std::size_t>(stages));
        int next_node = 0;
        for (int s = 0; s < stages; ++s) {
            stage_offsets_[static_cast<std::size_t>(s)] = next_node;
            next_node += topology.antennas(s);
        }
        source_ = next_node++;
        sink_ = next_node++;
        adjacency_.resize(static_cast<std::size_t>(next_node));

        const int unbounded = alpha(topology) + 1;
        for (int i = 0; i < topology.antennas(0); ++i) add_edge(source_, node(0, i), unbounded);
        for (int n = 0; n < topology.hop_count(); ++n) {
            for (int i = 0; i < topology.antennas(n); ++i)
                for (int j = 0; j < topology.antennas(n + 1); ++j) add_edge(node(n, i), node(n + 1, j), 1);
        }
        const int last = topology.hop_count();
        for (int j = 0; j < topology.antennas(last); ++j) add_edge(node(last, j), sink_, unbounded);
    }

    /// Edmonds-Karp with lexicographic adjacency; deterministic flow.
    int max_flow() {
        int total = 0;
        while (augment() > 0) ++total;
        return total;
    }

    /// Decompose the current flow into paths, always walking the
    /// lowest-index antenna with remaining flow. Must be called after
    /// max_flow().
    std::vector<Path> decompose(const Topology& topology) {
        std::vector<Path> paths;
        for (;;) {
            Path path;
            int node_id = source_;
            while (node_id != sink_) {
                int chosen = -1;
                for (int edge_id : adjacency_[static_cast<std::size_t>(node_id)]) {
                    Edge& e = edges_[static_cast<std::size_t>(edge_id)];
                    if (e.flow > 0) {
                        chosen = edge_id;
                        break;
                    }
                }
                if (chosen < 0) break;
                Edge& e = edges_[static_cast<std::size_t>(chosen)];
                e.flow -= 1;
                node_id = e.to;
                if (node_id != sink_) {
                    // Recover (stage, antenna) from the node id.
                    const int stage = stage_of(node_id, topology);
                    path.antenna_indices.push_back(node_id - stage_offsets_[static_cast<std::size_t>(stage)]);
                }
            }
            if (node_id != sink_ || path.stage_count() != topology.stage_count()) break;
            paths.push_back(std::move(path));
        }
        return paths;
    }

  private:
    struct Edge {
        int to;
        int capacity;
        int flow = 0;
        int reverse_index;  // index of the paired reverse edge in edges_
    };

    int node(int stage, int antenna) const { return stage_offsets_[static_cast<std::size_t>(stage)] + antenna; }

    int stage_of(int node_id, const Topology& topology) const {
        for (int s = topology.stage_count() - 1; s >= 0; --s) {
            if (node_id >= stage_offsets_[static_cast<std::size_t>(s)]) return s;
        }
        return 0;
    }

    void add_edge(int from, int to, int capacity) {
        const int forward_id = static_cast<int>(edges_.size());
        edges_.push_back(Edge{to, capacity, 0, forward_id + 1});
        edges_.push_back(Edge{from, 0, 0, forward_id});
        adjacency_[static_cast<std::size_t>(from)].push_back(forward_id);
        adjacency_[static_cast<std::size_t>(to)].push_back(forward_id + 1);
    }

    int augment() {
        std::vector<int> parent_edge(adjacency_.size(), -1);
        std::deque<int> queue{source_};
        std::vector<bool> visited(adjacency_.size(), false);
        visited[static_cast<std::size_t>(source_)] = true;
        while (!queue.empty() && !visited[static_cast<std::size_t>(sink_)]) {
            const int u = queue.front();
            queue.pop_front();
            for (int edge_id : adjacency_[static_cast<std::size_t>(u)]) {
                const Edge& e = edges_[static_cast<std::size_t>(edge_id)];
                if (!visited[static_cast<std::size_t>(e.to)] && e.capacity - e.flow > 0) {
                    visited[static_cast<std::size_t>(e.to)] = true;
                    parent_edge[static_cast<std::size_t>(e.to)] = edge_id;
                    queue.push_back(e.to);
                }
            }
        }
        if (!visited[static_cast<std::size_t>(sink_)]) return 0;
        // Unit capacities on the layered edges: each augmentation adds 1.
        for (int v = sink_; v != source_;) {
            Edge& e = edges_[static_cast<std::size_t>(parent_edge[static_cast<std::size_t>(v)])];
            e.flow += 1;
            edges_[static_cast<std::size_t>(e.reverse_index)].flow -= 1;
            v = edges_[static_cast<std::size_t>(e.reverse_index)].to;
        }
        return 1;
    }

    std::vector<int> stage_offsets_;
    int source_ = 0;
    int sink_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;
};

}  // namespace detail

/// Count edge-disjoint paths by max flow on the layered unit-capacity graph.
/// Independent of the closed form alpha(); the two are cross-checked in the
/// test suite.
inline int max_flow_alpha_oracle(const Topology& topology) {
    detail::LayeredFlowNetwork network(topology);
    return network.max_flow();
}

/// Build alpha(topology) pairwise edge-disjoint paths by max-flow
/// decomposition with lowest-index augmentation. Deterministic for a given
/// topology.
inline std::vector<Path> construct_independent_set(const Topology& topology) {
    detail::LayeredFlowNetwork network(topology);
    network.max_flow();
    return network.decompose(topology);
}

}  // namespace relaysim
