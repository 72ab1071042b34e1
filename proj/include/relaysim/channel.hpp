// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "relaysim/random.hpp"
#include "relaysim/topology.hpp"

namespace relaysim {

/// Complex gain matrix of one hop. Entry (i, j) is the gain from antenna i
/// of stage n to antenna j of stage n+1.
class HopMatrix {
  public:
    HopMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::complex<double>& operator()(int i, int j) {
        return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j)];
    }
    const std::complex<double>& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j)];
    }

    HopMatrix transposed() const {
        HopMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool operator==(const HopMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

  private:
    int rows_;
    int cols_;
    std::vector<std::complex<double>> data_;
};

/// One block-fading draw of every hop matrix. All symbols of a trial see the
/// same realization; fading changes independently from trial to trial.
struct ChannelRealization {
    std::vector<HopMatrix> hops;

    int hop_count() const { return static_cast<int>(hops.size()); }
    const HopMatrix& hop(int n) const { return hops[static_cast<std::size_t>(n)]; }

    bool operator==(const ChannelRealization& other) const { return hops == other.hops; }
};

/// Refill an existing realization with a fresh draw, every entry i.i.d.
/// CN(0, 1). Allocates only when the shape does not match the topology yet;
/// hot loops reuse one buffer across trials.
inline void sample_realization_into(ChannelRealization& realization, const Topology& topology, RandomStream& stream) {
    bool shaped = realization.hop_count() == topology.hop_count();
    for (int n = 0; shaped && n < topology.hop_count(); ++n)
        shaped = realization.hop(n).rows() == topology.antennas(n) &&
                 realization.hop(n).cols() == topology.antennas(n + 1);
    if (!shaped) {
        realization.hops.clear();
        realization.hops.reserve(static_cast<std::size_t>(topology.hop_count()));
        for (int n = 0; n < topology.hop_count(); ++n)
            realization.hops.emplace_back(topology.antennas(n), topology.antennas(n + 1));
    }
    for (HopMatrix& h : realization.hops) {
        for (int i = 0; i < h.rows(); ++i)
            for (int j = 0; j < h.cols(); ++j) h(i, j) = stream.complex_gaussian();
    }
}

/// Draw a fresh realization: every entry i.i.d. CN(0, 1).
inline ChannelRealization sample_realization(const Topology& topology, RandomStream& stream) {
    ChannelRealization realization;
    sample_realization_into(realization, topology, stream);
    return realization;
}

/// Squared-magnitude view of a realization, one row-major matrix per hop.
/// Entry (i, j) of hop n is |h^(n)_{ij}|^2 ~ Exp(1). Outage estimation only
/// needs these, so they are drawn directly as exponentials.
struct GainRealization {
    std::vector<std::vector<double>> hops;
    std::vector<int> cols;

    double gain(int hop, int i, int j) const {
        return hops[static_cast<std::size_t>(hop)]
                   [static_cast<std::size_t>(i) * static_cast<std::size_t>(cols[static_cast<std::size_t>(hop)]) +
                    static_cast<std::size_t>(j)];
    }
};

inline void sample_gain_realization_into(GainRealization& gains, const Topology& topology, RandomStream& stream) {
    bool shaped = gains.hops.size() == static_cast<std::size_t>(topology.hop_count());
    for (int n = 0; shaped && n < topology.hop_count(); ++n)
        shaped = gains.cols[static_cast<std::size_t>(n)] == topology.antennas(n + 1) &&
                 gains.hops[static_cast<std::size_t>(n)].size() ==
                     static_cast<std::size_t>(topology.antennas(n)) * static_cast<std::size_t>(topology.antennas(n + 1));
    if (!shaped) {
        gains.hops.assign(static_cast<std::size_t>(topology.hop_count()), {});
        gains.cols.assign(static_cast<std::size_t>(topology.hop_count()), 0);
        for (int n = 0; n < topology.hop_count(); ++n) {
            gains.hops[static_cast<std::size_t>(n)].resize(static_cast<std::size_t>(topology.antennas(n)) *
                                                           static_cast<std::size_t>(topology.antennas(n + 1)));
            gains.cols[static_cast<std::size_t>(n)] = topology.antennas(n + 1);
        }
    }
    for (auto& hop : gains.hops)
        for (double& g : hop) g = stream.exponential();
}

/// Reverse-direction view under channel reciprocity: hop k of the reverse
/// channel is the transpose of hop N-1-k of the forward channel, with the
/// same scalar gains. Applying it twice recovers the original realization.
inline ChannelRealization reciprocal_view(const ChannelRealization& forward) {
    ChannelRealization reverse;
    reverse.hops.reserve(forward.hops.size());
    for (auto it = forward.hops.rbegin(); it != forward.hops.rend(); ++it) {
        reverse.hops.push_back(it->transposed());
    }
    return reverse;
}

}  // namespace relaysim
