// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/errors.hpp"
#include "relaysim/paths.hpp"
#include "relaysim/random.hpp"
#include "relaysim/topology.hpp"

namespace relaysim {

/// Amplify-and-forward scale factors, one per hop transmitter. The source
/// transmits the unit-energy symbol directly (scale 1); every relay
/// normalizes by its expected receive power P+1 before re-transmitting with
/// power P, hence P/(P+1).
inline std::vector<double> af_scales(int hop_count, double power) {
    std::vector<double> scales(static_cast<std::size_t>(hop_count), power / (power + 1.0));
    scales[0] = 1.0;
    return scales;
}

/// Relay scale factors when the relays carry two superposed streams, one per
/// direction. Each relay then receives expected power 2P+1, so honoring the
/// per-node budget requires P/(2P+1) instead of P/(P+1).
inline std::vector<double> two_way_af_scales(int hop_count, double power) {
    std::vector<double> scales(static_cast<std::size_t>(hop_count), power / (2.0 * power + 1.0));
    scales[0] = 1.0;
    return scales;
}

/// Gain, accumulated relay noise variance, and end-to-end SNR of one
/// amplify-and-forward path.
struct PathMetrics {
    double gain = 0.0;       // prod |h^(n)|^2 over the hops
    double noise_var = 0.0;  // destination-referred noise variance, unit noise per hop
    double snr = 0.0;        // power * prod(scales) * gain / noise_var
};

/// Cascade gain of a path: product of per-hop coefficients.
inline std::complex<double> path_coefficient(const ChannelRealization& channel, const Path& path) {
    std::complex<double> h(1.0, 0.0);
    for (int n = 0; n < channel.hop_count(); ++n) h *= channel.hop(n)(path.at(n), path.at(n + 1));
    return h;
}

inline double effective_path_gain(const ChannelRealization& channel, const Path& path) {
    return std::norm(path_coefficient(channel, path));
}

/// End-to-end metrics for one path of an amplify-and-forward cascade.
///
/// Relay noise injected at stage m passes through hops m..N-1 and the scale
/// factors of all downstream relays, so the destination sees total noise
///   1 + sum_{m=1}^{N-1} prod_{k=m}^{N-1} scale_k * |h^(k)|^2
/// and signal power  power * prod_n scale_n * prod_n |h^(n)|^2.
inline PathMetrics path_metrics(const ChannelRealization& channel, const Path& path, double power,
                                const std::vector<double>& scales) {
    const int hops = channel.hop_count();
    PathMetrics m;
    m.gain = 1.0;
    m.noise_var = 1.0;
    double downstream = 1.0;  // prod over hops k >= current of scale_k |h^(k)|^2
    for (int n = hops - 1; n >= 0; --n) {
        const double hop_gain = std::norm(channel.hop(n)(path.at(n), path.at(n + 1)));
        m.gain *= hop_gain;
        downstream *= scales[static_cast<std::size_t>(n)] * hop_gain;
        if (n >= 1) m.noise_var += downstream;
    }
    double scale_product = 1.0;
    for (double s : scales) scale_product *= s;
    m.snr = power * scale_product * m.gain / m.noise_var;
    return m;
}

/// Draw one destination-referred noise sample of the amplify-and-forward
/// cascade along `path`: a fresh CN(0,1) draw per stage, each weighted by
/// the downstream hop coefficients and scale factors it traverses. The
/// aggregate variance equals path_metrics(...).noise_var in expectation
/// conditioned on the realization.
inline std::complex<double> synthesize_af_noise(const ChannelRealization& channel, const Path& path,
                                                const std::vector<double>& scales, RandomStream& stream) {
    const int hops = channel.hop_count();
    std::complex<double> z = stream.complex_gaussian();  // destination stage
    std::complex<double> downstream(1.0, 0.0);
    for (int n = hops - 1; n >= 1; --n) {
        downstream *= std::sqrt(scales[static_cast<std::size_t>(n)]) * channel.hop(n)(path.at(n), path.at(n + 1));
        z += downstream * stream.complex_gaussian();
    }
    return z;
}

}  // namespace relaysim
