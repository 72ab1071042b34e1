// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>

#include <catch2/catch_amalgamated.hpp>

#include "relaysim/channel.hpp"
#include "relaysim/metrics.hpp"
#include "relaysim/modulation.hpp"
#include "relaysim/paths.hpp"

using namespace relaysim;

namespace {

Path make_path(std::vector<int> indices) {
    Path p;
    p.antenna_indices = std::move(indices);
    return p;
}

/// 2-hop single-antenna realization with the given hop coefficients.
ChannelRealization chain_channel(std::complex<double> h0, std::complex<double> h1) {
    ChannelRealization channel;
    channel.hops.emplace_back(1, 1);
    channel.hops.emplace_back(1, 1);
    channel.hops[0](0, 0) = h0;
    channel.hops[1](0, 0) = h1;
    return channel;
}

}  // namespace

TEST_CASE("amplify-and-forward scales normalize by expected receive power") {
    const std::vector<double> scales = af_scales(3, 4.0);
    REQUIRE(scales.size() == 3);
    CHECK(scales[0] == 1.0);
    CHECK_THAT(scales[1], Catch::Matchers::WithinRel(0.8, 1e-12));
    CHECK_THAT(scales[2], Catch::Matchers::WithinRel(0.8, 1e-12));

    const std::vector<double> shared = two_way_af_scales(2, 4.0);
    CHECK(shared[0] == 1.0);
    CHECK_THAT(shared[1], Catch::Matchers::WithinRel(4.0 / 9.0, 1e-12));
}

TEST_CASE("path coefficient is the product of hop coefficients") {
    const ChannelRealization channel = chain_channel({0.0, 1.0}, {2.0, 0.0});
    const Path path = make_path({0, 0, 0});
    const std::complex<double> c = path_coefficient(channel, path);
    CHECK_THAT(c.real(), Catch::Matchers::WithinAbs(0.0, 1e-15));
    CHECK_THAT(c.imag(), Catch::Matchers::WithinAbs(2.0, 1e-15));
    CHECK_THAT(effective_path_gain(channel, path), Catch::Matchers::WithinRel(4.0, 1e-12));
}

TEST_CASE("worked cascade example: gain, accumulated noise, and snr") {
    // Unit first hop, second hop with squared magnitude 2, power 1. The relay
    // scale is 1/2, so the destination sees noise 1 + (1/2)*2 = 2, signal
    // 1 * (1/2) * 2 = 1, and snr 1/2.
    const ChannelRealization channel = chain_channel(1.0, std::sqrt(2.0));
    const Path path = make_path({0, 0, 0});
    const std::vector<double> scales = af_scales(2, 1.0);
    const PathMetrics m = path_metrics(channel, path, 1.0, scales);
    CHECK_THAT(m.gain, Catch::Matchers::WithinRel(2.0, 1e-12));
    CHECK_THAT(m.noise_var, Catch::Matchers::WithinRel(2.0, 1e-12));
    CHECK_THAT(m.snr, Catch::Matchers::WithinRel(0.5, 1e-12));
}

TEST_CASE("three-hop noise accumulation follows the downstream products") {
    ChannelRealization channel;
    channel.hops.emplace_back(1, 1);
    channel.hops.emplace_back(1, 1);
    channel.hops.emplace_back(1, 1);
    channel.hops[0](0, 0) = 2.0;
    channel.hops[1](0, 0) = 1.0;
    channel.hops[2](0, 0) = 3.0;
    const Path path = make_path({0, 0, 0, 0});
    const std::vector<double> scales{1.0, 0.5, 0.25};
    // Stage-1 noise passes scale1*|h1|^2 * scale2*|h2|^2 = 0.5 * 2.25;
    // stage-2 noise passes scale2*|h2|^2 = 2.25.
    const PathMetrics m = path_metrics(channel, path, 2.0, scales);
    CHECK_THAT(m.gain, Catch::Matchers::WithinRel(36.0, 1e-12));
    CHECK_THAT(m.noise_var, Catch::Matchers::WithinRel(1.0 + 0.5 * 2.25 + 2.25, 1e-12));
    CHECK_THAT(m.snr, Catch::Matchers::WithinRel(2.0 * 0.125 * 36.0 / 4.375, 1e-12));
}

TEST_CASE("synthesized relay noise matches the predicted variance") {
    RandomStream channel_stream(31, 0);
    const Topology topo = Topology::validate({3, {2, 2, 2, 2}, {}});
    const ChannelRealization channel = sample_realization(topo, channel_stream);
    const Path path = make_path({0, 1, 0, 1});
    const std::vector<double> scales = af_scales(3, 5.0);
    const PathMetrics m = path_metrics(channel, path, 5.0, scales);

    RandomStream noise_stream(31, 1);
    const int draws = 200000;
    double mean_sq = 0.0;
    for (int i = 0; i < draws; ++i) mean_sq += std::norm(synthesize_af_noise(channel, path, scales, noise_stream));
    mean_sq /= draws;
    CHECK_THAT(mean_sq, Catch::Matchers::WithinRel(m.noise_var, 0.03));
}

TEST_CASE("4-qam symbols are gray mapped with unit energy") {
    for (int bi = 0; bi < 2; ++bi)
        for (int bq = 0; bq < 2; ++bq) {
            const std::complex<double> s = qam4_modulate(bi, bq);
            CHECK_THAT(std::norm(s), Catch::Matchers::WithinRel(1.0, 1e-12));
            CHECK((s.real() < 0) == (bi == 1));
            CHECK((s.imag() < 0) == (bq == 1));
        }
}

TEST_CASE("detection undoes any complex channel rotation") {
    const std::complex<double> c(-0.3, 1.7);
    for (int bi = 0; bi < 2; ++bi)
        for (int bq = 0; bq < 2; ++bq) {
            const auto decided = qam4_detect(c * qam4_modulate(bi, bq), c);
            CHECK(decided.first == bi);
            CHECK(decided.second == bq);
        }
}

TEST_CASE("zero observation lands in the 0,0 decision region") {
    const auto decided = qam4_detect({0.0, 0.0}, {1.0, 0.0});
    CHECK(decided.first == 0);
    CHECK(decided.second == 0);
}

TEST_CASE("bit error counting") {
    CHECK(qam4_bit_errors({0, 1}, {0, 1}) == 0);
    CHECK(qam4_bit_errors({0, 1}, {1, 1}) == 1);
    CHECK(qam4_bit_errors({0, 1}, {1, 0}) == 2);
}
