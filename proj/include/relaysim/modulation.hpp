// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <utility>

namespace relaysim {

/// Gray-mapped 4-QAM with unit average energy. Bit b_i selects the in-phase
/// sign, b_q the quadrature sign; (0,0) maps to (1+j)/sqrt(2).
inline std::complex<double> qam4_modulate(int bit_i, int bit_q) {
    constexpr double kScale = 0.70710678118654752440;  // 1/sqrt(2)
    return {kScale * (1.0 - 2.0 * bit_i), kScale * (1.0 - 2.0 * bit_q)};
}

/// Coherent maximum-likelihood detection of one 4-QAM symbol observed as
/// y = c * s + noise. Gray mapping makes ML separable: the bits are the sign
/// decisions on conj(c) * y. Zero rotates to the (0,0) decision region.
inline std::pair<int, int> qam4_detect(std::complex<double> received, std::complex<double> coefficient) {
    const std::complex<double> z = std::conj(coefficient) * received;
    return {z.real() < 0.0 ? 1 : 0, z.imag() < 0.0 ? 1 : 0};
}

/// Bit errors (0, 1 or 2) between a transmitted pair and a decision pair.
inline int qam4_bit_errors(std::pair<int, int> sent, std::pair<int, int> decided) {
    return (sent.first != decided.first) + (sent.second != decided.second);
}

}  // namespace relaysim
