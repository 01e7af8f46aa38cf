#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "fgmimo/channel.hpp"

namespace fgmimo {

using Bits = std::vector<std::uint8_t>;

enum class Modulation { bpsk, qpsk };

/// Amplitude of one real dimension: 1 for BPSK, 1/sqrt(2) for QPSK.
constexpr double amplitude(Modulation m) {
  return m == Modulation::bpsk ? 1.0 : 1.0 / std::numbers::sqrt2;
}

constexpr int bits_per_symbol(Modulation m) { return m == Modulation::bpsk ? 1 : 2; }

/// Prior variance of one real dimension (1 for BPSK, 1/2 for QPSK).
constexpr double prior_symbol_variance(Modulation m) {
  return amplitude(m) * amplitude(m);
}

std::string_view to_string(Modulation m);
/// Parses "bpsk" / "qpsk"; throws std::invalid_argument otherwise.
Modulation parse_modulation(std::string_view token);

/// Bit 1 -> +amplitude, bit 0 -> -amplitude. QPSK consumes bits in
/// (real, imag) pairs, one complex symbol per pair.
ComplexVector modulate(std::span<const std::uint8_t> bits, Modulation m);

/// Real-domain symbol vector, [Re(x); Im(x)] for QPSK and x for BPSK.
RealVector modulate_real(std::span<const std::uint8_t> bits, Modulation m);

/// Reorders symbol-ordered QPSK bits into real-domain (stacked) order, so
/// that element k of the result is carried by real dimension k.
Bits to_real_domain_order(std::span<const std::uint8_t> bits, Modulation m);

/// 1 where llr >= 0, 0 where llr < 0.
Bits hard_decide(std::span<const double> llr);
Bits hard_decide(const RealVector& llr);

}  // namespace fgmimo
