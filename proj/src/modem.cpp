#include "fgmimo/modem.hpp"

#include <stdexcept>
#include <string>

namespace fgmimo {

std::string_view to_string(Modulation m) { return m == Modulation::bpsk ? "bpsk" : "qpsk"; }

Modulation parse_modulation(std::string_view token) {
  if (token == "bpsk") return Modulation::bpsk;
  if (token == "qpsk") return Modulation::qpsk;
  throw std::invalid_argument("unknown modulation '" + std::string(token) + "'");
}

ComplexVector modulate(std::span<const std::uint8_t> bits, Modulation m) {
  const double amp = amplitude(m);
  auto level = [amp](std::uint8_t b) { return b ? amp : -amp; };
  if (m == Modulation::bpsk) {
    ComplexVector out(static_cast<Eigen::Index>(bits.size()));
    for (std::size_t k = 0; k < bits.size(); ++k) out(static_cast<Eigen::Index>(k)) = level(bits[k]);
    return out;
  }
  if (bits.size() % 2 != 0) throw std::invalid_argument("modulate: QPSK needs an even bit count");
  ComplexVector out(static_cast<Eigen::Index>(bits.size() / 2));
  for (std::size_t k = 0; k < bits.size() / 2; ++k) {
    out(static_cast<Eigen::Index>(k)) = {level(bits[2 * k]), level(bits[2 * k + 1])};
  }
  return out;
}

RealVector modulate_real(std::span<const std::uint8_t> bits, Modulation m) {
  const ComplexVector x = modulate(bits, m);
  if (m == Modulation::bpsk) return x.real();
  return realify(x);
}

Bits to_real_domain_order(std::span<const std::uint8_t> bits, Modulation m) {
  if (m == Modulation::bpsk) return Bits(bits.begin(), bits.end());
  if (bits.size() % 2 != 0) throw std::invalid_argument("QPSK needs an even bit count");
  const std::size_t n = bits.size() / 2;
  Bits out(bits.size());
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = bits[2 * k];
    out[n + k] = bits[2 * k + 1];
  }
  return out;
}

Bits hard_decide(std::span<const double> llr) {
  Bits out(llr.size());
  // A zero LLR resolves to 1.
  for (std::size_t k = 0; k < llr.size(); ++k) out[k] = llr[k] >= 0.0 ? 1 : 0;
  return out;
}

Bits hard_decide(const RealVector& llr) {
  return hard_decide(std::span<const double>(llr.data(), static_cast<std::size_t>(llr.size())));
}

}  // namespace fgmimo
