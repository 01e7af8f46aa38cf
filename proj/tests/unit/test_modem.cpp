#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "fgmimo/modem.hpp"
#include "fgmimo/random.hpp"

using namespace fgmimo;

TEST_CASE("BPSK mapping") {
  const Bits b{1, 0};
  const ComplexVector x = modulate(b, Modulation::bpsk);
  CHECK(x(0) == std::complex<double>(1.0, 0.0));
  CHECK(x(1) == std::complex<double>(-1.0, 0.0));
}

TEST_CASE("QPSK mapping") {
  const Bits b{1, 1};
  const ComplexVector x = modulate(b, Modulation::qpsk);
  const double a = 1.0 / std::sqrt(2.0);
  CHECK(x(0).real() == doctest::Approx(a));
  CHECK(x(0).imag() == doctest::Approx(a));
  const RealVector r = modulate_real(b, Modulation::qpsk);
  CHECK(r.size() == 2);
  CHECK(r(0) == doctest::Approx(a));
  CHECK(r(1) == doctest::Approx(a));
  CHECK_THROWS_AS(modulate(Bits{1, 0, 1}, Modulation::qpsk), std::invalid_argument);
}

TEST_CASE("unit average symbol energy") {
  Rng rng(12);
  for (Modulation m : {Modulation::bpsk, Modulation::qpsk}) {
    Bits b(20000);
    for (auto& v : b) v = static_cast<std::uint8_t>(rng() >> 63);
    const ComplexVector x = modulate(b, m);
    CHECK(x.squaredNorm() / static_cast<double>(x.size()) == doctest::Approx(1.0));
    CHECK(prior_symbol_variance(m) * (m == Modulation::qpsk ? 2.0 : 1.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("modulate is injective") {
  for (Modulation m : {Modulation::bpsk, Modulation::qpsk}) {
    std::set<std::vector<double>> seen;
    for (unsigned pattern = 0; pattern < 16; ++pattern) {
      Bits b(4);
      for (int j = 0; j < 4; ++j) b[static_cast<std::size_t>(j)] = (pattern >> j) & 1U;
      const RealVector r = modulate_real(b, m);
      seen.insert(std::vector<double>(r.data(), r.data() + r.size()));
    }
    CHECK(seen.size() == 16);
  }
}

TEST_CASE("hard decisions") {
  CHECK(hard_decide(std::vector<double>{3.2, -0.1}) == Bits{1, 0});
  CHECK(hard_decide(std::vector<double>{0.0}) == Bits{1});
  CHECK(hard_decide(std::vector<double>{-0.0}) == Bits{1});
}

TEST_CASE("hard decisions invert sign-consistent LLRs") {
  for (Modulation m : {Modulation::bpsk, Modulation::qpsk}) {
    const Bits b{1, 0, 0, 1, 1, 0};
    const RealVector r = modulate_real(b, m);
    CHECK(hard_decide(r) == to_real_domain_order(b, m));
  }
}

TEST_CASE("real-domain bit order") {
  const Bits b{1, 0, 1, 1, 0, 0};
  CHECK(to_real_domain_order(b, Modulation::qpsk) == Bits{1, 1, 0, 0, 1, 0});
  CHECK(to_real_domain_order(b, Modulation::bpsk) == b);
}

TEST_CASE("modulation names") {
  CHECK(parse_modulation("bpsk") == Modulation::bpsk);
  CHECK(parse_modulation("qpsk") == Modulation::qpsk);
  CHECK(to_string(Modulation::qpsk) == "qpsk");
  CHECK_THROWS_AS(parse_modulation("16qam"), std::invalid_argument);
}
