#include "fgmimo/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace fgmimo {

namespace {

void require_dims(int nt, int nr) {
  if (nt < 1 || nr < 1) throw std::invalid_argument("antenna counts must be >= 1");
}

}  // namespace

ComplexMatrix sample_channel(int nt, int nr, Rng& rng) {
  require_dims(nt, nr);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  ComplexMatrix h(nr, nt);
  for (int l = 0; l < nt; ++l) {
    for (int i = 0; i < nr; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      h(i, l) = {re, im};
    }
  }
  return h;
}

double noise_variance_for_snr(int nt, int nr, double snr_db) {
  require_dims(nt, nr);
  return static_cast<double>(nr) / std::pow(10.0, snr_db / 10.0);
}

ChannelRealization make_channel(int nt, int nr, double snr_db, Rng& rng) {
  ChannelRealization ch;
  ch.nt = nt;
  ch.nr = nr;
  ch.h = sample_channel(nt, nr, rng);
  ch.sigma_n_sq = noise_variance_for_snr(nt, nr, snr_db);
  ch.snr_db = snr_db;
  return ch;
}

RealChannel to_real_domain(const ChannelRealization& ch) {
  const int nr = static_cast<int>(ch.h.rows());
  const int nt = static_cast<int>(ch.h.cols());
  RealChannel out;
  out.hr.resize(2 * nr, 2 * nt);
  out.hr.topLeftCorner(nr, nt) = ch.h.real();
  out.hr.topRightCorner(nr, nt) = -ch.h.imag();
  out.hr.bottomLeftCorner(nr, nt) = ch.h.imag();
  out.hr.bottomRightCorner(nr, nt) = ch.h.real();
  out.noise_var = ch.sigma_n_sq / 2.0;
  return out;
}

RealChannel to_real_part(const ChannelRealization& ch) {
  return RealChannel{ch.h.real(), ch.sigma_n_sq / 2.0};
}

RealVector realify(const ComplexVector& v) {
  const auto n = v.size();
  RealVector out(2 * n);
  out.head(n) = v.real();
  out.tail(n) = v.imag();
  return out;
}

ComplexVector complexify(const RealVector& v) {
  if (v.size() % 2 != 0) throw std::invalid_argument("complexify: odd length");
  const auto n = v.size() / 2;
  ComplexVector out(n);
  out.real() = v.head(n);
  out.imag() = v.tail(n);
  return out;
}

ComplexVector complex_noise(int n, double sigma_n_sq, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma_n_sq / 2.0));
  ComplexVector out(n);
  for (int i = 0; i < n; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    out(i) = {re, im};
  }
  return out;
}

ComplexVector transmit_with_noise(const ChannelRealization& ch, const ComplexVector& x,
                                  const ComplexVector& noise) {
  if (x.size() != ch.h.cols() || noise.size() != ch.h.rows()) {
    throw std::invalid_argument("transmit: dimension mismatch");
  }
  return ch.h * x + noise;
}

RealVector transmit_with_noise(const RealChannel& ch, const RealVector& x,
                               const RealVector& noise) {
  if (x.size() != ch.hr.cols() || noise.size() != ch.hr.rows()) {
    throw std::invalid_argument("transmit: dimension mismatch");
  }
  return ch.hr * x + noise;
}

ComplexVector transmit(const ChannelRealization& ch, const ComplexVector& x, Rng& rng) {
  if (x.size() != ch.h.cols()) throw std::invalid_argument("transmit: dimension mismatch");
  return transmit_with_noise(ch, x, complex_noise(static_cast<int>(ch.h.rows()), ch.sigma_n_sq, rng));
}

RealVector transmit(const RealChannel& ch, const RealVector& x, Rng& rng) {
  if (x.size() != ch.hr.cols()) throw std::invalid_argument("transmit: dimension mismatch");
  std::normal_distribution<double> gauss(0.0, std::sqrt(ch.noise_var));
  RealVector noise(ch.hr.rows());
  for (auto& n : noise) n = gauss(rng);
  return transmit_with_noise(ch, x, noise);
}

}  // namespace fgmimo
