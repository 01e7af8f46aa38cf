#pragma once

// Flat Rayleigh MIMO channel y = Hx + n and its real-domain equivalent.

#include <Eigen/Dense>

#include "fgmimo/random.hpp"

namespace fgmimo {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct ChannelRealization {
  int nt = 0;
  int nr = 0;
  ComplexMatrix h;          // nr x nt
  double sigma_n_sq = 1.0;  // complex noise variance, both quadratures
  double snr_db = 0.0;
};

/// Real-valued model y_r = hr x_r + n_r with i.i.d. N(0, noise_var) noise.
struct RealChannel {
  RealMatrix hr;
  double noise_var = 0.5;  // per real component
};

/// nr x nt matrix of i.i.d. CN(0, 1) entries.
ComplexMatrix sample_channel(int nt, int nr, Rng& rng);

/// sigma_n^2 giving average received SNR snr_db, i.e. nr / 10^(snr_db/10).
double noise_variance_for_snr(int nt, int nr, double snr_db);

ChannelRealization make_channel(int nt, int nr, double snr_db, Rng& rng);

/// [Re H, -Im H; Im H, Re H] with per-component noise sigma_n^2 / 2.
RealChannel to_real_domain(const ChannelRealization& ch);

/// Re(H) with per-component noise sigma_n^2 / 2; the BPSK detection model.
RealChannel to_real_part(const ChannelRealization& ch);

RealVector realify(const ComplexVector& v);
ComplexVector complexify(const RealVector& v);

ComplexVector transmit(const ChannelRealization& ch, const ComplexVector& x, Rng& rng);
RealVector transmit(const RealChannel& ch, const RealVector& x, Rng& rng);

/// y = Hx + noise with caller-supplied noise.
ComplexVector transmit_with_noise(const ChannelRealization& ch, const ComplexVector& x,
                                  const ComplexVector& noise);
RealVector transmit_with_noise(const RealChannel& ch, const RealVector& x,
                               const RealVector& noise);

/// CN(0, sigma_n_sq) samples.
ComplexVector complex_noise(int n, double sigma_n_sq, Rng& rng);

}  // namespace fgmimo
