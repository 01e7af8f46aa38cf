#include <limits>
#include <stdexcept>

#include "fgmimo/efaa.hpp"
#include "fgmimo/validation.hpp"

namespace fgmimo::validation {

Bits ml_detect(const RealChannel& ch, const RealVector& y, Modulation m) {
  const int cols = static_cast<int>(ch.hr.cols());
  if (cols > 24) throw std::invalid_argument("ml_detect: too many hypotheses");
  if (y.size() != ch.hr.rows()) throw std::invalid_argument("ml_detect: dimension mismatch");
  const double amp = amplitude(m);
  RealVector x(cols);
  double best = std::numeric_limits<double>::infinity();
  unsigned long best_pattern = 0;
  for (unsigned long pattern = 0; pattern < (1UL << cols); ++pattern) {
    for (int j = 0; j < cols; ++j) x(j) = (pattern >> j) & 1UL ? amp : -amp;
    const double d = (y - ch.hr * x).squaredNorm();
    if (d < best) {
      best = d;
      best_pattern = pattern;
    }
  }
  Bits out(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) out[static_cast<std::size_t>(j)] = (best_pattern >> j) & 1UL;
  return out;
}

std::vector<std::vector<double>> efaa_llr_variances(const ChannelRealization& ch, Modulation mode,
                                                    int iterations) {
  const RealMatrix h_sq = analysis_gains(ch, mode);
  RealMatrix var_psi = RealMatrix::Zero(h_sq.rows(), h_sq.cols());
  std::vector<std::vector<double>> out;
  for (int t = 1; t <= iterations; ++t) {
    const RealMatrix sv = symbol_variance(var_psi, mode, t);
    const RealMatrix var_omega = ecv_update(h_sq, ch.sigma_n_sq / 2.0, sv, mode);
    std::vector<double> sums(static_cast<std::size_t>(h_sq.cols()));
    for (Eigen::Index l = 0; l < h_sq.cols(); ++l) sums[static_cast<std::size_t>(l)] = var_omega.col(l).sum();
    out.push_back(std::move(sums));
    var_psi = var_psi_update(var_omega);
  }
  return out;
}

}  // namespace fgmimo::validation
