#include "fgmimo/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fgmimo {

RealChannel detection_model(const ChannelRealization& ch, Modulation m) {
  return m == Modulation::qpsk ? to_real_domain(ch) : to_real_part(ch);
}

MessageGrid init_messages(int rows, int cols, Modulation m) {
  MessageGrid g;
  g.omega = RealMatrix::Zero(rows, cols);
  g.psi = RealMatrix::Zero(rows, cols);
  g.prob_plus = RealMatrix::Constant(rows, cols, 0.5);
  g.mu_g = RealMatrix::Zero(rows, cols);
  g.sigma_g_sq = RealMatrix::Zero(rows, cols);
  g.output_llr = RealVector::Zero(cols);
  g.amp = amplitude(m);
  return g;
}

void on_update(MessageGrid& grid, const RealChannel& ch, const RealVector& y,
               const DetectorOptions& options) {
  const int rows = grid.rows();
  const int cols = grid.cols();
  if (ch.hr.rows() != rows || ch.hr.cols() != cols || y.size() != rows) {
    throw std::invalid_argument("on_update: dimension mismatch");
  }
  const double amp = grid.amp;
  const double amp_sq = amp * amp;
  std::vector<double> mean_term(cols), var_term(cols), suffix_mean(cols + 1), suffix_var(cols + 1);

  for (int i = 0; i < rows; ++i) {
    for (int l = 0; l < cols; ++l) {
      const double p = grid.prob_plus(i, l);
      const double h = ch.hr(i, l);
      const double mean = amp * (2.0 * p - 1.0);
      const double var = amp_sq - mean * mean;
      mean_term[l] = h * mean;
      var_term[l] = h * h * std::max(var, 0.0);
    }
    // Prefix/suffix sums keep each edge's own term out of its interference.
    suffix_mean[cols] = 0.0;
    suffix_var[cols] = 0.0;
    for (int l = cols - 1; l >= 0; --l) {
      suffix_mean[l] = suffix_mean[l + 1] + mean_term[l];
      suffix_var[l] = suffix_var[l + 1] + var_term[l];
    }
    double prefix_mean = 0.0;
    double prefix_var = 0.0;
    for (int l = 0; l < cols; ++l) {
      const double mu = prefix_mean + suffix_mean[l + 1];
      double sigma_sq = prefix_var + suffix_var[l + 1] + ch.noise_var;
      if (!(sigma_sq >= ch.noise_var)) {
        sigma_sq = ch.noise_var;
        ++grid.variance_floor_hits;
      }
      grid.mu_g(i, l) = mu;
      grid.sigma_g_sq(i, l) = sigma_sq;
      const double fresh = 2.0 * amp * ch.hr(i, l) * (y(i) - mu) / sigma_sq;
      grid.omega(i, l) =
          options.damping > 0.0 ? (1.0 - options.damping) * fresh + options.damping * grid.omega(i, l)
                                : fresh;
      prefix_mean += mean_term[l];
      prefix_var += var_term[l];
    }
  }
}

void vn_update(MessageGrid& grid, const DetectorOptions& options) {
  const int rows = grid.rows();
  const int cols = grid.cols();
  std::vector<double> suffix(rows + 1);
  for (int l = 0; l < cols; ++l) {
    suffix[rows] = 0.0;
    for (int i = rows - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + grid.omega(i, l);
    double prefix = 0.0;
    for (int i = 0; i < rows; ++i) {
      const double psi = prefix + suffix[i + 1];
      grid.psi(i, l) = psi;
      const double clipped = std::clamp(psi, -options.llr_clip, options.llr_clip);
      grid.prob_plus(i, l) = 1.0 / (1.0 + std::exp(-clipped));
      prefix += grid.omega(i, l);
    }
    grid.output_llr(l) = suffix[0];
  }
}

DetectionResult detect(const RealChannel& ch, const RealVector& y, Modulation m,
                       const DetectorOptions& options) {
  if (options.max_iterations < 1) throw std::invalid_argument("detect: need at least one iteration");
  MessageGrid grid = init_messages(static_cast<int>(ch.hr.rows()), static_cast<int>(ch.hr.cols()), m);
  DetectionResult result;
  result.per_iteration_llr.reserve(static_cast<std::size_t>(options.max_iterations));
  for (int t = 0; t < options.max_iterations; ++t) {
    on_update(grid, ch, y, options);
    vn_update(grid, options);
    result.per_iteration_llr.push_back(grid.output_llr);
    result.iterations_run = t + 1;
    if (options.early_stop && t > 0) {
      const auto& prev = result.per_iteration_llr[result.per_iteration_llr.size() - 2];
      if ((grid.output_llr - prev).cwiseAbs().maxCoeff() < options.stop_tolerance) break;
    }
  }
  result.bits = hard_decide(grid.output_llr);
  result.variance_floor_hits = grid.variance_floor_hits;
  return result;
}

}  // namespace fgmimo
