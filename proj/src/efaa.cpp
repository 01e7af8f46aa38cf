#include "fgmimo/efaa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fgmimo/detector.hpp"
#include "fgmimo/numerics.hpp"

namespace fgmimo {

namespace {

void require_variance(double v, const char* what) {
  if (std::isnan(v) || v < 0.0) throw std::domain_error(std::string(what) + ": negative variance");
}

}  // namespace

DecisionProbabilities decision_probabilities(double var_psi) {
  require_variance(var_psi, "decision_probabilities");
  if (std::isinf(var_psi)) return {1.0, 0.0};
  const double z = std::sqrt(var_psi / 8.0);
  return {0.5 * (1.0 + fgmimo::erf(z)), 0.5 * fgmimo::erfc(z)};
}

double symbol_variance(double var_psi, Modulation mode, int iteration) {
  require_variance(var_psi, "symbol_variance");
  if (iteration < 1) throw std::invalid_argument("symbol_variance: iteration is 1-based");
  if (mode == Modulation::bpsk && iteration == 1) return 1.0;
  if (std::isinf(var_psi)) return 0.0;
  const double z = std::sqrt(var_psi / 8.0);
  // (1 + erf) erfc == 1 - erf^2 without the cancellation as erf -> 1.
  const double v = std::min(1.0, (1.0 + std::erf(z)) * std::erfc(z));
  return mode == Modulation::bpsk ? v : 0.5 * v;
}

RealMatrix symbol_variance(const RealMatrix& var_psi, Modulation mode, int iteration) {
  RealMatrix out(var_psi.rows(), var_psi.cols());
  for (Eigen::Index k = 0; k < var_psi.size(); ++k) {
    out.data()[k] = symbol_variance(var_psi.data()[k], mode, iteration);
  }
  return out;
}

RealMatrix ecv_update(const RealMatrix& h_sq, double noise_var, const RealMatrix& symbol_var,
                      Modulation mode, EcvCoefficient coefficient) {
  if (h_sq.rows() != symbol_var.rows() || h_sq.cols() != symbol_var.cols()) {
    throw std::invalid_argument("ecv_update: grid shapes differ");
  }
  if (!(noise_var > 0.0)) throw std::domain_error("ecv_update: noise variance must be > 0");
  const double numerator =
      (mode == Modulation::bpsk && coefficient == EcvCoefficient::lemma1) ? 4.0 : 2.0;
  const Eigen::Index rows = h_sq.rows();
  const Eigen::Index cols = h_sq.cols();
  RealMatrix out(rows, cols);
  std::vector<double> suffix(static_cast<std::size_t>(cols) + 1);
  for (Eigen::Index i = 0; i < rows; ++i) {
    suffix[static_cast<std::size_t>(cols)] = 0.0;
    for (Eigen::Index l = cols - 1; l >= 0; --l) {
      suffix[static_cast<std::size_t>(l)] =
          suffix[static_cast<std::size_t>(l) + 1] + h_sq(i, l) * symbol_var(i, l);
    }
    double prefix = 0.0;
    for (Eigen::Index l = 0; l < cols; ++l) {
      const double interference = prefix + suffix[static_cast<std::size_t>(l) + 1];
      out(i, l) = numerator * h_sq(i, l) / (interference + noise_var);
      prefix += h_sq(i, l) * symbol_var(i, l);
    }
  }
  return out;
}

RealMatrix var_psi_update(const RealMatrix& var_omega) {
  const Eigen::Index rows = var_omega.rows();
  const Eigen::Index cols = var_omega.cols();
  RealMatrix out(rows, cols);
  std::vector<double> suffix(static_cast<std::size_t>(rows) + 1);
  for (Eigen::Index l = 0; l < cols; ++l) {
    suffix[static_cast<std::size_t>(rows)] = 0.0;
    for (Eigen::Index i = rows - 1; i >= 0; --i) {
      suffix[static_cast<std::size_t>(i)] = suffix[static_cast<std::size_t>(i) + 1] + var_omega(i, l);
    }
    double prefix = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
      out(i, l) = prefix + suffix[static_cast<std::size_t>(i) + 1];
      prefix += var_omega(i, l);
    }
  }
  return out;
}

double edge_mutual_information(double variance) {
  require_variance(variance, "edge_mutual_information");
  if (std::isinf(variance)) return 1.0;
  return j_function(std::sqrt(variance));
}

OutputAmi output_ami(const RealMatrix& var_omega) {
  OutputAmi out;
  out.per_node.resize(static_cast<std::size_t>(var_omega.cols()));
  double sum = 0.0;
  for (Eigen::Index l = 0; l < var_omega.cols(); ++l) {
    const double mi = edge_mutual_information(var_omega.col(l).sum());
    out.per_node[static_cast<std::size_t>(l)] = mi;
    sum += mi;
  }
  out.average = var_omega.cols() > 0 ? sum / static_cast<double>(var_omega.cols()) : 0.0;
  return out;
}

RealMatrix analysis_gains(const ChannelRealization& ch, Modulation mode) {
  const RealChannel model = mode == Modulation::qpsk ? to_real_domain(ch) : to_real_part(ch);
  return model.hr.array().square().matrix();
}

AmiTrace run_efaa(const ChannelRealization& ch, Modulation mode, int iterations,
                  const EfaaOptions& options) {
  if (iterations < 1) throw std::invalid_argument("run_efaa: need at least one iteration");
  AmiTrace trace;
  trace.snr_db = ch.snr_db;
  trace.ami.reserve(static_cast<std::size_t>(iterations));

  const RealMatrix h_sq = analysis_gains(ch, mode);
  const double noise_var = ch.sigma_n_sq / 2.0;
  EfaaState state;
  state.mode = mode;
  state.var_psi = RealMatrix::Zero(h_sq.rows(), h_sq.cols());

  for (int t = 1; t <= iterations; ++t) {
    state.iteration = t;
    state.symbol_var = symbol_variance(state.var_psi, mode, t);
    RealMatrix var_omega = ecv_update(h_sq, noise_var, state.symbol_var, mode, options.coefficient);
    // Identical ECVs imply identical var_psi and therefore a fixed point: the
    // remaining iterations would reproduce this one exactly.
    const bool stationary = t > 2 && var_omega == state.var_omega;
    state.var_omega = std::move(var_omega);
    state.var_psi = var_psi_update(state.var_omega);
    OutputAmi out = output_ami(state.var_omega);
    trace.ami.push_back(out.average);
    if (options.record_per_node) trace.per_node_information.push_back(std::move(out.per_node));
    if (stationary) {
      while (static_cast<int>(trace.ami.size()) < iterations) {
        trace.ami.push_back(trace.ami.back());
        if (options.record_per_node) {
          trace.per_node_information.push_back(trace.per_node_information.back());
        }
      }
      break;
    }
  }
  return trace;
}

}  // namespace fgmimo
