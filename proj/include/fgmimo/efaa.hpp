#pragma once

// Error-function-aided mutual-information recursion for the factor-graph
// detector. Instead of passing LLRs it passes their variances: each edge's
// equivalent channel variance (ECV) var_omega, the extrinsic variance
// var_psi, and the residual symbol variance implied by the decision
// probabilities of a consistent Gaussian LLR.

#include <cstdint>
#include <utility>
#include <vector>

#include "fgmimo/channel.hpp"
#include "fgmimo/modem.hpp"

namespace fgmimo {

enum class EcvCoefficient {
  theorem,  // 2 h^2 / (sum |h|^2 V + sigma_n^2), the form both algorithms use
  lemma1,   // 4 h^2 / (...) for BPSK; identical to `theorem` for QPSK
};

struct EfaaOptions {
  EcvCoefficient coefficient = EcvCoefficient::theorem;
  /// Also fill AmiTrace::per_node_information.
  bool record_per_node = false;
};

struct EfaaState {
  RealMatrix var_omega;
  RealMatrix var_psi;
  RealMatrix symbol_var;
  int iteration = 1;
  Modulation mode = Modulation::qpsk;
};

struct AmiTrace {
  std::vector<double> ami;                                // I_L per iteration
  std::vector<std::vector<double>> per_node_information;  // I_{L_l} per iteration
  double snr_db = 0.0;
  std::uint64_t channel_id = 0;
};

struct DecisionProbabilities {
  double right = 0.5;
  double wrong = 0.5;
};

/// Right/wrong hard-decision probabilities of a consistent Gaussian LLR with
/// variance var_psi: 1/2 [1 + erf(sqrt(var/8))] and 1/2 erfc(sqrt(var/8)).
DecisionProbabilities decision_probabilities(double var_psi);

/// Residual variance of one real symbol dimension given the extrinsic LLR
/// variance. `iteration` is 1-based; BPSK returns the prior 1 at t = 1.
double symbol_variance(double var_psi, Modulation mode, int iteration);

RealMatrix symbol_variance(const RealMatrix& var_psi, Modulation mode, int iteration);

/// var_omega(i,l) = c h(i,l)^2 / (sum_{l' != l} h(i,l')^2 V(i,l') + noise_var).
/// QPSK symbol variances are the half-amplitude values, which reproduces the
/// 4 h^2 / (sum h^2 [1+erf]erfc + 2 noise_var) form. noise_var is the noise
/// variance of one real dimension of the analysis model (sigma_n^2 / 2).
RealMatrix ecv_update(const RealMatrix& h_sq, double noise_var, const RealMatrix& symbol_var,
                      Modulation mode, EcvCoefficient coefficient = EcvCoefficient::theorem);

/// var_psi(i,l) = sum_{i' != i} var_omega(i',l).
RealMatrix var_psi_update(const RealMatrix& var_omega);

/// J(sqrt(variance)).
double edge_mutual_information(double variance);

struct OutputAmi {
  std::vector<double> per_node;  // I_{L_l}
  double average = 0.0;          // I_L
};

OutputAmi output_ami(const RealMatrix& var_omega);

/// Squared entries of the analysis grid: real-domain expansion for QPSK,
/// real part of H for BPSK.
RealMatrix analysis_gains(const ChannelRealization& ch, Modulation mode);

AmiTrace run_efaa(const ChannelRealization& ch, Modulation mode, int iterations,
                  const EfaaOptions& options = {});

}  // namespace fgmimo
