#pragma once

// Reference oracles and the acceptance checks built on them. Shared by the
// acceptance binary and `fgmimo selftest`.

#include <string>
#include <vector>

#include "fgmimo/channel.hpp"
#include "fgmimo/modem.hpp"

namespace fgmimo::validation {

/// Exhaustive maximum-likelihood detection over all 2^cols sign patterns of
/// the real model. Bits come back in real-domain order. cols <= 24.
Bits ml_detect(const RealChannel& ch, const RealVector& y, Modulation m);

/// Sum over i of var_omega(i, l) for every iteration, straight from the
/// recursion. Result[t-1][l].
std::vector<std::vector<double>> efaa_llr_variances(const ChannelRealization& ch, Modulation mode,
                                                    int iterations);

enum class Scale { smoke, full };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

inline constexpr int kCriterionCount = 9;

/// Runs acceptance criterion `id` (1..9). Smoke scale shrinks problem sizes
/// and, for criterion 5, switches to the 64-antenna variant.
CriterionResult run_criterion(int id, Scale scale, int workers = 0);

}  // namespace fgmimo::validation
