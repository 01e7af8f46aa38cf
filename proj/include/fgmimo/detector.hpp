#pragma once

// Factor-graph iterative MIMO detector with Gaussian interference
// approximation. Observation nodes (received real dimensions, rows) and
// variable nodes (transmitted real dimensions, columns) exchange LLR
// messages over every edge of the fully connected graph.

#include <vector>

#include "fgmimo/channel.hpp"
#include "fgmimo/modem.hpp"

namespace fgmimo {

/// Per-edge belief state. All grids are rows x cols (observation x variable).
struct MessageGrid {
  RealMatrix omega;       // observation -> variable LLRs
  RealMatrix psi;         // variable -> observation extrinsic LLRs
  RealMatrix prob_plus;   // P(x = +amplitude) implied by psi
  RealMatrix mu_g;        // interference mean seen on each edge
  RealMatrix sigma_g_sq;  // interference-plus-noise variance on each edge
  RealVector output_llr;  // L_l, sum of omega over the column
  double amp = 1.0;
  long long variance_floor_hits = 0;

  int rows() const { return static_cast<int>(omega.rows()); }
  int cols() const { return static_cast<int>(omega.cols()); }
};

struct DetectorOptions {
  int max_iterations = 10;
  double llr_clip = 50.0;
  /// Weight of the previous omega in a convex update; 0 disables damping.
  double damping = 0.0;
  /// Stop once max |L(t) - L(t-1)| falls below stop_tolerance.
  bool early_stop = false;
  double stop_tolerance = 1e-6;
};

struct DetectionResult {
  std::vector<RealVector> per_iteration_llr;
  Bits bits;  // real-domain order
  int iterations_run = 0;
  long long variance_floor_hits = 0;
};

/// Real-valued detection model: real-domain expansion for QPSK, Re(H) for BPSK.
RealChannel detection_model(const ChannelRealization& ch, Modulation m);

MessageGrid init_messages(int rows, int cols, Modulation m);

/// Observation-node half iteration: interference statistics and omega.
void on_update(MessageGrid& grid, const RealChannel& ch, const RealVector& y,
               const DetectorOptions& options = {});

/// Variable-node half iteration: extrinsic psi, priors, and output LLRs.
void vn_update(MessageGrid& grid, const DetectorOptions& options = {});

DetectionResult detect(const RealChannel& ch, const RealVector& y, Modulation m,
                       const DetectorOptions& options);

}  // namespace fgmimo
