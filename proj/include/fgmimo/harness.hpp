#pragma once

// Monte-Carlo BER runs, ensemble-averaged EF-AA traces, convergence points
// and CSV output.
//
// Every trial and every ensemble member draws from its own substream, so the
// serial and OpenMP kernels below produce identical numbers for any worker
// count.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fgmimo/channel.hpp"
#include "fgmimo/detector.hpp"
#include "fgmimo/efaa.hpp"
#include "fgmimo/modem.hpp"

namespace fgmimo {

enum class ExperimentKind { ami_vs_iter, ber_vs_iter, ami_vs_snr, ber_vs_snr, overlay };

std::string_view to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(std::string_view token);

struct ExperimentConfig {
  int nt = 4;
  int nr = 4;
  Modulation scheme = Modulation::qpsk;
  std::vector<double> snr_db_grid{24.0};
  int max_iterations = 10;
  int channel_ensemble = 200;
  /// Bit budget per BER point before any extension.
  long long bit_trials_per_point = 1'000'000;
  /// Keep adding batches until the final iteration has this many errors...
  long long min_errors = 100;
  /// ...or the point has used this many bits.
  long long max_bits = 10'000'000;
  std::uint64_t seed = 7;
  ExperimentKind kind = ExperimentKind::ber_vs_iter;
  std::string output_path;
  int workers = 0;  // 0 = OpenMP default
  EcvCoefficient ecv_coefficient = EcvCoefficient::theorem;
};

/// Throws std::invalid_argument naming the first bad field.
void validate(const ExperimentConfig& config);

/// One CSV row. Fields that do not apply to the experiment stay empty.
struct BerRecord {
  std::string experiment;
  Modulation scheme = Modulation::qpsk;
  int nt = 0;
  int nr = 0;
  double snr_db = 0.0;
  int iteration = 0;
  std::optional<long long> trials;
  std::optional<long long> bits_total;
  std::optional<long long> bit_errors;
  std::optional<double> ber;
  std::optional<double> ami;
  std::uint64_t seed = 0;
};

/// Channel ensemble member c, independent of SNR.
ComplexMatrix ensemble_channel(std::uint64_t seed, int nt, int nr, std::uint64_t c);
std::vector<ComplexMatrix> ensemble_channels(const ExperimentConfig& config);

struct TrialSetup {
  const std::vector<ComplexMatrix>* channels = nullptr;
  int nt = 0;
  int nr = 0;
  Modulation scheme = Modulation::qpsk;
  double snr_db = 0.0;
  std::uint64_t snr_index = 0;
  std::uint64_t seed = 0;
  DetectorOptions detector;
};

/// Per-iteration error counts over a block of trials (one channel use each).
struct BerTally {
  long long trials = 0;
  long long bits = 0;
  std::vector<long long> errors;  // index t-1 for iteration t
};

/// Runs trials [first, first + count). Trial k uses channel k mod ensemble.
BerTally ber_trials_serial(const TrialSetup& setup, long long first, long long count);
BerTally ber_trials_parallel(const TrialSetup& setup, long long first, long long count,
                             int workers = 0);

/// Mean I_L trace over the ensemble at one SNR.
std::vector<double> ensemble_ami_serial(const std::vector<ComplexMatrix>& channels, int nt, int nr,
                                        Modulation scheme, double snr_db, int iterations,
                                        const EfaaOptions& options = {});
std::vector<double> ensemble_ami_parallel(const std::vector<ComplexMatrix>& channels, int nt,
                                          int nr, Modulation scheme, double snr_db,
                                          int iterations, const EfaaOptions& options = {},
                                          int workers = 0);

struct BerCurve {
  double snr_db = 0.0;
  BerTally tally;
};

std::vector<BerCurve> run_ber(const ExperimentConfig& config);

struct AmiCurve {
  double snr_db = 0.0;
  std::vector<double> ami;
};

std::vector<AmiCurve> run_ami(const ExperimentConfig& config);

/// "not-converged-on-grid" is std::nullopt. Assumes the final I_L rises with
/// SNR and bisects the grid instead of evaluating every point.
std::optional<double> convergence_snr(const ExperimentConfig& config, double ami_threshold = 0.999);
inline constexpr std::string_view kNotConverged = "not-converged-on-grid";

/// First iteration t >= 2 such that |I(s) - I(s-1)| < tol for every s >= t.
std::optional<int> ami_plateau_iteration(const std::vector<double>& ami, double tol = 1e-3);
/// Same with the relative change |B(s) - B(s-1)| / B(s-1) < rel_tol.
std::optional<int> ber_plateau_iteration(const std::vector<double>& ber, double rel_tol = 0.05);

/// Dispatches on config.kind and returns CSV rows.
std::vector<BerRecord> run_experiment(const ExperimentConfig& config);

inline constexpr std::string_view kCsvHeader =
    "experiment,scheme,nt,nr,snr_db,iteration,trials,bits_total,bit_errors,ber,ami,seed";

std::string format_csv(const std::vector<BerRecord>& records);
/// Throws std::invalid_argument on empty input (nothing is written) and
/// std::runtime_error with the path on I/O failure.
void emit_csv(const std::vector<BerRecord>& records, const std::string& path);
std::vector<BerRecord> parse_csv(std::string_view text);

/// key=value lines, one per field, in a fixed order.
std::string config_text(const ExperimentConfig& config);
/// 16 hex digits of FNV-1a over config_text.
std::string config_digest(const ExperimentConfig& config);

}  // namespace fgmimo
