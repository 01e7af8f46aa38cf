#include "fgmimo/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fgmimo/random.hpp"

namespace fgmimo {

namespace {

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string_view ecv_name(EcvCoefficient c) { return c == EcvCoefficient::lemma1 ? "lemma1" : "theorem3"; }

int thread_count(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

long long bits_per_vector(const TrialSetup& s) {
  return static_cast<long long>(s.nt) * bits_per_symbol(s.scheme);
}

void run_trial(const TrialSetup& s, long long k, std::vector<long long>& errors) {
  const auto& channels = *s.channels;
  ChannelRealization ch;
  ch.nt = s.nt;
  ch.nr = s.nr;
  ch.h = channels[static_cast<std::size_t>(k) % channels.size()];
  ch.snr_db = s.snr_db;
  ch.sigma_n_sq = noise_variance_for_snr(s.nt, s.nr, s.snr_db);

  Rng rng = substream(s.seed, stream::trial, s.snr_index, static_cast<std::uint64_t>(k));
  Bits bits(static_cast<std::size_t>(bits_per_vector(s)));
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);

  const RealChannel model = detection_model(ch, s.scheme);
  const RealVector y = transmit(model, modulate_real(bits, s.scheme), rng);
  const Bits truth = to_real_domain_order(bits, s.scheme);
  const DetectionResult r = detect(model, y, s.scheme, s.detector);
  for (std::size_t t = 0; t < r.per_iteration_llr.size(); ++t) {
    const Bits decided = hard_decide(r.per_iteration_llr[t]);
    long long e = 0;
    for (std::size_t j = 0; j < truth.size(); ++j) e += decided[j] != truth[j];
    errors[t] += e;
  }
}

BerTally empty_tally(const TrialSetup& s) {
  if (s.channels == nullptr || s.channels->empty()) {
    throw std::invalid_argument("ber trials: empty channel ensemble");
  }
  BerTally t;
  t.errors.assign(static_cast<std::size_t>(s.detector.max_iterations), 0);
  return t;
}

ChannelRealization at_snr(const ComplexMatrix& h, int nt, int nr, double snr_db) {
  ChannelRealization ch;
  ch.nt = nt;
  ch.nr = nr;
  ch.h = h;
  ch.snr_db = snr_db;
  ch.sigma_n_sq = noise_variance_for_snr(nt, nr, snr_db);
  return ch;
}

std::vector<double> mean_trace(const std::vector<std::vector<double>>& traces, int iterations) {
  std::vector<double> mean(static_cast<std::size_t>(iterations), 0.0);
  for (const auto& tr : traces) {
    for (std::size_t t = 0; t < mean.size(); ++t) mean[t] += tr[t];
  }
  for (auto& m : mean) m /= static_cast<double>(traces.size());
  return mean;
}

TrialSetup setup_for(const ExperimentConfig& c, const std::vector<ComplexMatrix>& channels,
                     std::size_t snr_index) {
  TrialSetup s;
  s.channels = &channels;
  s.nt = c.nt;
  s.nr = c.nr;
  s.scheme = c.scheme;
  s.snr_db = c.snr_db_grid[snr_index];
  s.snr_index = snr_index;
  s.seed = c.seed;
  s.detector.max_iterations = c.max_iterations;
  return s;
}

void accumulate(BerTally& into, const BerTally& part) {
  into.trials += part.trials;
  into.bits += part.bits;
  for (std::size_t t = 0; t < into.errors.size(); ++t) into.errors[t] += part.errors[t];
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
std::optional<T> opt_field(const std::string& f) {
  if (f.empty()) return std::nullopt;
  if constexpr (std::is_same_v<T, double>) return std::stod(f);
  else return static_cast<T>(std::stoll(f));
}

}  // namespace

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::ami_vs_iter: return "ami-vs-iter";
    case ExperimentKind::ber_vs_iter: return "ber-vs-iter";
    case ExperimentKind::ami_vs_snr: return "ami-vs-snr";
    case ExperimentKind::ber_vs_snr: return "ber-vs-snr";
    case ExperimentKind::overlay: return "overlay";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view token) {
  for (auto k : {ExperimentKind::ami_vs_iter, ExperimentKind::ber_vs_iter, ExperimentKind::ami_vs_snr,
                 ExperimentKind::ber_vs_snr, ExperimentKind::overlay}) {
    if (to_string(k) == token) return k;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(token) + "'");
}

void validate(const ExperimentConfig& c) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  need(c.nt >= 1, "nt must be >= 1");
  need(c.nr >= 1, "nr must be >= 1");
  need(c.max_iterations >= 1, "iters must be >= 1");
  need(c.channel_ensemble >= 1, "channels must be >= 1");
  need(c.bit_trials_per_point >= 1, "trials must be >= 1");
  need(c.min_errors >= 0, "min_errors must be >= 0");
  need(c.max_bits >= 1, "max_bits must be >= 1");
  need(c.workers >= 0, "workers must be >= 0");
  need(!c.snr_db_grid.empty(), "snr grid is empty");
  for (double s : c.snr_db_grid) need(std::isfinite(s), "snr values must be finite");
}

ComplexMatrix ensemble_channel(std::uint64_t seed, int nt, int nr, std::uint64_t c) {
  Rng rng = substream(seed, stream::channel, c);
  return sample_channel(nt, nr, rng);
}

std::vector<ComplexMatrix> ensemble_channels(const ExperimentConfig& config) {
  std::vector<ComplexMatrix> out(static_cast<std::size_t>(config.channel_ensemble));
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = ensemble_channel(config.seed, config.nt, config.nr, c);
  return out;
}

BerTally ber_trials_serial(const TrialSetup& setup, long long first, long long count) {
  BerTally tally = empty_tally(setup);
  for (long long k = first; k < first + count; ++k) run_trial(setup, k, tally.errors);
  tally.trials = count;
  tally.bits = count * bits_per_vector(setup);
  return tally;
}

BerTally ber_trials_parallel(const TrialSetup& setup, long long first, long long count, int workers) {
  BerTally tally = empty_tally(setup);
#pragma omp parallel num_threads(thread_count(workers))
  {
    std::vector<long long> local(tally.errors.size(), 0);
#pragma omp for schedule(dynamic, 16)
    for (long long k = first; k < first + count; ++k) run_trial(setup, k, local);
#pragma omp critical
    for (std::size_t t = 0; t < local.size(); ++t) tally.errors[t] += local[t];
  }
  tally.trials = count;
  tally.bits = count * bits_per_vector(setup);
  return tally;
}

std::vector<double> ensemble_ami_serial(const std::vector<ComplexMatrix>& channels, int nt, int nr,
                                        Modulation scheme, double snr_db, int iterations,
                                        const EfaaOptions& options) {
  if (channels.empty()) throw std::invalid_argument("ensemble_ami: empty channel ensemble");
  std::vector<std::vector<double>> traces(channels.size());
  for (std::size_t c = 0; c < channels.size(); ++c) {
    traces[c] = run_efaa(at_snr(channels[c], nt, nr, snr_db), scheme, iterations, options).ami;
  }
  return mean_trace(traces, iterations);
}

std::vector<double> ensemble_ami_parallel(const std::vector<ComplexMatrix>& channels, int nt, int nr,
                                          Modulation scheme, double snr_db, int iterations,
                                          const EfaaOptions& options, int workers) {
  if (channels.empty()) throw std::invalid_argument("ensemble_ami: empty channel ensemble");
  std::vector<std::vector<double>> traces(channels.size());
  const long long n = static_cast<long long>(channels.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(workers))
  for (long long c = 0; c < n; ++c) {
    const auto idx = static_cast<std::size_t>(c);
    traces[idx] = run_efaa(at_snr(channels[idx], nt, nr, snr_db), scheme, iterations, options).ami;
  }
  // Summed in ensemble order so the mean does not depend on scheduling.
  return mean_trace(traces, iterations);
}

std::vector<BerCurve> run_ber(const ExperimentConfig& config) {
  validate(config);
  const auto channels = ensemble_channels(config);
  std::vector<BerCurve> out;
  for (std::size_t s = 0; s < config.snr_db_grid.size(); ++s) {
    const TrialSetup setup = setup_for(config, channels, s);
    const long long bpv = bits_per_vector(setup);
    const long long base = (config.bit_trials_per_point + bpv - 1) / bpv;
    const long long cap = (std::max(config.max_bits, config.bit_trials_per_point) + bpv - 1) / bpv;
    auto block = [&](long long first, long long count) {
      return config.workers == 1 ? ber_trials_serial(setup, first, count)
                                 : ber_trials_parallel(setup, first, count, config.workers);
    };
    BerCurve curve;
    curve.snr_db = setup.snr_db;
    curve.tally = block(0, base);
    while (curve.tally.errors.back() < config.min_errors && curve.tally.trials < cap) {
      accumulate(curve.tally, block(curve.tally.trials, std::min(base, cap - curve.tally.trials)));
    }
    out.push_back(std::move(curve));
  }
  return out;
}

std::vector<AmiCurve> run_ami(const ExperimentConfig& config) {
  validate(config);
  const auto channels = ensemble_channels(config);
  EfaaOptions options;
  options.coefficient = config.ecv_coefficient;
  std::vector<AmiCurve> out;
  for (double snr : config.snr_db_grid) {
    AmiCurve curve;
    curve.snr_db = snr;
    curve.ami = config.workers == 1
                    ? ensemble_ami_serial(channels, config.nt, config.nr, config.scheme, snr,
                                          config.max_iterations, options)
                    : ensemble_ami_parallel(channels, config.nt, config.nr, config.scheme, snr,
                                            config.max_iterations, options, config.workers);
    out.push_back(std::move(curve));
  }
  return out;
}

std::optional<double> convergence_snr(const ExperimentConfig& config, double ami_threshold) {
  validate(config);
  if (!(ami_threshold >= 0.0 && ami_threshold < 1.0)) {
    throw std::invalid_argument("convergence_snr: threshold must lie in [0, 1)");
  }
  const auto& grid = config.snr_db_grid;
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw std::invalid_argument("convergence_snr: snr grid must be ascending");
  }
  const auto channels = ensemble_channels(config);
  EfaaOptions options;
  options.coefficient = config.ecv_coefficient;
  std::map<std::size_t, double> cache;
  auto final_ami = [&](std::size_t k) {
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    const auto trace = ensemble_ami_parallel(channels, config.nt, config.nr, config.scheme, grid[k],
                                             config.max_iterations, options, config.workers);
    return cache[k] = trace.back();
  };

  if (ami_threshold == 0.0) return grid.front();
  const std::size_t last = grid.size() - 1;
  if (final_ami(last) < ami_threshold) return std::nullopt;
  // Invariant: final_ami(hi) >= threshold, and every index <= lo falls short.
  long long lo = -1;
  std::size_t hi = last;
  while (static_cast<long long>(hi) - lo > 1) {
    const auto mid = static_cast<std::size_t>((lo + static_cast<long long>(hi)) / 2);
    if (final_ami(mid) >= ami_threshold) hi = mid;
    else lo = static_cast<long long>(mid);
  }
  if (hi == 0) return grid.front();
  const double a = grid[hi - 1], b = grid[hi];
  const double fa = final_ami(hi - 1), fb = final_ami(hi);
  double x = fb > fa ? a + (ami_threshold - fa) / (fb - fa) * (b - a) : b;
  x = std::clamp(std::round(x * 4.0) / 4.0, a, b);
  return x;
}

std::optional<int> ami_plateau_iteration(const std::vector<double>& ami, double tol) {
  const int n = static_cast<int>(ami.size());
  int t = n + 1;
  for (int s = n; s >= 2; --s) {
    if (std::abs(ami[s - 1] - ami[s - 2]) < tol) t = s;
    else break;
  }
  if (t > n) return std::nullopt;
  return t;
}

std::optional<int> ber_plateau_iteration(const std::vector<double>& ber, double rel_tol) {
  const int n = static_cast<int>(ber.size());
  auto steady = [&](int s) {
    const double prev = ber[s - 2], cur = ber[s - 1];
    if (prev == 0.0) return cur == 0.0;
    return std::abs(cur - prev) / prev < rel_tol;
  };
  int t = n + 1;
  for (int s = n; s >= 2; --s) {
    if (steady(s)) t = s;
    else break;
  }
  if (t > n) return std::nullopt;
  return t;
}

std::vector<BerRecord> run_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::string name(to_string(config.kind));
  auto base = [&](double snr, int iteration) {
    BerRecord r;
    r.experiment = name;
    r.scheme = config.scheme;
    r.nt = config.nt;
    r.nr = config.nr;
    r.snr_db = snr;
    r.iteration = iteration;
    r.seed = config.seed;
    return r;
  };
  auto fill_ber = [](BerRecord& r, const BerTally& tally, int iteration) {
    r.trials = tally.trials;
    r.bits_total = tally.bits;
    r.bit_errors = tally.errors[static_cast<std::size_t>(iteration - 1)];
    r.ber = static_cast<double>(*r.bit_errors) / static_cast<double>(tally.bits);
  };

  const bool wants_ami = config.kind == ExperimentKind::ami_vs_iter ||
                         config.kind == ExperimentKind::ami_vs_snr || config.kind == ExperimentKind::overlay;
  const bool wants_ber = config.kind == ExperimentKind::ber_vs_iter ||
                         config.kind == ExperimentKind::ber_vs_snr || config.kind == ExperimentKind::overlay;
  const bool final_only = config.kind == ExperimentKind::ami_vs_snr || config.kind == ExperimentKind::ber_vs_snr;

  std::vector<AmiCurve> ami;
  std::vector<BerCurve> ber;
  if (wants_ami) ami = run_ami(config);
  if (wants_ber) ber = run_ber(config);

  std::vector<BerRecord> out;
  for (std::size_t s = 0; s < config.snr_db_grid.size(); ++s) {
    const int first = final_only ? config.max_iterations : 1;
    for (int t = first; t <= config.max_iterations; ++t) {
      BerRecord r = base(config.snr_db_grid[s], t);
      if (wants_ber) fill_ber(r, ber[s].tally, t);
      if (wants_ami) {
        if (!wants_ber) r.trials = config.channel_ensemble;
        r.ami = ami[s].ami[static_cast<std::size_t>(t - 1)];
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::string format_csv(const std::vector<BerRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    auto opt_int = [](const std::optional<long long>& v) { return v ? std::to_string(*v) : std::string(); };
    auto opt_real = [](const std::optional<double>& v) { return v ? fmt_real(*v) : std::string(); };
    out += r.experiment + ',' + std::string(to_string(r.scheme)) + ',' + std::to_string(r.nt) + ',' +
           std::to_string(r.nr) + ',' + fmt_real(r.snr_db) + ',' + std::to_string(r.iteration) + ',' +
           opt_int(r.trials) + ',' + opt_int(r.bits_total) + ',' + opt_int(r.bit_errors) + ',' +
           opt_real(r.ber) + ',' + opt_real(r.ami) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

void emit_csv(const std::vector<BerRecord>& records, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("emit_csv: no records to write");
  const std::string text = format_csv(records);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<BerRecord> parse_csv(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kCsvHeader) throw std::invalid_argument("parse_csv: bad header");
  std::vector<BerRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 12) throw std::invalid_argument("parse_csv: line " + std::to_string(i + 1) + " has wrong arity");
    BerRecord r;
    r.experiment = f[0];
    r.scheme = parse_modulation(f[1]);
    r.nt = std::stoi(f[2]);
    r.nr = std::stoi(f[3]);
    r.snr_db = std::stod(f[4]);
    r.iteration = std::stoi(f[5]);
    r.trials = opt_field<long long>(f[6]);
    r.bits_total = opt_field<long long>(f[7]);
    r.bit_errors = opt_field<long long>(f[8]);
    r.ber = opt_field<double>(f[9]);
    r.ami = opt_field<double>(f[10]);
    r.seed = std::stoull(f[11]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string config_text(const ExperimentConfig& c) {
  std::ostringstream s;
  s << "experiment=" << to_string(c.kind) << '\n'
    << "nt=" << c.nt << '\n'
    << "nr=" << c.nr << '\n'
    << "mod=" << to_string(c.scheme) << '\n'
    << "snr=";
  for (std::size_t k = 0; k < c.snr_db_grid.size(); ++k) s << (k ? "," : "") << fmt_real(c.snr_db_grid[k]);
  s << '\n'
    << "iters=" << c.max_iterations << '\n'
    << "channels=" << c.channel_ensemble << '\n'
    << "trials=" << c.bit_trials_per_point << '\n'
    << "min-errors=" << c.min_errors << '\n'
    << "max-bits=" << c.max_bits << '\n'
    << "seed=" << c.seed << '\n'
    << "ecv-coefficient-override=" << ecv_name(c.ecv_coefficient) << '\n'
    << "workers=" << c.workers << '\n'
    << "out=" << c.output_path << '\n';
  return s.str();
}

std::string config_digest(const ExperimentConfig& config) {
  // Worker count and output path do not affect results.
  ExperimentConfig c = config;
  c.workers = 0;
  c.output_path.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_text(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace fgmimo
