#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "fgmimo/harness.hpp"

using namespace fgmimo;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small() {
  ExperimentConfig c;
  c.nt = c.nr = 4;
  c.snr_db_grid = {8.0};
  c.max_iterations = 6;
  c.channel_ensemble = 20;
  c.bit_trials_per_point = 4000;
  c.min_errors = 0;
  c.max_bits = 4000;
  return c;
}

TrialSetup setup_of(const std::vector<ComplexMatrix>& channels, const ExperimentConfig& c) {
  TrialSetup s;
  s.channels = &channels;
  s.nt = c.nt;
  s.nr = c.nr;
  s.scheme = c.scheme;
  s.snr_db = c.snr_db_grid.front();
  s.seed = c.seed;
  s.detector.max_iterations = c.max_iterations;
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("noiseless single antenna makes no errors") {
  for (Modulation m : {Modulation::bpsk, Modulation::qpsk}) {
    ExperimentConfig c = small();
    c.nt = c.nr = 1;
    c.scheme = m;
    c.snr_db_grid = {120.0};
    const auto curves = run_ber(c);
    for (long long e : curves.front().tally.errors) CHECK(e == 0);
  }
}

TEST_CASE("BER runs are deterministic") {
  const ExperimentConfig c = small();
  const auto a = run_ber(c), b = run_ber(c);
  CHECK(a.front().tally.errors == b.front().tally.errors);
  CHECK(a.front().tally.bits == b.front().tally.bits);
  ExperimentConfig d = c;
  d.seed = 8;
  CHECK(run_ber(d).front().tally.errors != a.front().tally.errors);
}

TEST_CASE("serial and parallel kernels agree") {
  ExperimentConfig c = small();
  const auto channels = ensemble_channels(c);
  const TrialSetup s = setup_of(channels, c);
  const BerTally serial = ber_trials_serial(s, 0, 500);
  for (int w : {1, 2, 3, 8}) {
    const BerTally par = ber_trials_parallel(s, 0, 500, w);
    CHECK(par.errors == serial.errors);
    CHECK(par.bits == serial.bits);
    CHECK(par.trials == serial.trials);
  }
  // Splitting a block does not change the result.
  BerTally left = ber_trials_serial(s, 0, 200), right = ber_trials_serial(s, 200, 300);
  for (std::size_t k = 0; k < left.errors.size(); ++k) CHECK(left.errors[k] + right.errors[k] == serial.errors[k]);

  const auto a = ensemble_ami_serial(channels, 4, 4, Modulation::qpsk, 6.0, 8);
  for (int w : {1, 2, 5}) CHECK(ensemble_ami_parallel(channels, 4, 4, Modulation::qpsk, 6.0, 8, {}, w) == a);

  ExperimentConfig one = c, many = c;
  one.workers = 1;
  many.workers = 4;
  CHECK(run_ber(one).front().tally.errors == run_ber(many).front().tally.errors);
  CHECK(run_ami(one).front().ami == run_ami(many).front().ami);
}

TEST_CASE("trials reuse the ensemble cyclically") {
  ExperimentConfig c = small();
  c.channel_ensemble = 3;
  const auto channels = ensemble_channels(c);
  REQUIRE(channels.size() == 3);
  CHECK(channels[1] == ensemble_channel(c.seed, c.nt, c.nr, 1));
  CHECK(channels[0] != channels[1]);
  std::vector<ComplexMatrix> empty;
  TrialSetup s = setup_of(empty, c);
  CHECK_THROWS_AS(ber_trials_serial(s, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ensemble_ami_serial(empty, 4, 4, Modulation::qpsk, 0.0, 3), std::invalid_argument);
}

TEST_CASE("BER budget extension") {
  ExperimentConfig c = small();
  c.snr_db_grid = {30.0};
  c.bit_trials_per_point = 800;
  c.max_bits = 4000;
  c.min_errors = 1'000'000'000;
  // Never enough errors, so the point stops at the cap.
  CHECK(run_ber(c).front().tally.bits == 4000);

  c.min_errors = 0;
  CHECK(run_ber(c).front().tally.bits == 800);

  // A cap below the base budget does not truncate it.
  c.min_errors = 1'000'000'000;
  c.max_bits = 10;
  CHECK(run_ber(c).front().tally.bits == 800);

  // Low SNR collects errors quickly and stops at the base budget.
  c.snr_db_grid = {-5.0};
  c.min_errors = 5;
  c.max_bits = 100000;
  const auto t = run_ber(c).front().tally;
  CHECK(t.bits == 800);
  CHECK(t.errors.back() >= 5);
}

TEST_CASE("bits are counted per real dimension") {
  ExperimentConfig c = small();
  c.nt = 3;
  c.nr = 5;
  c.bit_trials_per_point = 600;
  const auto q = run_ber(c).front().tally;
  CHECK(q.bits == q.trials * 6);
  c.scheme = Modulation::bpsk;
  const auto b = run_ber(c).front().tally;
  CHECK(b.bits == b.trials * 3);
}

TEST_CASE("CSV layout") {
  ExperimentConfig c = small();
  c.kind = ExperimentKind::overlay;
  c.snr_db_grid = {4.0, 10.0};
  const auto rows = run_experiment(c);
  CHECK(rows.size() == 12);
  const std::string text = format_csv(rows);
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    CHECK(std::count(line.begin(), line.end(), ',') == 11);
  }
  CHECK(n == 13);
  const auto back = parse_csv(text);
  REQUIRE(back.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(back[k].experiment == "overlay");
    CHECK(back[k].iteration == rows[k].iteration);
    CHECK(back[k].snr_db == rows[k].snr_db);
    CHECK(back[k].bit_errors == rows[k].bit_errors);
    CHECK(back[k].bits_total == rows[k].bits_total);
    REQUIRE(back[k].ami.has_value());
    CHECK(*back[k].ami == doctest::Approx(*rows[k].ami).epsilon(1e-8));
    CHECK(*back[k].ber == doctest::Approx(*rows[k].ber).epsilon(1e-8));
    CHECK(back[k].seed == c.seed);
  }
}

TEST_CASE("CSV fields that do not apply stay empty") {
  ExperimentConfig c = small();
  c.kind = ExperimentKind::ami_vs_snr;
  c.snr_db_grid = {0.0, 5.0, 10.0};
  const auto rows = run_experiment(c);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.iteration == c.max_iterations);
    CHECK_FALSE(r.ber.has_value());
    CHECK_FALSE(r.bit_errors.has_value());
    CHECK(r.trials == c.channel_ensemble);
  }
  const auto back = parse_csv(format_csv(rows));
  CHECK_FALSE(back[0].ber.has_value());
  CHECK(back[0].ami.has_value());

  c.kind = ExperimentKind::ber_vs_iter;
  c.snr_db_grid = {6.0};
  const auto ber_rows = run_experiment(c);
  CHECK(ber_rows.size() == static_cast<std::size_t>(c.max_iterations));
  for (const auto& r : ber_rows) CHECK_FALSE(r.ami.has_value());
}

TEST_CASE("CSV parse errors") {
  CHECK_THROWS_AS(parse_csv(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv("a,b\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\nber_vs_iter,qpsk,4\n"), std::invalid_argument);
}

TEST_CASE("emit_csv") {
  const fs::path dir = fs::temp_directory_path() / "fgmimo_test_harness";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path p = dir / "out.csv";
  CHECK_THROWS_AS(emit_csv({}, p.string()), std::invalid_argument);
  CHECK_FALSE(fs::exists(p));

  ExperimentConfig c = small();
  const auto rows = run_experiment(c);
  emit_csv(rows, p.string());
  CHECK(slurp(p) == format_csv(rows));

  const std::string bad = (dir / "missing" / "out.csv").string();
  try {
    emit_csv(rows, bad);
    FAIL("expected a write error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(bad) != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("convergence SNR") {
  ExperimentConfig c;
  c.nt = c.nr = 4;
  c.max_iterations = 20;
  c.channel_ensemble = 60;
  c.snr_db_grid.clear();
  for (int s = -10; s <= 30; s += 2) c.snr_db_grid.push_back(s);
  CHECK(convergence_snr(c, 0.0) == -10.0);

  const auto s = convergence_snr(c, 0.99);
  REQUIRE(s.has_value());
  CHECK(*s >= -10.0);
  CHECK(*s <= 30.0);
  CHECK(std::round(*s * 4.0) == *s * 4.0);
  // Final AMI sits just below the threshold one grid step earlier.
  const auto curves = run_ami(c);
  const auto first_hit = std::find_if(curves.begin(), curves.end(),
                                      [](const AmiCurve& a) { return a.ami.back() >= 0.99; });
  REQUIRE(first_hit != curves.end());
  CHECK(*s <= first_hit->snr_db);
  if (first_hit != curves.begin()) CHECK(*s >= std::prev(first_hit)->snr_db);

  ExperimentConfig low = c;
  low.snr_db_grid = {-10.0, -8.0, -6.0};
  CHECK_FALSE(convergence_snr(low, 0.999).has_value());
  CHECK(kNotConverged == "not-converged-on-grid");

  CHECK_THROWS_AS(convergence_snr(c, 1.0), std::invalid_argument);
  ExperimentConfig shuffled = c;
  shuffled.snr_db_grid = {10.0, 0.0};
  CHECK_THROWS_AS(convergence_snr(shuffled, 0.5), std::invalid_argument);
}

TEST_CASE("plateau helpers") {
  CHECK(ami_plateau_iteration({0.1, 0.5, 0.9, 0.9995, 0.9999}) == 5);
  CHECK(ami_plateau_iteration({0.5, 0.5, 0.5}) == 2);
  CHECK_FALSE(ami_plateau_iteration({0.1, 0.2, 0.3}).has_value());
  CHECK_FALSE(ami_plateau_iteration({0.7}).has_value());
  // A late jump restarts the search.
  CHECK(ami_plateau_iteration({0.5, 0.5, 0.6, 0.6}) == 4);

  CHECK(ber_plateau_iteration({0.1, 0.05, 0.049, 0.0489}) == 3);
  CHECK(ber_plateau_iteration({0.1, 0.0, 0.0}) == 3);
  CHECK_FALSE(ber_plateau_iteration({0.1, 0.05, 0.02}).has_value());
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(validate(ExperimentConfig{}));
  auto bad = [](auto edit) {
    ExperimentConfig c;
    edit(c);
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
  };
  bad([](ExperimentConfig& c) { c.nt = 0; });
  bad([](ExperimentConfig& c) { c.nr = -1; });
  bad([](ExperimentConfig& c) { c.max_iterations = 0; });
  bad([](ExperimentConfig& c) { c.channel_ensemble = 0; });
  bad([](ExperimentConfig& c) { c.bit_trials_per_point = 0; });
  bad([](ExperimentConfig& c) { c.min_errors = -1; });
  bad([](ExperimentConfig& c) { c.max_bits = 0; });
  bad([](ExperimentConfig& c) { c.snr_db_grid.clear(); });
  bad([](ExperimentConfig& c) { c.workers = -2; });
}

TEST_CASE("experiment names") {
  for (auto k : {ExperimentKind::ami_vs_iter, ExperimentKind::ber_vs_iter, ExperimentKind::ami_vs_snr,
                 ExperimentKind::ber_vs_snr, ExperimentKind::overlay}) {
    CHECK(parse_experiment_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_experiment_kind("exit_chart"), std::invalid_argument);
}

TEST_CASE("config digest") {
  ExperimentConfig a;
  const std::string d = config_digest(a);
  CHECK(d.size() == 16);
  CHECK(d.find_first_not_of("0123456789abcdef") == std::string::npos);
  ExperimentConfig b = a;
  b.workers = 7;
  CHECK(config_digest(b) == d);
  b.seed = 8;
  CHECK(config_digest(b) != d);
  CHECK(config_text(a).find("seed=7") != std::string::npos);
}
