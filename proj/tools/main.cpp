// fgmimo: run detector / EF-AA experiments and write CSV.
//
// Settings are resolved in this order, later wins:
//   built-in defaults < FG_MIMO_SEED (seed only) < --config file < flags

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cli_config.hpp"
#include "fgmimo/harness.hpp"
#include "fgmimo/validation.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct FlagSet {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  bool print_config = false;
};

void add_experiment_flags(CLI::App* sub, FlagSet& flags) {
  const std::map<std::string, std::string> help{
      {"nt", "transmit antennas"},
      {"nr", "receive antennas"},
      {"mod", "bpsk or qpsk"},
      {"snr", "SNR in dB: A, A:S:B or a comma list"},
      {"iters", "detector / recursion iterations"},
      {"channels", "channel ensemble size"},
      {"trials", "bit budget per BER point"},
      {"min-errors", "extend BER points until this many errors"},
      {"max-bits", "cap on bits per BER point"},
      {"seed", "64-bit seed (falls back to FG_MIMO_SEED)"},
      {"out", "CSV output path"},
      {"workers", "OpenMP threads, 0 = auto"},
      {"ecv-coefficient-override", "lemma1 or theorem3"},
  };
  const std::map<std::string, std::string> types{
      {"mod", "{bpsk,qpsk}"}, {"snr", "A|A:S:B"}, {"out", "PATH"},
      {"ecv-coefficient-override", "{lemma1,theorem3}"}};
  for (const auto& name : fgmimo::cli::setting_names()) {
    if (name == "experiment") continue;
    flags.options[name] = sub->add_option("--" + name, flags.values[name], help.at(name))
                              ->type_name(types.contains(name) ? types.at(name) : "INT");
  }
  sub->add_option("--config", flags.config_path, "key=value settings file")->type_name("PATH");
  sub->add_flag("--print-config", flags.print_config, "print the resolved settings and exit");
}

bool given(const FlagSet& flags, const std::string& name) { return flags.options.at(name)->count() > 0; }

fgmimo::ExperimentConfig resolve(const std::string& subcommand, const FlagSet& flags) {
  fgmimo::ExperimentConfig c;
  c.kind = fgmimo::parse_experiment_kind(subcommand);
  c.output_path = subcommand + ".csv";
  std::map<std::string, bool> seen;

  if (const char* env = std::getenv("FG_MIMO_SEED"); env != nullptr && *env != '\0') {
    try {
      fgmimo::cli::apply_setting(c, "seed", env);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument(std::string("FG_MIMO_SEED: '") + env + "' is not a 64-bit integer");
    }
  }
  if (!flags.config_path.empty()) {
    std::ifstream f(flags.config_path);
    if (!f) throw std::invalid_argument("--config: cannot read '" + flags.config_path + "'");
    std::stringstream text;
    text << f.rdbuf();
    for (const auto& [key, value] : fgmimo::cli::parse_config_text(text.str())) {
      if (key == "experiment") continue;  // the subcommand decides
      fgmimo::cli::apply_setting(c, key, value);
      seen[key] = true;
    }
  }
  for (const auto& [name, value] : flags.values) {
    if (given(flags, name)) {
      fgmimo::cli::apply_setting(c, name, value);
      seen[name] = true;
    }
  }
  for (const char* required : {"nt", "nr", "snr"}) {
    if (!seen[required]) throw std::invalid_argument(std::string("--") + required + " is required");
  }
  fgmimo::validate(c);
  return c;
}

int run_selftest(int workers) {
  using namespace fgmimo::validation;
  int passed = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    const CriterionResult r = run_criterion(id, Scale::smoke, workers);
    std::printf("%s %d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    passed += r.pass;
  }
  std::printf("selftest: %d passed, %d failed\n", passed, kCriterionCount - passed);
  return passed == kCriterionCount ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factor-graph MIMO detection and EF-AA experiments"};
  app.require_subcommand(1, 1);

  std::map<std::string, FlagSet> flag_sets;
  for (const char* name : {"ami-vs-iter", "ber-vs-iter", "ami-vs-snr", "ber-vs-snr", "overlay"}) {
    add_experiment_flags(app.add_subcommand(name, std::string("experiment: ") + name), flag_sets[name]);
  }
  int selftest_workers = 0;
  CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance checks at smoke scale");
  selftest->add_option("--workers", selftest_workers, "OpenMP threads, 0 = auto")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (selftest->parsed()) return run_selftest(selftest_workers);

  const std::string subcommand = app.get_subcommands().front()->get_name();
  const FlagSet& flags = flag_sets.at(subcommand);
  fgmimo::ExperimentConfig config;
  try {
    config = resolve(subcommand, flags);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.get_subcommand(subcommand)->help();
    return kExitUsage;
  }
  if (flags.print_config) {
    std::cout << fgmimo::config_text(config);
    return 0;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    const auto records = fgmimo::run_experiment(config);
    fgmimo::emit_csv(records, config.output_path);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s: digest %s, %zu rows, %.2f s, wrote %s\n", subcommand.c_str(),
                fgmimo::config_digest(config).c_str(), records.size(), secs, config.output_path.c_str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
