#include "cli_config.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace fgmimo::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_real(std::string_view s) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw std::invalid_argument("'" + t + "' is not a number");
  }
  return v;
}

template <class T>
T to_integer(std::string_view s) {
  const std::string t = trim(s);
  T v{};
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size() || t.empty()) {
    throw std::invalid_argument("'" + t + "' is not an integer");
  }
  return v;
}

template <class T>
T at_least(std::string_view value, T lo) {
  const T v = to_integer<T>(value);
  if (v < lo) throw std::invalid_argument("must be >= " + std::to_string(lo));
  return v;
}

}  // namespace

std::vector<double> parse_snr_spec(std::string_view spec) {
  std::vector<double> out;
  if (spec.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const auto pos = spec.find(',', start);
      out.push_back(to_real(spec.substr(start, pos == spec.npos ? spec.npos : pos - start)));
      if (pos == spec.npos) break;
      start = pos + 1;
    }
    return out;
  }
  const auto c1 = spec.find(':');
  if (c1 == std::string_view::npos) return {to_real(spec)};
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos || spec.find(':', c2 + 1) != std::string_view::npos) {
    throw std::invalid_argument("expected A or A:S:B");
  }
  const double a = to_real(spec.substr(0, c1));
  const double step = to_real(spec.substr(c1 + 1, c2 - c1 - 1));
  const double b = to_real(spec.substr(c2 + 1));
  if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
  if (b < a) throw std::invalid_argument("end lies below start");
  // Tolerate the rounding in (b - a) / step so that 0:0.1:1 includes 1.
  const auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 100000) throw std::invalid_argument("too many points");
  for (long long k = 0; k < count; ++k) out.push_back(a + static_cast<double>(k) * step);
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const std::string line = trim(text.substr(start, nl == text.npos ? text.npos : nl - start));
    ++line_no;
    start = nl == text.npos ? text.size() + 1 : nl + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
    }
    out.emplace_back(trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)));
  }
  return out;
}

const std::vector<std::string>& setting_names() {
  static const std::vector<std::string> names{
      "experiment", "nt",   "nr",      "mod",  "snr",     "iters", "channels", "trials",
      "min-errors", "max-bits", "seed", "out", "workers", "ecv-coefficient-override"};
  return names;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  try {
    if (key == "experiment") c.kind = parse_experiment_kind(trim(value));
    else if (key == "nt") c.nt = at_least<int>(value, 1);
    else if (key == "nr") c.nr = at_least<int>(value, 1);
    else if (key == "mod") c.scheme = parse_modulation(trim(value));
    else if (key == "snr") c.snr_db_grid = parse_snr_spec(trim(value));
    else if (key == "iters") c.max_iterations = at_least<int>(value, 1);
    else if (key == "channels") c.channel_ensemble = at_least<int>(value, 1);
    else if (key == "trials") c.bit_trials_per_point = at_least<long long>(value, 1);
    else if (key == "min-errors") c.min_errors = at_least<long long>(value, 0);
    else if (key == "max-bits") c.max_bits = at_least<long long>(value, 1);
    else if (key == "seed") c.seed = to_integer<std::uint64_t>(value);
    else if (key == "out") c.output_path = trim(value);
    else if (key == "workers") c.workers = at_least<int>(value, 0);
    else if (key == "ecv-coefficient-override") {
      const std::string v = trim(value);
      if (v == "lemma1") c.ecv_coefficient = EcvCoefficient::lemma1;
      else if (v == "theorem3") c.ecv_coefficient = EcvCoefficient::theorem;
      else throw std::invalid_argument("expected lemma1 or theorem3");
    } else {
      throw std::invalid_argument("unknown setting");
    }
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("--" + key + ": " + e.what());
  }
}

}  // namespace fgmimo::cli
