#include "fgmimo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fgmimo {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(what) + ": non-finite argument");
  }
}

// log2(1 + exp(-x)) without overflow for large |x|.
double log2_one_plus_exp_neg(double x) {
  if (x >= 0.0) return std::log1p(std::exp(-x)) / std::numbers::ln2;
  return (-x + std::log1p(std::exp(x))) / std::numbers::ln2;
}

}  // namespace

double erf(double x) {
  require_finite(x, "erf");
  return std::erf(x);
}

double erfc(double x) {
  require_finite(x, "erfc");
  return std::erfc(x);
}

double j_cubic_branch(double sigma) {
  const auto& c = kJCoefficients;
  return ((c.a_j1 * sigma + c.b_j1) * sigma + c.e_j1) * sigma;
}

double j_exponential_branch(double sigma) {
  const auto& c = kJCoefficients;
  const double exponent = ((c.a_j2 * sigma + c.b_j2) * sigma + c.e_j2) * sigma + c.d_j2;
  return 1.0 - std::exp(exponent);
}

double j_function(double sigma) {
  if (std::isnan(sigma) || sigma < 0.0) {
    throw std::domain_error("j_function: sigma must be >= 0");
  }
  if (sigma >= kJSaturation) return 1.0;
  const double value = sigma <= kJCoefficients.sigma_star ? j_cubic_branch(sigma)
                                                          : j_exponential_branch(sigma);
  // The cubic dips slightly below zero just above sigma = 0.
  return std::clamp(value, 0.0, 1.0);
}

double j_inverse_polynomial_branch(double mi) {
  const auto& c = kJCoefficients;
  return c.a_s1 * mi * mi + c.b_s1 * mi + c.e_s1 * std::sqrt(mi);
}

double j_inverse_log_branch(double mi) {
  const auto& c = kJCoefficients;
  return -c.a_s2 * std::log(c.b_s2 * (1.0 - mi)) - c.e_s2 * mi;
}

double j_inverse(double mi) {
  if (std::isnan(mi) || mi < 0.0 || mi >= 1.0) {
    throw std::domain_error("j_inverse: argument must lie in [0, 1)");
  }
  const double sigma = mi <= kJCoefficients.i_star ? j_inverse_polynomial_branch(mi)
                                                   : j_inverse_log_branch(mi);
  return std::max(sigma, 0.0);
}

double integrate(const std::function<double(double)>& f, double a, double b, int nodes,
                 QuadratureRule rule) {
  if (nodes < 2) throw std::invalid_argument("integrate: need at least two nodes");
  if (a == b) return 0.0;
  if (rule == QuadratureRule::simpson && nodes % 2 == 0) ++nodes;
  const int intervals = nodes - 1;
  const double h = (b - a) / intervals;
  double sum = 0.0;
  if (rule == QuadratureRule::trapezoid) {
    sum = 0.5 * (f(a) + f(b));
    for (int k = 1; k < intervals; ++k) sum += f(a + k * h);
    return sum * h;
  }
  sum = f(a) + f(b);
  for (int k = 1; k < intervals; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
  return sum * h / 3.0;
}

double mutual_information_quadrature(double variance, const QuadratureSpec& spec) {
  if (std::isnan(variance) || variance < 0.0) {
    throw std::domain_error("mutual_information_quadrature: variance must be >= 0");
  }
  if (variance == 0.0) return 0.0;
  const double sd = std::sqrt(variance);
  const double mean = variance / 2.0;
  const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  // Conditioned on the +1 symbol; the -1 half is its mirror image.
  auto integrand = [&](double llr) {
    const double z = (llr - mean) / sd;
    const double density = norm * std::exp(-0.5 * z * z);
    return density * (1.0 - log2_one_plus_exp_neg(llr));
  };
  const double lo = mean - spec.half_width * sd;
  const double hi = mean + spec.half_width * sd;
  const double mi = integrate(integrand, lo, hi, spec.node_count, spec.rule);
  return std::clamp(mi, 0.0, 1.0);
}

}  // namespace fgmimo
