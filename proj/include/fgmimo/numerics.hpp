#pragma once

// Special functions and quadrature used by the mutual-information analysis.
//
// The J curve fit maps the standard deviation sigma of a consistent Gaussian
// LLR (mean +-sigma^2/2, variance sigma^2) to the mutual information between
// the LLR and a uniformly distributed binary symbol.

#include <functional>

namespace fgmimo {

/// Coefficients of the piecewise J fit and its inverse.
struct JCoefficients {
  // forward fit
  double sigma_star = 1.6363;
  double a_j1 = -0.0421061;
  double b_j1 = 0.209252;
  double e_j1 = -0.00640081;
  double a_j2 = 0.00181491;
  double b_j2 = -0.142675;
  double e_j2 = -0.0822054;
  double d_j2 = 0.0549608;
  // inverse fit
  double i_star = 0.3646;
  double a_s1 = 1.09542;
  double b_s1 = 0.214217;
  double e_s1 = 2.33727;
  double a_s2 = 0.706692;
  double b_s2 = 0.386013;
  double e_s2 = -1.75017;
};

inline constexpr JCoefficients kJCoefficients{};

/// Upper end of the saturating region of J: J(sigma) = 1 for sigma >= 10.
inline constexpr double kJSaturation = 10.0;

/// Largest argument accepted by j_inverse callers that clamp at "certain".
inline constexpr double kMaxMutualInformation = 1.0 - 1e-9;

double erf(double x);
double erfc(double x);

/// Cubic branch of J, no clamping. Exposed for continuity checks.
double j_cubic_branch(double sigma);
/// Exponential branch of J, no clamping.
double j_exponential_branch(double sigma);

/// J(sigma) in [0, 1]. Throws std::domain_error for negative or NaN sigma.
double j_function(double sigma);

double j_inverse_polynomial_branch(double mi);
double j_inverse_log_branch(double mi);

/// Returns the sigma argument of J (not a variance); square it where a
/// variance is needed. Requires 0 <= mi < 1.
double j_inverse(double mi);

enum class QuadratureRule { trapezoid, simpson };

struct QuadratureSpec {
  double half_width = 12.0;  // in standard deviations
  int node_count = 20001;
  QuadratureRule rule = QuadratureRule::trapezoid;
};

/// Integrates f over [a, b] with `nodes` equally spaced samples.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int nodes, QuadratureRule rule = QuadratureRule::trapezoid);

/// Mutual information between a binary symbol and a consistent Gaussian LLR
/// with variance `variance`, by direct numerical integration.
double mutual_information_quadrature(double variance,
                                     const QuadratureSpec& spec = {});

}  // namespace fgmimo
