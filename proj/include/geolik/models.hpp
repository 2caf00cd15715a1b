#pragma once

#include <string>
#include <string_view>

namespace geolik {

enum class CorrelationFamily { Exponential, Matern15, Cauchy };

// Parses the CLI/config token `exponential | matern15 | cauchy`.
// Throws std::invalid_argument on anything else.
CorrelationFamily family_from_token(std::string_view token);
std::string family_token(CorrelationFamily family);

// theta = (tau2, sigma2, range): nugget, partial sill, practical range.
struct ParamVector {
  double tau2 = 0.0;
  double sigma2 = 1.0;
  double range = 1.0;

  // Throws std::domain_error unless tau2 >= 0, sigma2 > 0, range > 0.
  void validate() const;
};

// Isotropic correlation rho(h; range), parameterized so that the
// correlation drops below 0.05 beyond h = range:
//   exponential:  exp(-3 h / range)
//   matern15:     exp(-4.7619 h / range) (1 + 4.7619 h / range)
//   cauchy:       (1 + (4.3588 h / range)^2)^-1
// Throws std::domain_error when h < 0 or range <= 0.
double correlate(CorrelationFamily family, double h, double range);

// sigma2 * rho(h; range) + tau2 * 1{h = 0}.
double covariance(CorrelationFamily family, double h, const ParamVector& theta);

}  // namespace geolik
