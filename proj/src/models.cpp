#include "geolik/models.hpp"

#include <cmath>
#include <stdexcept>

namespace geolik {

namespace {
// Practical-range scaling constants; rho(range) ~= 0.05 for each family.
constexpr double kExpScale = 3.0;
constexpr double kMaternScale = 4.7619;
constexpr double kCauchyScale = 4.3588;
}  // namespace

CorrelationFamily family_from_token(std::string_view token) {
  if (token == "exponential") return CorrelationFamily::Exponential;
  if (token == "matern15") return CorrelationFamily::Matern15;
  if (token == "cauchy") return CorrelationFamily::Cauchy;
  throw std::invalid_argument("unknown correlation family: " + std::string(token));
}

std::string family_token(CorrelationFamily family) {
  switch (family) {
    case CorrelationFamily::Exponential:
      return "exponential";
    case CorrelationFamily::Matern15:
      return "matern15";
    case CorrelationFamily::Cauchy:
      return "cauchy";
  }
  throw std::invalid_argument("invalid correlation family enum");
}

void ParamVector::validate() const {
  if (!(tau2 >= 0.0) || !std::isfinite(tau2))
    throw std::domain_error("tau2 must be finite and >= 0");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw std::domain_error("sigma2 must be finite and > 0");
  if (!(range > 0.0) || !std::isfinite(range))
    throw std::domain_error("range must be finite and > 0");
}

double correlate(CorrelationFamily family, double h, double range) {
  if (!(range > 0.0)) throw std::domain_error("range must be > 0");
  if (!(h >= 0.0)) throw std::domain_error("distance must be >= 0");
  switch (family) {
    case CorrelationFamily::Exponential:
      return std::exp(-kExpScale * h / range);
    case CorrelationFamily::Matern15: {
      const double u = kMaternScale * h / range;
      return std::exp(-u) * (1.0 + u);
    }
    case CorrelationFamily::Cauchy: {
      const double u = kCauchyScale * h / range;
      return 1.0 / (1.0 + u * u);
    }
  }
  throw std::invalid_argument("invalid correlation family enum");
}

double covariance(CorrelationFamily family, double h, const ParamVector& theta) {
  theta.validate();
  double c = theta.sigma2 * correlate(family, h, theta.range);
  if (h == 0.0) c += theta.tau2;
  return c;
}

}  // namespace geolik
