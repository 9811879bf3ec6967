#ifndef MTLAB_EXPONENTS_HPP
#define MTLAB_EXPONENTS_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "mtlab/error.hpp"

namespace mtlab {

/// Gamma function at n/2 for a positive integer n, via the exact recurrence
/// from Gamma(1) = 1 and Gamma(1/2) = sqrt(pi).
template <typename Scalar = double>
Scalar gamma_half_integer(int twice_argument) {
  require(twice_argument >= 1, ErrorKind::InvalidArgument, "gamma_half_integer needs a positive argument");
  Scalar value = (twice_argument % 2 == 0) ? Scalar(1) : std::sqrt(std::numbers::pi_v<Scalar>);
  for (int k = (twice_argument % 2 == 0) ? 2 : 1; k + 2 <= twice_argument; k += 2) {
    value *= Scalar(k) / Scalar(2);
  }
  return value;
}

/// Surface measure of the unit (N-1)-sphere, 2 pi^{N/2} / Gamma(N/2).
template <typename Scalar = double>
Scalar sphere_area(int N) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2, got " + std::to_string(N));
  return Scalar(2) * std::pow(std::numbers::pi_v<Scalar>, Scalar(N) / Scalar(2)) / gamma_half_integer<Scalar>(N);
}

/// Volume of the unit ball, pi^{N/2} / Gamma(N/2 + 1).
template <typename Scalar = double>
Scalar ball_volume(int N) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2, got " + std::to_string(N));
  return std::pow(std::numbers::pi_v<Scalar>, Scalar(N) / Scalar(2)) / gamma_half_integer<Scalar>(N + 2);
}

/// Critical exponential coefficient (N - t) * omega_{N-1}^{1/(N-1)} for the weight |x|^{-t}.
template <typename Scalar = double>
Scalar critical_alpha(int N, Scalar t) {
  const Scalar omega = sphere_area<Scalar>(N);
  require(t < Scalar(N), ErrorKind::WeightIntegrability, "weight exponent t must be below N");
  return (Scalar(N) - t) * std::pow(omega, Scalar(1) / Scalar(N - 1));
}

/// Unweighted Moser constant alpha_N = N * omega_{N-1}^{1/(N-1)}.
template <typename Scalar = double>
Scalar moser_alpha(int N) {
  return critical_alpha<Scalar>(N, Scalar(0));
}

template <typename Scalar = double>
Scalar conjugate_exponent(int N) {
  return Scalar(N) / Scalar(N - 1);
}

struct ExponentConfig {
  int N = 2;
  double s = 0.0;
  double t = 0.0;
  double q = 2.0;
  double alpha = 1.0;

  // Derived on construction; never serialized.
  double nprime = 2.0;
  double omega = 0.0;
  double alpha_crit = 0.0;
  bool subcritical = true;
};

/// Validates (N, s, t, q, alpha) and fills the derived constants. q defaults to N.
/// alpha at or above the critical value is accepted and flagged via `subcritical`.
ExponentConfig make_config(int N, double s, double t, std::optional<double> q, double alpha);

inline ExponentConfig make_config(int N, double s, double t, double alpha) {
  return make_config(N, s, t, std::nullopt, alpha);
}

/// Same exponents with a different alpha.
ExponentConfig with_alpha(const ExponentConfig& cfg, double alpha);

/// Flat key=value record with keys N, s, t, q, alpha (one per line).
std::string to_record(const ExponentConfig& cfg);
ExponentConfig config_from_record(const std::string& text);

}  // namespace mtlab

#endif  // MTLAB_EXPONENTS_HPP
