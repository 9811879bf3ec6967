#ifndef MTLAB_QUADRATURE_HPP
#define MTLAB_QUADRATURE_HPP

#include <Eigen/Dense>
#include <functional>

#include "mtlab/exponents.hpp"
#include "mtlab/profiles.hpp"

namespace mtlab {

struct QuadratureOptions {
  double rel_tol = 1e-9;
  int gauss_order = 16;
  int max_depth = 24;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Cached per order; safe to call concurrently.
const GaussRule& gauss_rule(int order);

/// Adaptive Gauss-Legendre on [a, b]: each piece is accepted once the rule on
/// it agrees with the rule on its two halves to opts.rel_tol.
double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts = {});

/// sum_{j >= m} x^j / j!, the exponential with its first m Taylor terms removed.
double exp_tail(int m, double x);

/// Phi_N(x) = sum_{j >= N-1} x^j / j!. Series below x = N, closed form above.
double phi_n(int N, double x);
double phi_n_series(int N, double x);
double phi_n_closed(int N, double x);

enum class IntegrandMode { plain, exp_factor, phi_series };

/// Radial integrand g(u) r^{N-1-weight}:
///   plain       |u|^power
///   exp_factor  e^{alpha |u|^{N'}} |u|^power
///   phi_series  Phi_N(alpha |u|^{N'})            (power unused)
struct IntegralSpec {
  double power = 2.0;
  double weight_exponent = 0.0;
  double alpha = 0.0;
  IntegrandMode mode = IntegrandMode::plain;
};

/// omega_{N-1} * int_0^inf g(u(r)) r^{N-1-weight} dr.
double integrate(const RadialProfile& p, int N, const IntegralSpec& spec, const QuadratureOptions& opts = {});
double integrate(const ComposedProfile& p, int N, const IntegralSpec& spec, const QuadratureOptions& opts = {});

struct IntegralWithGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;  // d value / d node value
};

/// Same value as integrate(), bit for bit, plus its derivative in the node values.
IntegralWithGradient integrate_with_gradient(const RadialProfile& p, int N, const IntegralSpec& spec,
                                             const QuadratureOptions& opts = {});

/// int |u|^power |x|^{-weight} dx and its 1/power root.
double weighted_power_integral(const RadialProfile& p, int N, double power, double weight,
                               const QuadratureOptions& opts = {});
double weighted_power_integral(const ComposedProfile& p, int N, double power, double weight,
                               const QuadratureOptions& opts = {});
double weighted_norm(const RadialProfile& p, int N, double power, double weight, const QuadratureOptions& opts = {});
double weighted_norm(const ComposedProfile& p, int N, double power, double weight,
                     const QuadratureOptions& opts = {});

/// int |grad u|^N dx. Exact cell by cell for piecewise-linear profiles.
double grad_energy(const RadialProfile& p, int N);
/// Chain rule under Gauss quadrature on the base cells.
double grad_energy(const ComposedProfile& p, int N, const QuadratureOptions& opts = {});

/// Gradient of grad_energy in the node values.
Eigen::VectorXd grad_energy_gradient(const RadialProfile& p, int N);

double grad_norm(const RadialProfile& p, int N);
double grad_norm(const ComposedProfile& p, int N, const QuadratureOptions& opts = {});

/// int e^{alpha |u|^{N'}} |u|^power |x|^{-weight} dx with alpha = cfg.alpha.
double exp_functional(const RadialProfile& p, const ExponentConfig& cfg, double power, double weight,
                      const QuadratureOptions& opts = {});
double exp_functional(const ComposedProfile& p, const ExponentConfig& cfg, double power, double weight,
                      const QuadratureOptions& opts = {});

/// int Phi_N(alpha |u|^{N'}) |x|^{-weight} dx with alpha = cfg.alpha.
double phi_functional(const RadialProfile& p, const ExponentConfig& cfg, double weight,
                      const QuadratureOptions& opts = {});
double phi_functional(const ComposedProfile& p, const ExponentConfig& cfg, double weight,
                      const QuadratureOptions& opts = {});

}  // namespace mtlab

#endif  // MTLAB_QUADRATURE_HPP
