#include "mtlab/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

#include "mtlab/error.hpp"

namespace mtlab {

namespace {

GaussRule golub_welsch(int order) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = 2.0 * solver.eigenvectors().row(0).transpose().array().square();
  // Symmetrize to remove eigen-solver noise.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_rule(int order) {
  require(order >= 1 && order <= 256, ErrorKind::InvalidArgument, "gauss_order must be in [1, 256]");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, golub_welsch(order)).first;
  return it->second;
}

double exp_tail(int m, double x) {
  require(x >= 0.0, ErrorKind::NegativeArgument, "argument must be nonnegative");
  if (m <= 0) return std::exp(x);
  if (x < m + 1) {
    if (x == 0.0) return 0.0;
    double term = 1.0;
    for (int j = 1; j <= m; ++j) term *= x / j;
    double sum = 0.0;
    for (int j = m + 1; term > 1e-17 * sum || sum == 0.0; ++j) {
      sum += term;
      term *= x / j;
      if (term == 0.0) break;
    }
    return sum;
  }
  double partial = 0.0;
  double term = 1.0;
  for (int j = 1; j < m; ++j) {
    term *= x / j;
    partial += term;
  }
  return std::expm1(x) - partial;
}

double phi_n(int N, double x) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  return exp_tail(N - 1, x);
}

double phi_n_series(int N, double x) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  require(x >= 0.0, ErrorKind::NegativeArgument, "argument must be nonnegative");
  if (x == 0.0) return 0.0;
  double term = 1.0;
  for (int j = 1; j <= N - 1; ++j) term *= x / j;
  double sum = 0.0;
  for (int j = N; term > 1e-17 * sum || sum == 0.0; ++j) {
    sum += term;
    term *= x / j;
    if (term == 0.0) break;
  }
  return sum;
}

double phi_n_closed(int N, double x) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  require(x >= 0.0, ErrorKind::NegativeArgument, "argument must be nonnegative");
  double partial = 0.0;
  double term = 1.0;
  for (int j = 1; j <= N - 2; ++j) {
    term *= x / j;
    partial += term;
  }
  return std::expm1(x) - partial;
}

namespace {

struct Integrand {
  int N;
  double nprime;
  IntegralSpec spec;

  double value(double u) const {
    const double a = std::abs(u);
    if (a == 0.0) return 0.0;
    switch (spec.mode) {
      case IntegrandMode::plain: return std::pow(a, spec.power);
      case IntegrandMode::exp_factor: return std::exp(spec.alpha * std::pow(a, nprime)) * std::pow(a, spec.power);
      case IntegrandMode::phi_series: return exp_tail(N - 1, spec.alpha * std::pow(a, nprime));
    }
    return 0.0;
  }

  double derivative(double u) const {
    const double a = std::abs(u);
    if (a == 0.0) return 0.0;
    const double sign = u > 0.0 ? 1.0 : -1.0;
    switch (spec.mode) {
      case IntegrandMode::plain: return sign * spec.power * std::pow(a, spec.power - 1.0);
      case IntegrandMode::exp_factor: {
        const double e = std::exp(spec.alpha * std::pow(a, nprime));
        return sign * e *
               (spec.power * std::pow(a, spec.power - 1.0) +
                spec.alpha * nprime * std::pow(a, nprime - 1.0) * std::pow(a, spec.power));
      }
      case IntegrandMode::phi_series:
        return sign * exp_tail(N - 2, spec.alpha * std::pow(a, nprime)) * spec.alpha * nprime *
               std::pow(a, nprime - 1.0);
    }
    return 0.0;
  }
};

Integrand make_integrand(int N, const IntegralSpec& spec) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  require(spec.weight_exponent < N, ErrorKind::WeightIntegrability, "weight exponent must be below N");
  require(spec.mode == IntegrandMode::phi_series || spec.power >= 1.0, ErrorKind::InvalidArgument,
          "integrand power must be at least 1");
  return Integrand{N, conjugate_exponent(N), spec};
}

void check_options(const QuadratureOptions& opts) {
  require(opts.rel_tol > 0.0 && opts.rel_tol < 1.0, ErrorKind::InvalidArgument, "quad.rel_tol must be in (0, 1)");
  require(opts.max_depth >= 0, ErrorKind::InvalidArgument, "quad.max_depth must be nonnegative");
}

bool agrees(double coarse, double fine, double rel_tol) {
  const double diff = std::abs(coarse - fine);
  return diff <= rel_tol * std::abs(fine) || diff <= 1e-300;
}

// Integral over [a, b] inside cell i of g(u) r^m, with u linear between the cell nodes.
struct CellSum {
  double value = 0.0;
  double d_left = 0.0;
  double d_right = 0.0;
};

template <bool WithGrad>
struct LinearCell {
  const Integrand& g;
  const GaussRule& rule;
  double r0, r1, v0, v1, m;

  CellSum gauss(double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double width = r1 - r0;
    CellSum s;
    for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) {
      const double r = mid + half * rule.nodes[k];
      const double lambda = (r - r0) / width;
      const double u = v0 + lambda * (v1 - v0);
      const double jac = rule.weights[k] * half * std::pow(r, m);
      s.value += jac * g.value(u);
      if constexpr (WithGrad) {
        const double du = jac * g.derivative(u);
        s.d_left += du * (1.0 - lambda);
        s.d_right += du * lambda;
      }
    }
    return s;
  }

  CellSum adapt(double a, double b, const CellSum& whole, int depth, const QuadratureOptions& opts) const {
    const double mid = 0.5 * (a + b);
    const CellSum left = gauss(a, mid);
    const CellSum right = gauss(mid, b);
    CellSum halves{left.value + right.value, left.d_left + right.d_left, left.d_right + right.d_right};
    if (agrees(whole.value, halves.value, opts.rel_tol)) return halves;
    if (depth >= opts.max_depth) {
      throw Error(ErrorKind::NonConvergentRefinement, "cell refinement did not reach quad.rel_tol");
    }
    const CellSum l = adapt(a, mid, left, depth + 1, opts);
    const CellSum r = adapt(mid, b, right, depth + 1, opts);
    return {l.value + r.value, l.d_left + r.d_left, l.d_right + r.d_right};
  }
};

template <bool WithGrad>
double radial_integral(const RadialProfile& p, const Integrand& g, const QuadratureOptions& opts,
                       Eigen::VectorXd* gradient) {
  check_options(opts);
  const GaussRule& rule = gauss_rule(opts.gauss_order);
  const double omega = sphere_area(g.N);
  const double m = g.N - 1.0 - g.spec.weight_exponent;
  const auto& r = p.radii();
  const auto& v = p.values();
  const double plateau_measure = std::pow(r[0], m + 1.0) / (m + 1.0);
  double total = g.value(v[0]) * plateau_measure;
  if constexpr (WithGrad) {
    gradient->setZero(p.size());
    (*gradient)[0] += g.derivative(v[0]) * plateau_measure;
  }
  for (Eigen::Index i = 0; i + 1 < p.size(); ++i) {
    if (v[i] == 0.0 && v[i + 1] == 0.0) continue;
    const LinearCell<WithGrad> cell{g, rule, r[i], r[i + 1], v[i], v[i + 1], m};
    const CellSum whole = cell.gauss(r[i], r[i + 1]);
    const CellSum s = cell.adapt(r[i], r[i + 1], whole, 0, opts);
    total += s.value;
    if constexpr (WithGrad) {
      (*gradient)[i] += s.d_left;
      (*gradient)[i + 1] += s.d_right;
    }
  }
  if constexpr (WithGrad) *gradient *= omega;
  return omega * total;
}

// Scalar adaptive Gauss for smooth f on [a, b].
template <typename F>
double adaptive_gauss(const F& f, double a, double b, const GaussRule& rule, const QuadratureOptions& opts) {
  auto gauss = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return s * half;
  };
  auto recurse = [&](auto&& self, double lo, double hi, double whole, int depth) -> double {
    const double mid = 0.5 * (lo + hi);
    const double left = gauss(lo, mid);
    const double right = gauss(mid, hi);
    if (agrees(whole, left + right, opts.rel_tol)) return left + right;
    if (depth >= opts.max_depth) {
      throw Error(ErrorKind::NonConvergentRefinement, "cell refinement did not reach quad.rel_tol");
    }
    return self(self, lo, mid, left, depth + 1) + self(self, mid, hi, right, depth + 1);
  };
  return recurse(recurse, a, b, gauss(a, b), 0);
}

double composed_integral(const ComposedProfile& p, const Integrand& g, const QuadratureOptions& opts) {
  check_options(opts);
  require(p.radial_exponent > 0.0, ErrorKind::InvalidArgument, "radial exponent must be positive");
  const GaussRule& rule = gauss_rule(opts.gauss_order);
  const double omega = sphere_area(g.N);
  const double m = g.N - 1.0 - g.spec.weight_exponent;
  const double gamma = p.radial_exponent;
  const auto& r = p.base.radii();
  const auto& v = p.base.values();
  const double rho0 = std::pow(r[0], 1.0 / gamma);
  double total = g.value(p.amplitude * v[0]) * std::pow(rho0, m + 1.0) / (m + 1.0);
  for (Eigen::Index i = 0; i + 1 < p.base.size(); ++i) {
    if (v[i] == 0.0 && v[i + 1] == 0.0) continue;
    const double slope = p.base.slope(i);
    const double ri = r[i];
    const double vi = v[i];
    auto f = [&](double rho) {
      const double u = p.amplitude * (vi + slope * (std::pow(rho, gamma) - ri));
      return g.value(u) * std::pow(rho, m);
    };
    total += adaptive_gauss(f, std::pow(r[i], 1.0 / gamma), std::pow(r[i + 1], 1.0 / gamma), rule, opts);
  }
  return omega * total;
}

// b^N - a^N without cancellation for close radii.
double power_difference(double a, double b, int N) {
  return std::pow(a, N) * std::expm1(N * std::log1p((b - a) / a));
}

}  // namespace

double integrate_interval(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opts) {
  check_options(opts);
  if (a == b) return 0.0;
  return adaptive_gauss(f, a, b, gauss_rule(opts.gauss_order), opts);
}

double integrate(const RadialProfile& p, int N, const IntegralSpec& spec, const QuadratureOptions& opts) {
  return radial_integral<false>(p, make_integrand(N, spec), opts, nullptr);
}

double integrate(const ComposedProfile& p, int N, const IntegralSpec& spec, const QuadratureOptions& opts) {
  return composed_integral(p, make_integrand(N, spec), opts);
}

IntegralWithGradient integrate_with_gradient(const RadialProfile& p, int N, const IntegralSpec& spec,
                                             const QuadratureOptions& opts) {
  IntegralWithGradient out;
  out.value = radial_integral<true>(p, make_integrand(N, spec), opts, &out.gradient);
  return out;
}

double weighted_power_integral(const RadialProfile& p, int N, double power, double weight,
                               const QuadratureOptions& opts) {
  return integrate(p, N, IntegralSpec{power, weight, 0.0, IntegrandMode::plain}, opts);
}

double weighted_power_integral(const ComposedProfile& p, int N, double power, double weight,
                               const QuadratureOptions& opts) {
  return integrate(p, N, IntegralSpec{power, weight, 0.0, IntegrandMode::plain}, opts);
}

double weighted_norm(const RadialProfile& p, int N, double power, double weight, const QuadratureOptions& opts) {
  return std::pow(weighted_power_integral(p, N, power, weight, opts), 1.0 / power);
}

double weighted_norm(const ComposedProfile& p, int N, double power, double weight,
                     const QuadratureOptions& opts) {
  return std::pow(weighted_power_integral(p, N, power, weight, opts), 1.0 / power);
}

double grad_energy(const RadialProfile& p, int N) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  const auto& r = p.radii();
  double total = 0.0;
  for (Eigen::Index i = 0; i + 1 < p.size(); ++i) {
    const double s = std::abs(p.slope(i));
    if (s == 0.0) continue;
    total += std::pow(s, N) * power_difference(r[i], r[i + 1], N);
  }
  return sphere_area(N) * total / N;
}

Eigen::VectorXd grad_energy_gradient(const RadialProfile& p, int N) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  const auto& r = p.radii();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.size());
  for (Eigen::Index i = 0; i + 1 < p.size(); ++i) {
    const double s = p.slope(i);
    if (s == 0.0) continue;
    const double width = r[i + 1] - r[i];
    const double d = N * std::pow(std::abs(s), N - 1) * (s > 0.0 ? 1.0 : -1.0) * power_difference(r[i], r[i + 1], N) /
                     (N * width);
    grad[i] -= d;
    grad[i + 1] += d;
  }
  return grad * sphere_area(N);
}

double grad_energy(const ComposedProfile& p, int N, const QuadratureOptions& opts) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  check_options(opts);
  const GaussRule& rule = gauss_rule(opts.gauss_order);
  const double gamma = p.radial_exponent;
  const auto& r = p.base.radii();
  double total = 0.0;
  for (Eigen::Index i = 0; i + 1 < p.base.size(); ++i) {
    const double slope = p.base.slope(i);
    if (slope == 0.0) continue;
    auto f = [&](double rho) {
      const double d = p.amplitude * slope * gamma * std::pow(rho, gamma - 1.0);
      return std::pow(std::abs(d), N) * std::pow(rho, N - 1.0);
    };
    total += adaptive_gauss(f, std::pow(r[i], 1.0 / gamma), std::pow(r[i + 1], 1.0 / gamma), rule, opts);
  }
  return sphere_area(N) * total;
}

double grad_norm(const RadialProfile& p, int N) { return std::pow(grad_energy(p, N), 1.0 / N); }

double grad_norm(const ComposedProfile& p, int N, const QuadratureOptions& opts) {
  return std::pow(grad_energy(p, N, opts), 1.0 / N);
}

double exp_functional(const RadialProfile& p, const ExponentConfig& cfg, double power, double weight,
                      const QuadratureOptions& opts) {
  return integrate(p, cfg.N, IntegralSpec{power, weight, cfg.alpha, IntegrandMode::exp_factor}, opts);
}

double exp_functional(const ComposedProfile& p, const ExponentConfig& cfg, double power, double weight,
                      const QuadratureOptions& opts) {
  return integrate(p, cfg.N, IntegralSpec{power, weight, cfg.alpha, IntegrandMode::exp_factor}, opts);
}

double phi_functional(const RadialProfile& p, const ExponentConfig& cfg, double weight,
                      const QuadratureOptions& opts) {
  return integrate(p, cfg.N, IntegralSpec{1.0, weight, cfg.alpha, IntegrandMode::phi_series}, opts);
}

double phi_functional(const ComposedProfile& p, const ExponentConfig& cfg, double weight,
                      const QuadratureOptions& opts) {
  return integrate(p, cfg.N, IntegralSpec{1.0, weight, cfg.alpha, IntegrandMode::phi_series}, opts);
}

}  // namespace mtlab
