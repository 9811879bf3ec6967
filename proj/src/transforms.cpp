#include "mtlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mtlab/error.hpp"

namespace mtlab {

ComposedProfile peel_map(const RadialProfile& p, int N, double e) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  require(e < N, ErrorKind::WeightIntegrability, "peel exponent must be below N");
  ComposedProfile v;
  v.base = p;
  v.amplitude = std::pow((N - e) / N, 1.0 / conjugate_exponent(N));
  v.radial_exponent = N / (N - e);
  return v;
}

IdentityReport verify_peel_identities(const RadialProfile& p, const ExponentConfig& cfg, double tol,
                                      const QuadratureOptions& opts) {
  const int N = cfg.N;
  const double t = cfg.t;
  const double nprime = cfg.nprime;
  const double factor = N / (N - t);
  const ComposedProfile v = peel_map(p, N, t);

  IdentityReport report;
  report.tol = tol;

  report.add("mass_N", weighted_power_integral(p, N, N, t, opts),
             std::pow(factor, N) * weighted_power_integral(v, N, N, 0.0, opts));

  const IntegralSpec phi_v{1.0, 0.0, factor * cfg.alpha, IntegrandMode::phi_series};
  report.add("phi", phi_functional(p, cfg, t, opts), factor * integrate(v, N, phi_v, opts));

  const IntegralSpec exp_v{static_cast<double>(N), 0.0, factor * cfg.alpha, IntegrandMode::exp_factor};
  report.add("exp_N", exp_functional(p, cfg, N, t, opts), std::pow(factor, N) * integrate(v, N, exp_v, opts));

  if (cfg.q > N) {
    for (const double j : {cfg.q, cfg.q + 2.0}) {
      std::ostringstream id;
      id << "power_" << j;
      report.add(id.str(),
                 weighted_power_integral(p, N, j, t, opts),
                 std::pow(factor, j / nprime + 1.0) * weighted_power_integral(v, N, j, 0.0, opts));
    }
    const IntegralSpec exp_q{cfg.q, 0.0, factor * cfg.alpha, IntegrandMode::exp_factor};
    report.add("exp_q", exp_functional(p, cfg, cfg.q, t, opts),
               std::pow(factor, cfg.q / nprime + 1.0) * integrate(v, N, exp_q, opts));
  }

  report.add("grad_norm", grad_norm(p, N), grad_norm(v, N, opts));
  return report;
}

Eigen::VectorXd peel_point(int N, double t, const Eigen::VectorXd& x) {
  require(t < N, ErrorKind::WeightIntegrability, "need t < N");
  const double norm = x.norm();
  require(norm > 0.0, ErrorKind::OriginInput, "the peel map is evaluated away from the origin");
  return std::pow(norm, t / (N - t)) * x;
}

double jacobian_det(int N, double t, const Eigen::VectorXd& x) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  require(t < N, ErrorKind::WeightIntegrability, "need t < N");
  require(x.size() == N, ErrorKind::InvalidArgument, "point dimension must equal N");
  const double norm = x.norm();
  require(norm > 0.0, ErrorKind::OriginInput, "the Jacobian is evaluated away from the origin");
  return N / (N - t) * std::pow(norm, N * t / (N - t));
}

double jacobian_det_fd(int N, double t, const Eigen::VectorXd& x) {
  require(x.size() == N, ErrorKind::InvalidArgument, "point dimension must equal N");
  const double norm = x.norm();
  require(norm > 0.0, ErrorKind::OriginInput, "the Jacobian is evaluated away from the origin");
  const double h = 1e-5 * norm;
  Eigen::MatrixXd J(N, N);
  for (int j = 0; j < N; ++j) {
    Eigen::VectorXd plus = x, minus = x;
    plus[j] += h;
    minus[j] -= h;
    J.col(j) = (peel_point(N, t, plus) - peel_point(N, t, minus)) / (2.0 * h);
  }
  return J.determinant();
}

IdentityReport verify_jacobian(int N, double t, const std::vector<Eigen::VectorXd>& points, double tol) {
  IdentityReport report;
  report.tol = tol;
  for (std::size_t i = 0; i < points.size(); ++i) {
    report.add("jacobian[" + std::to_string(i) + "]", jacobian_det_fd(N, t, points[i]),
               jacobian_det(N, t, points[i]));
  }
  return report;
}

IdentityReport verify_nonradial_gradient_bound(int N, double t, const std::vector<Eigen::VectorXd>& points,
                                               const Eigen::VectorXd& bump_center, double slack,
                                               double jacobian_tol) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  require(t < N, ErrorKind::WeightIntegrability, "need t < N");
  require(bump_center.size() == N, ErrorKind::InvalidArgument, "bump center dimension must equal N");
  const double amplitude = std::pow((N - t) / N, 1.0 / conjugate_exponent(N));
  const double bound_factor = std::pow(N / (N - t), 1.0 / N);
  auto u = [&](const Eigen::VectorXd& y) { return std::exp(-(y - bump_center).squaredNorm()); };
  auto v = [&](const Eigen::VectorXd& x) { return amplitude * u(peel_point(N, t, x)); };

  IdentityReport report;
  report.tol = slack;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::VectorXd& x = points[i];
    require(x.size() == N, ErrorKind::InvalidArgument, "point dimension must equal N");
    const double norm = x.norm();
    require(norm > 0.0, ErrorKind::OriginInput, "sample point at the origin");
    const double h = 1e-5 * norm;
    Eigen::VectorXd grad_v(N);
    for (int j = 0; j < N; ++j) {
      Eigen::VectorXd plus = x, minus = x;
      plus[j] += h;
      minus[j] -= h;
      grad_v[j] = (v(plus) - v(minus)) / (2.0 * h);
    }
    const Eigen::VectorXd y = peel_point(N, t, x);
    const Eigen::VectorXd grad_u = -2.0 * (y - bump_center) * u(y);
    const double rhs = bound_factor * std::pow(norm, t / (N - t)) * grad_u.norm();
    report.add("gradient_bound[" + std::to_string(i) + "]", grad_v.norm(), rhs, Relation::upper_bound);
    report.add("jacobian[" + std::to_string(i) + "]", jacobian_det_fd(N, t, x), jacobian_det(N, t, x),
               Relation::equality, jacobian_tol);
  }
  return report;
}

std::vector<Eigen::VectorXd> annulus_points(int N, int count, double inner, double outer, std::uint64_t seed) {
  require(N >= 2 && count >= 0 && inner >= 0.0 && outer > inner, ErrorKind::InvalidArgument, "bad annulus");
  std::mt19937_64 engine(seed);
  std::vector<Eigen::VectorXd> points;
  points.reserve(static_cast<std::size_t>(count));
  Eigen::VectorXd x(N);
  while (static_cast<int>(points.size()) < count) {
    for (int j = 0; j < N; ++j) x[j] = outer * (2.0 * unit_uniform(engine) - 1.0);
    const double norm = x.norm();
    if (norm > inner && norm < outer) points.push_back(x);
  }
  return points;
}

LogProfile::LogProfile(int N, Eigen::VectorXd t_nodes, Eigen::VectorXd w_nodes)
    : N_(N), t_(std::move(t_nodes)), w_(std::move(w_nodes)) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  require(t_.size() >= 2 && t_.size() == w_.size(), ErrorKind::InvalidArgument,
          "log profile needs at least two nodes with matching values");
  for (Eigen::Index i = 0; i < t_.size(); ++i) {
    require(std::isfinite(t_[i]) && std::isfinite(w_[i]), ErrorKind::InvalidArgument, "nodes must be finite");
    if (i > 0) require(t_[i] > t_[i - 1], ErrorKind::NonMonotoneRadii, "t nodes must be strictly increasing");
  }
  require(w_[0] == 0.0, ErrorKind::InvalidArgument, "log profile must start at value 0");
  r_ = (-t_.array() / N).exp().matrix();
}

namespace {

// Cell j of a log profile is [t_j, t_{j+1}]; w is linear in r = e^{-t/N} there.
double cell_value(const Eigen::VectorXd& r, const Eigen::VectorXd& w, Eigen::Index j, double rt) {
  return w[j] + (w[j + 1] - w[j]) * (rt - r[j]) / (r[j + 1] - r[j]);
}

}  // namespace

double LogProfile::operator()(double t) const {
  if (t <= t_[0]) return 0.0;
  const Eigen::Index last = t_.size() - 1;
  if (t >= t_[last]) return w_[last];
  const auto it = std::upper_bound(t_.data(), t_.data() + t_.size(), t);
  const Eigen::Index j = (it - t_.data()) - 1;
  return cell_value(r_, w_, j, std::exp(-t / N_));
}

double LogProfile::derivative(double t) const {
  const Eigen::Index last = t_.size() - 1;
  if (t < t_[0] || t > t_[last]) return 0.0;
  auto it = std::upper_bound(t_.data(), t_.data() + t_.size(), t);
  Eigen::Index j = (it - t_.data()) - 1;
  j = std::clamp<Eigen::Index>(j, 0, last - 1);
  const double slope = (w_[j + 1] - w_[j]) / (r_[j + 1] - r_[j]);
  return -slope * std::exp(-t / N_) / N_;
}

LogProfile LogProfile::scaled(double factor) const { return LogProfile(N_, t_, w_ * factor); }

double LogProfile::energy(const QuadratureOptions& opts) const {
  double total = 0.0;
  for (Eigen::Index j = 0; j + 1 < t_.size(); ++j) {
    const double slope = (w_[j + 1] - w_[j]) / (r_[j + 1] - r_[j]);
    if (slope == 0.0) continue;
    auto f = [&](double t) { return std::pow(std::abs(slope * std::exp(-t / N_) / N_), N_); };
    total += integrate_interval(f, t_[j], t_[j + 1], opts);
  }
  return total;
}

double LogProfile::weighted_integral(const std::function<double(double)>& g, const QuadratureOptions& opts) const {
  double total = 0.0;
  for (Eigen::Index j = 0; j + 1 < t_.size(); ++j) {
    if (w_[j] == 0.0 && w_[j + 1] == 0.0) continue;
    auto f = [&](double t) {
      const double e = std::exp(-t / N_);
      return g(cell_value(r_, w_, j, e)) * std::exp(-t);
    };
    total += integrate_interval(f, t_[j], t_[j + 1], opts);
  }
  const Eigen::Index last = t_.size() - 1;
  return total + g(w_[last]) * std::exp(-t_[last]);
}

double log_substitution_constant(int N) {
  return std::pow(static_cast<double>(N), (N - 1.0) / N) * std::pow(sphere_area(N), 1.0 / N);
}

LogProfile log_substitution(const RadialProfile& p, int N) {
  const double K = log_substitution_constant(N);
  const Eigen::Index n = p.size();
  Eigen::VectorXd t(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t[i] = -N * std::log(p.radii()[n - 1 - i]);
    w[i] = K * p.values()[n - 1 - i];
  }
  return LogProfile(N, std::move(t), std::move(w));
}

RadialProfile inverse_log_substitution(const LogProfile& w) {
  const int N = w.dimension();
  const double K = log_substitution_constant(N);
  const Eigen::Index n = w.size();
  Eigen::VectorXd r(n), v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r[i] = std::exp(-w.t_nodes()[n - 1 - i] / N);
    v[i] = w.w_nodes()[n - 1 - i] / K;
  }
  return RadialProfile(std::move(r), std::move(v));
}

IdentityReport verify_log_identities(const RadialProfile& p, int N, double alpha, double tol,
                                     const QuadratureOptions& opts) {
  require(alpha > 0.0, ErrorKind::NonpositiveAlpha, "need alpha > 0");
  const LogProfile w = log_substitution(p, N);
  const double NN = std::pow(static_cast<double>(N), N);
  const double nprime = conjugate_exponent(N);
  const double ratio = alpha / moser_alpha(N);
  const ExponentConfig cfg = make_config(N, 0.0, 0.0, alpha);

  IdentityReport report;
  report.tol = tol;
  report.add("grad_energy", grad_energy(p, N), w.energy(opts));
  report.add("mass_N", weighted_power_integral(p, N, N, 0.0, opts),
             w.weighted_integral([&](double x) { return std::pow(std::abs(x), N); }, opts) / NN);
  report.add("exp_N", exp_functional(p, cfg, N, 0.0, opts),
             w.weighted_integral(
                 [&](double x) {
                   const double a = std::abs(x);
                   return std::exp(ratio * std::pow(a, nprime)) * std::pow(a, N);
                 },
                 opts) /
                 NN);
  return report;
}

RadialProfile dilate(const RadialProfile& p, double lambda) {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorKind::NonpositiveLambda, "dilation factor must be positive");
  return RadialProfile(p.radii() / lambda, p.values());
}

RadialProfile renormalize(const RadialProfile& p, int N, double s, const QuadratureOptions& opts) {
  const double norm = weighted_norm(p, N, N, s, opts);
  require(norm > 0.0, ErrorKind::ZeroDenominator, "cannot renormalize the zero profile");
  return dilate(p, std::pow(norm, N / (N - s)));
}

double growth_constant(int N, double eps) {
  require(eps > 0.0, ErrorKind::InvalidArgument, "need eps > 0");
  const double nprime = conjugate_exponent(N);
  const double s = std::pow(std::pow(1.0 + eps, N - 1) - 1.0, -nprime);
  return std::pow(1.0 + std::pow(s, 1.0 / nprime), nprime) - (1.0 + eps) * s;
}

double crossing_threshold(const LogProfile& w) {
  const auto& t = w.t_nodes();
  const auto& v = w.w_nodes();
  const Eigen::Index last = t.size() - 1;
  if (v[last] <= 1.0) return std::numeric_limits<double>::infinity();
  Eigen::Index j = 0;
  while (v[j + 1] <= 1.0) ++j;
  // w(t_j) <= 1 < w(t_{j+1}); bisect for the crossing.
  double lo = t[j], hi = t[j + 1];
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (w(mid) <= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

ProbeResult growth_inequality_probe(const std::vector<LogProfile>& family, double beta,
                                    const std::vector<double>& epsilons, const QuadratureOptions& opts) {
  require(beta > 0.0 && beta < 1.0, ErrorKind::InvalidArgument, "need 0 < beta < 1");
  ProbeResult result;
  if (family.empty()) return result;
  const int N = family.front().dimension();
  const double nprime = conjugate_exponent(N);
  for (const double eps : epsilons) {
    result.growth.push_back({eps, 0.0, growth_constant(N, eps), 0});
  }
  const ExponentConfig cfg = make_config(N, 0.0, 0.0, beta);

  for (std::size_t m = 0; m < family.size(); ++m) {
    const LogProfile& raw = family[m];
    require(raw.dimension() == N, ErrorKind::InadmissibleProfile, "family members must share N");
    const auto& wn = raw.w_nodes();
    for (Eigen::Index i = 0; i < wn.size(); ++i) {
      require(wn[i] >= 0.0, ErrorKind::InadmissibleProfile, "member " + std::to_string(m) + " is negative");
      if (i > 0) {
        require(wn[i] >= wn[i - 1], ErrorKind::InadmissibleProfile,
                "member " + std::to_string(m) + " is not nondecreasing");
      }
    }
    const double energy = raw.energy(opts);
    require(energy > 0.0, ErrorKind::InadmissibleProfile, "member " + std::to_string(m) + " is constant");
    const LogProfile w = raw.scaled(std::pow(energy, -1.0 / N));

    const double lhs = w.weighted_integral(
        [&](double x) { return std::exp(beta * std::pow(x, nprime)) * std::pow(x, N); }, opts);
    const double rhs = w.weighted_integral([&](double x) { return std::pow(x, N); }, opts);
    SweepRecord rec;
    rec.variable = static_cast<double>(m);
    rec.numerator = lhs;
    rec.denominator = rhs;
    rec.ratio = lhs / rhs;
    rec.grad_norm = std::pow(w.energy(opts), 1.0 / N);
    rec.config = cfg;
    result.c_hat = std::max(result.c_hat, rec.ratio);
    result.records.push_back(rec);

    const double T0 = crossing_threshold(w);
    result.thresholds.push_back(T0);
    if (!std::isfinite(T0)) continue;
    // Sample each cell at its nodes and 8 interior points, plus T0 itself.
    std::vector<double> ts{T0};
    const auto& tn = w.t_nodes();
    for (Eigen::Index j = 0; j + 1 < tn.size(); ++j) {
      for (int k = 0; k <= 8; ++k) {
        const double t = tn[j] + (tn[j + 1] - tn[j]) * k / 9.0;
        if (t >= T0) ts.push_back(t);
      }
    }
    if (tn[tn.size() - 1] >= T0) ts.push_back(tn[tn.size() - 1]);
    for (auto& g : result.growth) {
      for (const double t : ts) {
        const double excess = std::pow(w(t), nprime) - (1.0 + g.epsilon) * (t - T0);
        g.fitted_c = std::max(g.fitted_c, excess);
        if (excess > g.analytic_c * (1.0 + 1e-12) + 1e-12) ++g.violations;
      }
    }
  }
  return result;
}

std::vector<LogProfile> admissible_log_family(int N, int count, std::uint64_t seed) {
  require(count >= 0, ErrorKind::InvalidArgument, "count must be nonnegative");
  std::mt19937_64 engine(seed);
  std::vector<LogProfile> family;
  family.reserve(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) {
    const int nodes = 3 + static_cast<int>(engine() % 30);
    const double inner = std::pow(10.0, -(0.5 + 5.5 * unit_uniform(engine)));
    Eigen::VectorXd radii = geometric_grid(inner, 1.0, nodes);
    Eigen::VectorXd values(nodes);
    values[nodes - 1] = 0.0;
    for (int i = nodes - 2; i >= 0; --i) {
      const double u = unit_uniform(engine);
      values[i] = values[i + 1] + u * u;
    }
    family.push_back(log_substitution(RadialProfile(std::move(radii), std::move(values)), N));
  }
  return family;
}

}  // namespace mtlab
