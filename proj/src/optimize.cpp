#include "mtlab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mtlab/error.hpp"
#include "mtlab/transforms.hpp"

namespace mtlab {

void validate(const OptimizerParams& params) {
  require(params.node_count >= 3, ErrorKind::InvalidArgument, "opt.node_count must be at least 3");
  require(params.max_iterations >= 1, ErrorKind::InvalidArgument, "opt.max_iterations must be positive");
  require(params.step_init > 0.0, ErrorKind::InvalidArgument, "opt.step_init must be positive");
  require(params.rel_tol > 0.0 && params.rel_tol < 1.0, ErrorKind::InvalidArgument, "opt.rel_tol must be in (0, 1)");
  require(params.restarts >= 1, ErrorKind::InvalidArgument, "opt.restarts must be positive");
  require(params.inner_radius > 0.0 && params.inner_radius < 1.0, ErrorKind::InvalidArgument,
          "opt.inner_radius must be in (0, 1)");
}

std::string to_json(const MaximizerResult& result) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& [it, v] : result.history) history.push_back({it, v});
  nlohmann::json nodes = nlohmann::json::array();
  const RadialProfile& p = result.best_profile;
  for (Eigen::Index i = 0; i < p.size(); ++i) nodes.push_back({p.radii()[i], p.values()[i]});
  nlohmann::json j;
  j["value"] = result.value;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["constraint_residual"] = result.constraint_residual;
  j["restart_values"] = result.restart_values;
  j["history"] = history;
  j["best_profile"] = {{"nodes", nodes}};
  return j.dump();
}

std::string history_to_csv(const MaximizerResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,value\n";
  for (const auto& [it, v] : result.history) out << it << "," << v << "\n";
  return out.str();
}

double RatioObjective::value(const RadialProfile& p) const {
  const double a = integrate(p, N, numerator, quad);
  const double b = integrate(p, N, denominator, quad);
  require(b > 0.0, ErrorKind::ZeroDenominator, "ratio denominator vanishes (zero profile?)");
  return a / std::pow(b, exponent);
}

double RatioObjective::value_and_gradient(const RadialProfile& p, Eigen::VectorXd& gradient) const {
  const IntegralWithGradient a = integrate_with_gradient(p, N, numerator, quad);
  const IntegralWithGradient b = integrate_with_gradient(p, N, denominator, quad);
  require(b.value > 0.0, ErrorKind::ZeroDenominator, "ratio denominator vanishes (zero profile?)");
  const double scale = std::pow(b.value, exponent);
  const double value = a.value / scale;
  gradient = a.gradient / scale - (exponent * value / b.value) * b.gradient;
  return value;
}

RatioObjective ratio_objective(const ExponentConfig& cfg, FunctionalKind kind, const QuadratureOptions& quad) {
  RatioObjective o;
  o.N = cfg.N;
  o.quad = quad;
  o.exponent = (cfg.N - cfg.t) / (cfg.N - cfg.s);
  switch (kind) {
    case FunctionalKind::F:
      o.numerator = {1.0, cfg.t, cfg.alpha, IntegrandMode::phi_series};
      o.denominator = {static_cast<double>(cfg.N), cfg.s, 0.0, IntegrandMode::plain};
      return o;
    case FunctionalKind::G:
      o.numerator = {static_cast<double>(cfg.N), cfg.t, cfg.alpha, IntegrandMode::exp_factor};
      o.denominator = {static_cast<double>(cfg.N), cfg.s, 0.0, IntegrandMode::plain};
      return o;
    case FunctionalKind::Q:
      require(cfg.q > cfg.N, ErrorKind::PowerViolation, "the q-power ratio needs q > N");
      o.numerator = {cfg.q, cfg.t, cfg.alpha, IntegrandMode::exp_factor};
      o.denominator = {cfg.q, cfg.s, 0.0, IntegrandMode::plain};
      return o;
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, "maximize_ratio handles F, G and Q");
}

RatioObjective at_objective(int N, double alpha, double beta, const QuadratureOptions& quad) {
  require(alpha > 0.0, ErrorKind::NonpositiveAlpha, "need alpha > 0");
  require(beta >= 0.0 && beta < N, ErrorKind::InvalidBeta, "need 0 <= beta < N");
  RatioObjective o;
  o.N = N;
  o.quad = quad;
  o.exponent = (N - beta) / N;
  o.numerator = {1.0, beta, alpha * (1.0 - beta / N), IntegrandMode::phi_series};
  o.denominator = {static_cast<double>(N), 0.0, 0.0, IntegrandMode::plain};
  return o;
}

AscentResult ascend(const AscentProblem& problem, Eigen::VectorXd x0, int max_iterations, double step_init,
                    double rel_tol) {
  AscentResult out;
  out.x = problem.retract(x0);
  Eigen::VectorXd g;
  out.value = problem.evaluate(out.x, g);
  require(std::isfinite(out.value), ErrorKind::InvalidArgument, "objective is not finite at the start point");
  out.history.emplace_back(0, out.value);
  double eta = step_init;
  Eigen::VectorXd gn, z_prev, d_prev, g_prev;
  int small = 0;
  for (int it = 1; it <= max_iterations; ++it) {
    // Polak-Ribiere combination of preconditioned gradients, reset when not an ascent direction.
    const Eigen::VectorXd z = problem.direction(out.x, g);
    Eigen::VectorXd d = z;
    if (d_prev.size() == z.size()) {
      const double beta = std::max(0.0, g.dot(z - z_prev) / g_prev.dot(z_prev));
      d = z + beta * d_prev;
      if (!(g.dot(d) > 0.0)) d = z;
    }
    const double dmax = d.cwiseAbs().maxCoeff();
    const double xmax = out.x.cwiseAbs().maxCoeff();
    auto trial = [&](double step, Eigen::VectorXd& xt, Eigen::VectorXd& gt) {
      try {
        xt = problem.retract(out.x + step * d);
        return problem.evaluate(xt, gt);
      } catch (const Error&) {
        return -std::numeric_limits<double>::infinity();
      }
    };
    bool accepted = false;
    bool shrunk = false;
    Eigen::VectorXd xn;
    double fn = 0.0;
    while (eta * dmax > 1e-15 * (1.0 + xmax)) {
      fn = trial(eta, xn, gn);
      if (std::isfinite(fn) && fn > out.value) {
        accepted = true;
        break;
      }
      eta *= 0.5;
      shrunk = true;
    }
    if (accepted && !shrunk) {
      // Expand while the value keeps rising.
      Eigen::VectorXd xt, gt;
      for (int e = 0; e < 30; ++e) {
        const double ft = trial(2.0 * eta, xt, gt);
        if (!(std::isfinite(ft) && ft > fn)) break;
        eta *= 2.0;
        fn = ft;
        xn.swap(xt);
        gn.swap(gt);
      }
    }
    out.iterations = it;
    if (!accepted) {
      if (d_prev.size() != 0 && d != z) {
        // Retry along the plain preconditioned gradient before giving up.
        d_prev.resize(0);
        eta = step_init;
        continue;
      }
      // No increase at any resolvable step: a stationary point of the discretization.
      out.converged = true;
      break;
    }
    const double rel = (fn - out.value) / std::abs(fn);
    z_prev = z;
    g_prev = g;
    d_prev = d;
    out.x = std::move(xn);
    out.value = fn;
    g = gn;
    out.history.emplace_back(it, fn);
    if (rel >= rel_tol) {
      small = 0;
    } else if (d != z) {
      // A stalled conjugate step says little; restart from the plain gradient.
      d_prev.resize(0);
      eta = step_init;
      small = 0;
    } else if (++small >= 2) {
      out.converged = true;
      break;
    }
  }
  return out;
}

namespace {

RadialProfile with_free_values(const Eigen::VectorXd& radii, const Eigen::VectorXd& x) {
  Eigen::VectorXd v(radii.size());
  v.head(x.size()) = x;
  v[v.size() - 1] = 0.0;
  return RadialProfile(radii, std::move(v));
}

// Piecewise-linear H^1 stiffness on the free nodes (the last node is pinned to 0).
Eigen::MatrixXd stiffness(const Eigen::VectorXd& r, int N) {
  const Eigen::Index free = r.size() - 1;
  const double omega = sphere_area(N);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(free, free);
  for (Eigen::Index i = 0; i + 1 < r.size(); ++i) {
    const double width = r[i + 1] - r[i];
    const double w = omega * (r[i + 1] * r[i + 1] - r[i] * r[i]) / (2.0 * width * width);
    K(i, i) += w;
    if (i + 1 < free) {
      K(i + 1, i + 1) += w;
      K(i, i + 1) -= w;
      K(i + 1, i) -= w;
    }
  }
  return K;
}

Eigen::VectorXd truncated_log_start(const Eigen::VectorXd& radii, double level, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  Eigen::VectorXd x(radii.size() - 1);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double base = std::min(-std::log(radii[i]), level);
    x[i] = std::max(base, 1e-3) * (1.0 + 0.1 * (unit_uniform(engine) - 0.5));
  }
  return x;
}

MaximizerResult single_run(const RatioObjective& objective, const Eigen::VectorXd& radii,
                           const Eigen::LDLT<Eigen::MatrixXd>& precond, const OptimizerParams& params,
                           double step_scale, const Eigen::VectorXd& x0) {
  const int N = objective.N;
  const Eigen::Index free = radii.size() - 1;
  AscentProblem problem;
  problem.retract = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double e = grad_energy(with_free_values(radii, x), N);
    require(e > 0.0, ErrorKind::InvalidArgument, "constant profile cannot be normalized");
    return x / std::pow(e, 1.0 / N);
  };
  problem.evaluate = [&](const Eigen::VectorXd& x, Eigen::VectorXd& gradient) {
    Eigen::VectorXd full;
    const double f = objective.value_and_gradient(with_free_values(radii, x), full);
    gradient = full.head(free);
    return f;
  };
  problem.direction = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& gradient) -> Eigen::VectorXd {
    const Eigen::VectorXd e = grad_energy_gradient(with_free_values(radii, x), N).head(free);
    Eigen::VectorXd d = precond.solve(gradient);
    const Eigen::VectorXd k = precond.solve(e);
    const double ek = e.dot(k);
    if (ek > 0.0) d -= (e.dot(d) / ek) * k;
    return d;
  };
  const AscentResult run =
      ascend(problem, x0, params.max_iterations, params.step_init * step_scale, params.rel_tol);

  MaximizerResult result;
  result.best_profile = with_free_values(radii, run.x);
  result.value = objective.value(result.best_profile);
  result.iterations = run.iterations;
  result.history = run.history;
  result.constraint_residual = std::abs(grad_norm(result.best_profile, N) - 1.0);
  result.converged = run.converged && result.constraint_residual <= 1e-8;
  return result;
}

}  // namespace

MaximizerResult maximize_on_grid(const RatioObjective& objective, const Eigen::VectorXd& radii,
                                 const OptimizerParams& params, double step_scale) {
  validate(params);
  require(radii.size() >= 3, ErrorKind::InvalidArgument, "grid needs at least three nodes");
  const Eigen::LDLT<Eigen::MatrixXd> precond(stiffness(radii, objective.N));
  const double span = -std::log(radii[0] / radii[radii.size() - 1]);

  std::vector<std::future<MaximizerResult>> runs;
  for (int j = 0; j < params.restarts; ++j) {
    const double level = std::pow(span, (j + 0.5) / params.restarts);
    const Eigen::VectorXd x0 = truncated_log_start(radii, level, params.seed + static_cast<std::uint64_t>(j));
    runs.push_back(std::async(std::launch::async, [&, x0] {
      return single_run(objective, radii, precond, params, step_scale, x0);
    }));
  }
  MaximizerResult best;
  std::vector<double> values;
  bool first = true;
  for (auto& f : runs) {
    MaximizerResult r = f.get();
    values.push_back(r.value);
    if (first || r.value > best.value) {
      best = std::move(r);
      first = false;
    }
  }
  best.restart_values = std::move(values);
  return best;
}

MaximizerResult maximize_ratio(const ExponentConfig& cfg, FunctionalKind kind, const OptimizerParams& params) {
  require(cfg.subcritical, ErrorKind::SupercriticalConfig,
          "alpha must be below alpha_crit; the supremum is infinite otherwise");
  validate(params);
  const RatioObjective objective = ratio_objective(cfg, kind, params.quad);
  const Eigen::VectorXd radii = geometric_grid(params.inner_radius, 1.0, params.node_count);
  return maximize_on_grid(objective, radii, params, 1.0 - cfg.alpha / cfg.alpha_crit);
}

MaximizerResult estimate_AT(int N, double alpha, double beta, const OptimizerParams& params) {
  const RatioObjective objective = at_objective(N, alpha, beta, params.quad);
  const double alpha_n = moser_alpha(N);
  require(alpha < alpha_n, ErrorKind::SupercriticalConfig, "AT needs alpha < alpha_N");
  validate(params);
  const Eigen::VectorXd radii = geometric_grid(params.inner_radius, 1.0, params.node_count);
  return maximize_on_grid(objective, radii, params, 1.0 - alpha / alpha_n);
}

namespace {

void check_mt_arguments(int N, double a, double b, double beta) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  require(a > 0.0 && b > 0.0, ErrorKind::InvalidArgument, "need a, b > 0");
  require(b <= N, ErrorKind::FinitenessViolation, "MT_{a,b} is infinite for b > N");
  require(beta >= 0.0 && beta < N, ErrorKind::InvalidBeta, "need 0 <= beta < N");
}

struct InnerPoint {
  double theta = 0.0;
  double value = -1.0;
  RadialProfile profile;
  bool converged = false;
};

InnerPoint mt_inner(int N, double a, double b, double beta, double theta, const OptimizerParams& params) {
  require(theta > 0.0 && theta < 1.0, ErrorKind::InvalidArgument, "theta must be in (0, 1)");
  const double g = std::pow(theta, 1.0 / a);
  const double m = std::pow(1.0 - theta, 1.0 / b);
  const double alpha_n = moser_alpha(N);
  const MaximizerResult at = estimate_AT(N, alpha_n * std::pow(g, conjugate_exponent(N)), beta, params);
  // u = g w(mu x) keeps ||grad u|| = g and puts ||u||_N at exactly m.
  const double mu = g * weighted_norm(at.best_profile, N, N, 0.0, params.quad) / m;
  InnerPoint point;
  point.theta = theta;
  point.profile = dilate(at.best_profile.scaled(g), mu);
  const IntegralSpec spec{1.0, beta, alpha_n * (1.0 - beta / N), IntegrandMode::phi_series};
  point.value = integrate(point.profile, N, spec, params.quad);
  point.converged = at.converged;
  return point;
}

}  // namespace

double mt_inner_value(int N, double a, double b, double beta, double theta, const OptimizerParams& params,
                      MaximizerResult* inner) {
  check_mt_arguments(N, a, b, beta);
  const InnerPoint p = mt_inner(N, a, b, beta, theta, params);
  if (inner != nullptr) {
    inner->best_profile = p.profile;
    inner->value = p.value;
    inner->converged = p.converged;
  }
  return p.value;
}

MTResult estimate_MT(int N, double a, double b, double beta, const OptimizerParams& params, double theta_lo,
                     double theta_hi, double theta_tol) {
  check_mt_arguments(N, a, b, beta);
  require(0.0 < theta_lo && theta_lo < theta_hi && theta_hi < 1.0 && theta_tol > 0.0, ErrorKind::InvalidArgument,
          "bad theta bracket");
  validate(params);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  InnerPoint best;
  bool all_converged = true;
  int evaluations = 0;
  std::vector<std::pair<int, double>> history;
  auto eval = [&](double theta) {
    InnerPoint p = mt_inner(N, a, b, beta, theta, params);
    all_converged = all_converged && p.converged;
    if (p.value > best.value) best = p;
    history.emplace_back(++evaluations, best.value);
    return p.value;
  };
  double lo = theta_lo, hi = theta_hi;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (hi - lo > theta_tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = eval(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = eval(x1);
    }
  }

  MTResult out;
  out.theta = best.theta;
  out.alpha = moser_alpha(N) * std::pow(best.theta, conjugate_exponent(N) / a);
  MaximizerResult& r = out.result;
  r.best_profile = best.profile;
  r.value = best.value;
  r.iterations = evaluations;
  r.history = std::move(history);
  r.constraint_residual = std::abs(std::pow(grad_norm(best.profile, N), a) +
                                   std::pow(weighted_norm(best.profile, N, N, 0.0, params.quad), b) - 1.0);
  r.converged = all_converged && r.constraint_residual <= 1e-8;
  return out;
}

RadialProfile plateau_knee_profile(int N, double height, double knee) {
  require(knee > 0.0 && knee < 0.5, ErrorKind::InvalidArgument, "knee radius must be in (0, 1/2)");
  require(height > 0.0, ErrorKind::InvalidArgument, "plateau height must be positive");
  Eigen::VectorXd r(3), v(3);
  r << knee, 0.5, 1.0;
  v << height, 1.0, 0.0;
  const RadialProfile p(std::move(r), std::move(v));
  return p.scaled(1.0 / grad_norm(p, N));
}

PlateauKneeScan plateau_knee_scan(const ExponentConfig& cfg, FunctionalKind kind, int height_count, int knee_count,
                                  double max_height, double min_knee, double max_knee,
                                  const QuadratureOptions& quad) {
  require(height_count >= 2 && knee_count >= 2, ErrorKind::InvalidArgument, "scan needs at least 2x2 points");
  PlateauKneeScan scan;
  scan.heights = Eigen::VectorXd::LinSpaced(height_count, max_height / height_count, max_height);
  scan.knees = geometric_grid(min_knee, max_knee, knee_count);
  scan.values.resize(height_count, knee_count);
  Eigen::Index bi = 0, bj = 0;
  for (Eigen::Index i = 0; i < height_count; ++i) {
    for (Eigen::Index j = 0; j < knee_count; ++j) {
      scan.values(i, j) = ratio(kind, plateau_knee_profile(cfg.N, scan.heights[i], scan.knees[j]), cfg, quad).value;
      if (scan.values(i, j) > scan.values(bi, bj)) {
        bi = i;
        bj = j;
      }
    }
  }
  scan.best_value = scan.values(bi, bj);
  scan.best_height = scan.heights[bi];
  scan.best_knee = scan.knees[bj];
  for (Eigen::Index i = std::max<Eigen::Index>(bi - 1, 0); i <= std::min<Eigen::Index>(bi + 1, height_count - 1);
       ++i) {
    for (Eigen::Index j = std::max<Eigen::Index>(bj - 1, 0); j <= std::min<Eigen::Index>(bj + 1, knee_count - 1);
         ++j) {
      scan.resolution = std::max(scan.resolution, std::abs(scan.values(i, j) - scan.best_value));
    }
  }
  return scan;
}

MaximizerResult maximize_plateau_knee(const ExponentConfig& cfg, FunctionalKind kind, const OptimizerParams& params,
                                      double height0, double knee0) {
  require(cfg.subcritical, ErrorKind::SupercriticalConfig,
          "alpha must be below alpha_crit; the supremum is infinite otherwise");
  validate(params);
  // x = (height, log knee)
  auto value_at = [&](const Eigen::VectorXd& x) {
    const double knee = std::exp(x[1]);
    if (!(x[0] > 0.0) || !(knee < 0.5)) return -std::numeric_limits<double>::infinity();
    return ratio(kind, plateau_knee_profile(cfg.N, x[0], knee), cfg, params.quad).value;
  };
  AscentProblem problem;
  problem.retract = [](const Eigen::VectorXd& x) { return x; };
  problem.direction = [](const Eigen::VectorXd&, const Eigen::VectorXd& g) { return g; };
  problem.evaluate = [&](const Eigen::VectorXd& x, Eigen::VectorXd& gradient) {
    gradient.resize(2);
    for (int k = 0; k < 2; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
      Eigen::VectorXd plus = x, minus = x;
      plus[k] += h;
      minus[k] -= h;
      gradient[k] = (value_at(plus) - value_at(minus)) / (2.0 * h);
    }
    if (!gradient.allFinite()) gradient.setZero();
    return value_at(x);
  };
  Eigen::VectorXd x0(2);
  x0 << height0, std::log(knee0);
  const AscentResult run = ascend(problem, x0, params.max_iterations,
                                  params.step_init * (1.0 - cfg.alpha / cfg.alpha_crit), params.rel_tol);
  MaximizerResult result;
  result.best_profile = plateau_knee_profile(cfg.N, run.x[0], std::exp(run.x[1]));
  result.value = ratio(kind, result.best_profile, cfg, params.quad).value;
  result.iterations = run.iterations;
  result.history = run.history;
  result.constraint_residual = std::abs(grad_norm(result.best_profile, cfg.N) - 1.0);
  result.converged = run.converged && result.constraint_residual <= 1e-8;
  result.restart_values = {result.value};
  return result;
}

}  // namespace mtlab
