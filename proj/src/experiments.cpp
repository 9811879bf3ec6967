#include "mtlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "mtlab/error.hpp"
#include "mtlab/profiles.hpp"
#include "mtlab/quadrature.hpp"

namespace mtlab {

double sharpness_numerator_bound(const ExponentConfig& cfg, FunctionalKind kind, int k) {
  const int N = cfg.N;
  switch (kind) {
    case FunctionalKind::G: return std::pow(static_cast<double>(k), N - 1) / std::pow(N - cfg.t, N);
    case FunctionalKind::Q:
      return std::pow(cfg.omega, 1.0 - cfg.q / N) / (cfg.q - cfg.t) * std::pow(k / (N - cfg.t), cfg.q / cfg.nprime);
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

std::vector<SweepRecord> sharpness_sweep(const ExponentConfig& cfg, FunctionalKind kind, int k_min, int k_max,
                                         const QuadratureOptions& quad, LogSegmentSampling sampling) {
  require(k_min >= 1 && k_max >= k_min, ErrorKind::InvalidArgument, "k range must be nonempty and start at 1 or more");
  require(kind == FunctionalKind::F || kind == FunctionalKind::G || kind == FunctionalKind::Q,
          ErrorKind::InvalidArgument, "sharpness sweeps cover F, G and Q");
  std::vector<std::future<SweepRecord>> jobs;
  for (int k = k_min; k <= k_max; ++k) {
    jobs.push_back(std::async(std::launch::async, [&, k] {
      const RadialProfile p = kind == FunctionalKind::Q ? moser_sequence_q(cfg.N, cfg.t, cfg.q, k, sampling)
                                                        : moser_sequence(cfg.N, cfg.t, k, sampling);
      const FunctionalReport r = ratio(kind, p, cfg, quad);
      SweepRecord rec;
      rec.variable = k;
      rec.ratio = r.value;
      rec.numerator = r.numerator;
      rec.denominator = r.denominator;
      rec.grad_norm = r.grad_norm_used;
      rec.config = cfg;
      if (!cfg.subcritical) rec.lower_bound = sharpness_numerator_bound(cfg, kind, k) / r.denominator;
      return rec;
    }));
  }
  std::vector<SweepRecord> records;
  for (auto& j : jobs) records.push_back(j.get());
  return records;
}

SweepSummary summarize_sweep(const std::vector<SweepRecord>& records, double bound_tol) {
  SweepSummary s;
  if (records.empty()) return s;
  double lo = records.front().ratio, hi = lo;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SweepRecord& r = records[i];
    if (i > 0 && !(r.ratio > records[i - 1].ratio)) s.strictly_increasing = false;
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
    if (r.has_bound() && r.ratio < r.lower_bound - bound_tol) s.bounds_hold = false;
  }
  s.growth = records.back().ratio / records.front().ratio;
  s.spread = hi / lo;
  return s;
}

std::string sweep_to_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  out.precision(17);
  out << "k,ratio,paper_bound,grad_norm\n";
  for (const auto& r : records) {
    out << r.variable << "," << r.ratio << ",";
    if (r.has_bound()) out << r.lower_bound;
    out << "," << r.grad_norm << "\n";
  }
  return out.str();
}

ExponentFit at_exponent_fit(int N, double beta, const std::vector<double>& alpha_fracs,
                            const OptimizerParams& params) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  ExponentFit fit;
  fit.predicted = -(N - beta) / N;
  const double alpha_n = moser_alpha(N);
  for (const double frac : alpha_fracs) {
    require(frac > 0.0 && frac < 1.0, ErrorKind::InvalidArgument, "alpha fractions must lie in (0, 1)");
    const MaximizerResult r = estimate_AT(N, frac * alpha_n, beta, params);
    fit.points.push_back({frac, r.value, std::log(1.0 - std::pow(frac, N - 1)), r.converged});
  }
  std::vector<const FitPoint*> used;
  for (const auto& p : fit.points) {
    if (p.converged) used.push_back(&p);
  }
  require(used.size() >= 3, ErrorKind::FitDegenerate, "fewer than 3 converged points to fit");
  Eigen::MatrixXd A(used.size(), 2);
  Eigen::VectorXd y(used.size());
  for (std::size_t i = 0; i < used.size(); ++i) {
    A(static_cast<Eigen::Index>(i), 0) = used[i]->log_gap;
    A(static_cast<Eigen::Index>(i), 1) = 1.0;
    y[static_cast<Eigen::Index>(i)] = std::log(used[i]->estimate);
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
  fit.slope = coef[0];
  fit.intercept = coef[1];
  return fit;
}

std::string fit_to_csv(const ExponentFit& fit) {
  std::ostringstream out;
  out.precision(17);
  out << "alpha_frac,estimate,log_gap\n";
  for (const auto& p : fit.points) out << p.alpha_frac << "," << p.estimate << "," << p.log_gap << "\n";
  return out.str();
}

double mt_prefactor(int N, double a, double b, double beta, double alpha_frac) {
  require(alpha_frac > 0.0 && alpha_frac < 1.0, ErrorKind::InvalidArgument, "alpha fraction must lie in (0, 1)");
  const double num = 1.0 - std::pow(alpha_frac, (N - 1.0) * a / N);
  const double den = std::pow(alpha_frac, (N - 1.0) * b / N);
  return std::pow(num / den, (N - beta) / b);
}

MTIdentityCheck mt_identity_check(int N, double a, double b, double beta, const std::vector<double>& alpha_fracs,
                                  const OptimizerParams& params, double tol) {
  require(b <= N, ErrorKind::FinitenessViolation, "MT_{a,b} is infinite for b > N");
  require(!alpha_fracs.empty(), ErrorKind::InvalidArgument, "alpha grid must be nonempty");
  MTIdentityCheck check;
  const double alpha_n = moser_alpha(N);
  double sup = 0.0;
  for (const double frac : alpha_fracs) {
    MTIdentityRow row;
    row.alpha = frac * alpha_n;
    row.prefactor = mt_prefactor(N, a, b, beta, frac);
    row.at_estimate = estimate_AT(N, row.alpha, beta, params).value;
    row.product = row.prefactor * row.at_estimate;
    sup = std::max(sup, row.product);
    check.rows.push_back(row);
  }
  check.mt = estimate_MT(N, a, b, beta, params);
  check.report.tol = tol;
  check.report.add("mt_vs_sup_prefactor_at", check.mt.result.value, sup);
  return check;
}

std::string identity_rows_to_csv(const std::vector<MTIdentityRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "alpha,prefactor,AT_est,product\n";
  for (const auto& r : rows) out << r.alpha << "," << r.prefactor << "," << r.at_estimate << "," << r.product << "\n";
  return out.str();
}

std::vector<std::pair<std::uint64_t, FunctionalReport>> ckn_sweep(const ExponentConfig& cfg, double q, int count,
                                                                   std::uint64_t seed,
                                                                   const QuadratureOptions& quad) {
  require(count >= 1, ErrorKind::InvalidArgument, "count must be positive");
  std::vector<std::pair<std::uint64_t, FunctionalReport>> rows;
  rows.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    rows.emplace_back(s, ckn_report(random_profile(s, 16, 1.0), cfg, q, quad));
  }
  return rows;
}

}  // namespace mtlab
