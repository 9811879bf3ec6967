// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [--only LIST] [--expect-fail LIST], LIST = comma-separated criterion numbers.
// Exit status is 1 if any criterion fails that is not listed in --expect-fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mtlab/error.hpp"
#include "mtlab/experiments.hpp"
#include "mtlab/transforms.hpp"

using namespace mtlab;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds
  std::function<Outcome()> body;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

Outcome constants() {
  constexpr double tol = 1e-12;
  // Sphere areas 2 pi, 4 pi, 2 pi^2 by hand.
  const double omega[] = {0, 0, 2 * pi, 4 * pi, 2 * pi * pi};
  double worst = 0.0;
  for (int N = 2; N <= 4; ++N) {
    for (double t : {0.0, 0.5, 1.0}) {
      const double hand = (N - t) * std::pow(omega[N], 1.0 / (N - 1));
      worst = std::max(worst, rel(critical_alpha(N, t), hand));
    }
  }
  worst = std::max(worst, rel(critical_alpha(2, 0.0), 4 * pi));
  return {worst <= tol, fmt("max rel err %.2e (tol %.0e)", worst, tol)};
}

Outcome sequences() {
  constexpr double tol = 1e-8;
  double log_worst = 0.0, pow_worst = 0.0;
  for (int N : {2, 3}) {
    for (int k = 1; k <= 12; ++k) {
      for (double t : {0.0, 0.5, 1.0}) {
        log_worst = std::max(log_worst, std::abs(grad_norm(moser_sequence(N, t, k), N) - 1));
        pow_worst = std::max(pow_worst, std::abs(grad_norm(moser_sequence_q(N, t, N + 1.0, k), N) - 1));
      }
    }
  }
  return {log_worst <= tol && pow_worst <= tol,
          fmt("truncated-log max |norm-1| %.2e, power-q max |norm-1| %.2e (tol %.0e)", log_worst, pow_worst, tol)};
}

Outcome peel_suite() {
  constexpr double tol = 1e-6;
  double worst = 0.0;
  int reports = 0, failed = 0;
  for (int N : {2, 3, 4}) {
    for (double t : {0.0, 0.5, 1.0, N - 0.5}) {
      for (double q : {static_cast<double>(N), N + 1.0}) {
        const ExponentConfig cfg = make_config(N, 0.0, t, q, 0.5 * critical_alpha(N, t));
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
          const IdentityReport r = verify_peel_identities(random_profile(seed, 16, 1.0), cfg, tol);
          worst = std::max(worst, r.max_rel_err());
          ++reports;
          failed += r.pass ? 0 : 1;
        }
      }
    }
  }
  return {failed == 0, fmt("%d reports, %d failing, max rel err %.2e (tol %.0e)", reports, failed, worst, tol)};
}

Outcome jacobian() {
  constexpr double tol = 1e-5;
  double worst = 0.0;
  bool pass = true;
  for (int N : {2, 3}) {
    for (double t : {-1.0, 0.5, 1.0}) {
      const IdentityReport r = verify_jacobian(N, t, annulus_points(N, 100, 0.1, 3.0, 11), tol);
      worst = std::max(worst, r.max_rel_err());
      pass = pass && r.pass;
    }
  }
  return {pass, fmt("100 points x N in {2,3} x t in {-1,0.5,1}, max rel err %.2e (tol %.0e)", worst, tol)};
}

Outcome nonradial() {
  constexpr double slack = 1e-4;
  Eigen::VectorXd center(2);
  center << 1.0, 0.0;
  const auto pts = annulus_points(2, 100, 0.2, 2.0, 1);
  int violations = 0;
  double tightest = 1e300;
  for (double t : {0.5, 1.0}) {
    const IdentityReport r = verify_nonradial_gradient_bound(2, t, pts, center, slack);
    for (const auto& rec : r.identities) {
      if (!rec.holds()) ++violations;
      if (rec.relation == Relation::upper_bound) tightest = std::min(tightest, rec.rhs - rec.lhs);
    }
  }
  return {violations == 0, fmt("%d violations over 2 x 100 points, min rhs-lhs %.2e (slack %.0e)", violations,
                               tightest, slack)};
}

Outcome log_suite() {
  constexpr double tol = 1e-7;
  double worst = 0.0;
  int failed = 0;
  for (int N : {2, 3}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const IdentityReport r = verify_log_identities(random_profile(seed, 16, 1.0), N, 0.5 * moser_alpha(N), tol);
      worst = std::max(worst, r.max_rel_err());
      failed += r.pass ? 0 : 1;
    }
  }
  return {failed == 0, fmt("40 reports, %d failing, max rel err %.2e (tol %.0e)", failed, worst, tol)};
}

Outcome sharpness() {
  const ExponentConfig crit = make_config(2, 0.0, 0.0, critical_alpha(2, 0.0));
  const auto at_crit = sharpness_sweep(crit, FunctionalKind::G, 2, 12);
  const SweepSummary sc = summarize_sweep(at_crit, 1e-6);
  bool numerators = true;
  for (const auto& r : at_crit) numerators = numerators && r.numerator >= sharpness_numerator_bound(crit, FunctionalKind::G, static_cast<int>(r.variable));
  const ExponentConfig sub = make_config(2, 0.0, 0.0, 0.9 * critical_alpha(2, 0.0));
  const SweepSummary ss = summarize_sweep(sharpness_sweep(sub, FunctionalKind::G, 2, 12));
  const bool critical_ok = sc.strictly_increasing && sc.growth > 10 && numerators && sc.bounds_hold;
  const bool sub_ok = ss.spread < 3;
  return {critical_ok && sub_ok,
          fmt("critical: increasing=%d growth %.2f (>10) numerator bound=%d; 0.9 alpha_crit: max/min %.2f (<3)",
              sc.strictly_increasing, sc.growth, numerators, ss.spread)};
}

Outcome maximizer() {
  const ExponentConfig cfg = make_config(2, 0.0, 0.0, 0.5 * critical_alpha(2, 0.0));
  const OptimizerParams params;
  const MaximizerResult r = maximize_ratio(cfg, FunctionalKind::G, params);
  bool monotone = true;
  for (std::size_t i = 1; i < r.history.size(); ++i) monotone = monotone && r.history[i].second >= r.history[i - 1].second;
  const double audit = rel(G_ratio(r.best_profile, cfg).value, r.value);

  const PlateauKneeScan scan = plateau_knee_scan(cfg, FunctionalKind::G, 200, 200);
  const MaximizerResult pk = maximize_plateau_knee(cfg, FunctionalKind::G, params, scan.best_height, scan.best_knee);
  const double gap = std::abs(pk.value - scan.best_value);
  const bool pass = r.converged && r.constraint_residual <= 1e-8 && monotone && r.value > 1.0 && audit <= 1e-10 &&
                    pk.converged && gap <= scan.resolution && r.value >= scan.best_value;
  return {pass, fmt("nu %.6f converged=%d residual %.1e monotone=%d audit %.1e; two-parameter optimum %.6f vs "
                    "200x200 scan %.6f (gap %.2e, resolution %.2e)",
                    r.value, r.converged, r.constraint_residual, monotone, audit, pk.value, scan.best_value, gap,
                    scan.resolution)};
}

Outcome dilation() {
  constexpr double tol = 1e-9;
  const ExponentConfig c2 = make_config(2, -0.5, 1.0, 3.0, 0.5 * critical_alpha(2, 1.0));
  const ExponentConfig c3 = make_config(3, 0.0, 0.5, 4.0, 0.5 * critical_alpha(3, 0.5));
  double worst = 0.0;
  int profiles = 0;
  for (std::uint64_t seed = 1; profiles < 50; ++seed) {
    const RadialProfile p = random_profile(seed, 12, 1.0);
    if (p.is_zero()) continue;
    ++profiles;
    for (const ExponentConfig& cfg : {c2, c3}) {
      const double base[] = {F_ratio(p, cfg).value, G_ratio(p, cfg).value, q_ratio(p, cfg).value,
                             at_ratio(p, cfg.N, 0.5 * moser_alpha(cfg.N), 1.0).value, ckn_ratio(p, cfg, cfg.q)};
      for (double lambda : {0.5, 2.0, 10.0}) {
        const RadialProfile d = dilate(p, lambda);
        const double moved[] = {F_ratio(d, cfg).value, G_ratio(d, cfg).value, q_ratio(d, cfg).value,
                                at_ratio(d, cfg.N, 0.5 * moser_alpha(cfg.N), 1.0).value, ckn_ratio(d, cfg, cfg.q)};
        for (int i = 0; i < 5; ++i) worst = std::max(worst, rel(moved[i], base[i]));
      }
    }
  }
  return {worst <= tol, fmt("50 profiles x 2 configs x 3 lambdas x 5 ratios, max rel change %.2e (tol %.0e)", worst,
                            tol)};
}

Outcome exponent_fit() {
  constexpr double tol = 0.15;
  OptimizerParams params;
  params.node_count = 128;
  params.inner_radius = 1e-8;
  const std::vector<double> window = {0.8, 0.9, 0.95, 0.975};
  bool pass = true;
  std::string detail;
  for (double beta : {0.0, 1.0}) {
    const ExponentFit fit = at_exponent_fit(2, beta, window, params);
    const double off = std::abs(fit.slope - fit.predicted) / std::abs(fit.predicted);
    pass = pass && off <= tol;
    detail += fmt("beta=%g slope %.4f vs %.4f (%.1f%%); ", beta, fit.slope, fit.predicted, 100 * off);
  }
  return {pass, detail + fmt("tol %.0f%%", 100 * tol)};
}

Outcome mt_identity() {
  constexpr double tol = 0.15;
  std::vector<double> grid;
  for (int i = 0; i <= 13; ++i) grid.push_back(0.3 + 0.05 * i);
  const MTIdentityCheck c = mt_identity_check(2, 2.0, 2.0, 0.0, grid, OptimizerParams{}, tol);
  const IdentityRecord& rec = c.report.identities.front();
  bool rejected = false;
  try {
    estimate_MT(2, 2.0, 2.5, 0.0, OptimizerParams{});
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::FinitenessViolation;
  }
  return {c.report.pass && rejected, fmt("MT %.5f vs sup prefactor*AT %.5f, rel err %.3f (tol %.2f); b > N rejected=%d",
                                         rec.lhs, rec.rhs, rec.rel_err, tol, rejected)};
}

Outcome lemma_probe() {
  const auto family = admissible_log_family(2, 200, 1);
  bool finite = family.size() == 200, monotone = true;
  double prev = 0.0;
  std::string hats;
  for (double beta : {0.5, 0.7, 0.9}) {
    const ProbeResult r = growth_inequality_probe(family, beta);
    for (const auto& rec : r.records) finite = finite && std::isfinite(rec.ratio);
    monotone = monotone && r.c_hat >= prev;
    prev = r.c_hat;
    hats += fmt("C(%.1f)=%.4f ", beta, r.c_hat);
  }
  return {finite && monotone, hats + fmt("finite=%d nondecreasing=%d", finite, monotone)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, expect_fail;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--only") only = parse_list(argv[i + 1]);
    else if (flag == "--expect-fail") expect_fail = parse_list(argv[i + 1]);
    else {
      std::fprintf(stderr, "unknown argument %s\n", argv[i]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "critical constants", 1, constants},
      {2, "test sequences have unit gradient norm", 5, sequences},
      {3, "peel-map identities", 60, peel_suite},
      {4, "Jacobian determinant", 10, jacobian},
      {5, "non-radial gradient bound", 10, nonradial},
      {6, "log-substitution identities", 30, log_suite},
      {7, "sharpness of the critical exponent", 60, sharpness},
      {8, "maximizer search", 300, maximizer},
      {9, "dilation invariance", 60, dilation},
      {10, "blow-up exponent of AT", 900, exponent_fit},
      {11, "MT identity", 900, mt_identity},
      {12, "log-variable growth probe", 60, lemma_probe},
  };

  int unexpected = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit;
    const bool pass = o.pass && in_time;
    std::printf("%s %2d %s: %s; %.1f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.time_limit, pass || !expect_fail.count(c.id) ? "" : " [expected]");
    std::fflush(stdout);
    if (!pass && !expect_fail.count(c.id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
