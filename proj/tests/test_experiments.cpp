#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mtlab/error.hpp"
#include "mtlab/experiments.hpp"

using namespace mtlab;

namespace {

constexpr double pi = std::numbers::pi;

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

OptimizerParams tiny() {
  OptimizerParams p;
  p.node_count = 24;
  p.restarts = 1;
  return p;
}

}  // namespace

TEST_CASE("numerator bounds") {
  const ExponentConfig g = make_config(2, 0.0, 0.0, 4 * pi);
  for (int k = 1; k <= 12; ++k) CHECK(sharpness_numerator_bound(g, FunctionalKind::G, k) == doctest::Approx(k / 4.0));
  CHECK(std::isnan(sharpness_numerator_bound(g, FunctionalKind::F, 3)));
  const ExponentConfig q = make_config(2, 0.0, 0.0, 3.0, 4 * pi);
  CHECK(sharpness_numerator_bound(q, FunctionalKind::Q, 2) ==
        doctest::Approx(std::pow(2 * pi, -0.5) / 3.0 * std::pow(1.0, 1.5)).epsilon(1e-14));
}

TEST_CASE("G sharpness sweep at the critical alpha") {
  const ExponentConfig cfg = make_config(2, 0.0, 0.0, critical_alpha(2, 0.0));
  const auto records = sharpness_sweep(cfg, FunctionalKind::G, 2, 12);
  REQUIRE(records.size() == 11);
  for (const auto& r : records) {
    CHECK(r.numerator >= r.variable / 4.0);
    CHECK(r.has_bound());
    CHECK(r.ratio >= r.lower_bound - 1e-6);
    CHECK(std::abs(r.grad_norm - 1) < 1e-8);
  }
  const SweepSummary s = summarize_sweep(records);
  CHECK(s.strictly_increasing);
  CHECK(s.bounds_hold);
  CHECK(s.growth > 10);
  CHECK(sweep_to_csv(records).rfind("k,ratio,paper_bound,grad_norm\n2,", 0) == 0);
}

TEST_CASE("subcritical sweeps carry no bound") {
  const ExponentConfig cfg = make_config(2, 0.0, 1.0, 0.9 * critical_alpha(2, 1.0));
  const auto records = sharpness_sweep(cfg, FunctionalKind::F, 2, 6);
  for (const auto& r : records) CHECK_FALSE(r.has_bound());
  CHECK(sweep_to_csv(records).find(",,") != std::string::npos);
  CHECK(kind_of([&] { sharpness_sweep(cfg, FunctionalKind::G, 5, 4); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("Q sharpness sweep diverges") {
  const ExponentConfig cfg = make_config(2, 0.0, 0.0, 3.0, critical_alpha(2, 0.0));
  const auto records = sharpness_sweep(cfg, FunctionalKind::Q, 2, 8);
  const SweepSummary s = summarize_sweep(records);
  CHECK(s.strictly_increasing);
  CHECK(s.bounds_hold);
}

TEST_CASE("summary of a hand-made sweep") {
  std::vector<SweepRecord> rs(3);
  rs[0].ratio = 2;
  rs[1].ratio = 1;
  rs[2].ratio = 4;
  rs[2].lower_bound = 5;
  const SweepSummary s = summarize_sweep(rs);
  CHECK_FALSE(s.strictly_increasing);
  CHECK_FALSE(s.bounds_hold);
  CHECK(s.growth == 2.0);
  CHECK(s.spread == 4.0);
}

TEST_CASE("MT prefactor") {
  // a = b = N: ((1 - x^{N-1}) / x^{N-1})^{(N - beta)/N}.
  for (double x : {0.1, 0.5, 0.9}) {
    CHECK(mt_prefactor(2, 2, 2, 0, x) == doctest::Approx((1 - x) / x).epsilon(1e-14));
    CHECK(mt_prefactor(3, 3, 3, 1, x) ==
          doctest::Approx(std::pow((1 - x * x) / (x * x), 2.0 / 3)).epsilon(1e-14));
  }
  double prev = 1e300;
  for (double x : {0.9, 0.99, 0.999, 0.9999}) {
    const double v = mt_prefactor(2, 2, 1.5, 0.5, x);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-3);
  CHECK(kind_of([] { mt_prefactor(2, 2, 2, 0, 1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("exponent fit at small scale") {
  const ExponentFit fit = at_exponent_fit(2, 0.0, {0.5, 0.6, 0.7}, tiny());
  CHECK(fit.points.size() == 3);
  CHECK(fit.predicted == -1.0);
  CHECK(fit.slope < 0.0);
  CHECK(std::isfinite(fit.intercept));
  for (const auto& p : fit.points) CHECK(p.log_gap == doctest::Approx(std::log(1 - p.alpha_frac)));
  CHECK(fit_to_csv(fit).rfind("alpha_frac,estimate,log_gap\n0.5,", 0) == 0);

  OptimizerParams stalled = tiny();
  stalled.max_iterations = 1;
  CHECK(kind_of([&] { at_exponent_fit(2, 0.0, {0.5, 0.6, 0.7}, stalled); }) == ErrorKind::FitDegenerate);
}

TEST_CASE("MT identity check at small scale") {
  CHECK(kind_of([] { mt_identity_check(2, 2, 3, 0, {0.5}, tiny()); }) == ErrorKind::FinitenessViolation);
  const MTIdentityCheck c = mt_identity_check(2, 2, 2, 0, {0.4, 0.6}, tiny());
  REQUIRE(c.rows.size() == 2);
  for (const auto& row : c.rows) CHECK(row.product == row.prefactor * row.at_estimate);
  REQUIRE(c.report.identities.size() == 1);
  CHECK(c.report.identities[0].lhs == c.mt.result.value);
  CHECK(c.report.tol == 0.15);
  CHECK(identity_rows_to_csv(c.rows).rfind("alpha,prefactor,AT_est,product\n", 0) == 0);
}

TEST_CASE("CKN sweep") {
  const ExponentConfig cfg = make_config(2, 0.0, 1.0, 1.0);
  const auto rows = ckn_sweep(cfg, 3.0, 30, 7);
  REQUIRE(rows.size() == 30);
  CHECK(rows.front().first == 7);
  for (const auto& [seed, r] : rows) CHECK(std::isfinite(r.value));
  CHECK(kind_of([&] { ckn_sweep(cfg, 3.0, 0, 7); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("experiments are deterministic") {
  const ExponentConfig cfg = make_config(3, 0.0, 0.5, critical_alpha(3, 0.5));
  CHECK(sweep_to_csv(sharpness_sweep(cfg, FunctionalKind::G, 2, 5)) ==
        sweep_to_csv(sharpness_sweep(cfg, FunctionalKind::G, 2, 5)));
  CHECK(fit_to_csv(at_exponent_fit(2, 1.0, {0.5, 0.6, 0.7}, tiny())) ==
        fit_to_csv(at_exponent_fit(2, 1.0, {0.5, 0.6, 0.7}, tiny())));
}
