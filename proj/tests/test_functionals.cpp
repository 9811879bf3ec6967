#include <cmath>
#include <numbers>

#include "doctest.h"
#include "json.hpp"
#include "mtlab/error.hpp"
#include "mtlab/functionals.hpp"
#include "mtlab/transforms.hpp"

using namespace mtlab;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

template <typename F>
double trapezoid(F f, double a, double b, int n) {
  const long double h = (static_cast<long double>(b) - a) / n;
  long double sum = 0.5L * (f(a) + f(b));
  for (int i = 1; i < n; ++i) sum += f(static_cast<double>(a + i * h));
  return static_cast<double>(sum * h);
}

RadialProfile tent() { return profile_from_nodes({{0.5, 1.0}, {1.0, 0.0}}); }
RadialProfile zero() { return profile_from_nodes({{1.0, 0.0}}); }

}  // namespace

TEST_CASE("kind names") {
  CHECK(functional_kind_from_string("G") == FunctionalKind::G);
  CHECK(to_string(FunctionalKind::CKN) == "CKN");
  CHECK(kind_of([] { functional_kind_from_string("H"); }) == ErrorKind::Parse);
}

TEST_CASE("zero profile has no ratio") {
  const ExponentConfig cfg = make_config(2, 0.0, 0.0, 3.0, 1.0);
  CHECK(kind_of([&] { F_ratio(zero(), cfg); }) == ErrorKind::ZeroDenominator);
  CHECK(kind_of([&] { G_ratio(zero(), cfg); }) == ErrorKind::ZeroDenominator);
  CHECK(kind_of([&] { q_ratio(zero(), cfg); }) == ErrorKind::ZeroDenominator);
  CHECK(kind_of([&] { at_ratio(zero(), 2, 1.0, 0.0); }) == ErrorKind::ZeroDenominator);
  CHECK(kind_of([&] { q_ratio(tent(), make_config(2, 0.0, 0.0, 1.0)); }) == ErrorKind::PowerViolation);
  CHECK(kind_of([&] { at_ratio(tent(), 2, 0.0, 0.0); }) == ErrorKind::NonpositiveAlpha);
  CHECK(kind_of([&] { at_ratio(tent(), 2, 1.0, 2.0); }) == ErrorKind::InvalidBeta);
}

TEST_CASE("F on the tent against trapezoid oracles") {
  const RadialProfile p = tent();
  const ExponentConfig cfg = make_config(2, 0.0, 0.0, 1.0);
  const FunctionalReport r = F_ratio(p, cfg);
  const double num = 2 * pi * trapezoid([&](double x) { return std::expm1(p(x) * p(x)) * x; }, 0, 1, 1000000);
  const double den = 2 * pi * trapezoid([&](double x) { return std::pow(p(x), 2) * x; }, 0, 1, 1000000);
  CHECK(rel(r.numerator, num) < 1e-8);
  CHECK(rel(r.denominator, den) < 1e-8);
  CHECK(rel(r.value, num / den) < 1e-8);
}

TEST_CASE("s = t collapses the denominator exponent to N") {
  const RadialProfile p = random_profile(3, 14, 1.0);
  for (int N : {2, 3}) {
    const ExponentConfig cfg = make_config(N, 0.7, 0.7, 0.4 * critical_alpha(N, 0.7));
    const FunctionalReport r = F_ratio(p, cfg);
    CHECK(rel(r.value, phi_functional(p, cfg, 0.7) / std::pow(weighted_norm(p, N, N, 0.7), N)) < 1e-13);
  }
}

TEST_CASE("G on the unit-gradient tent against a trapezoid oracle") {
  const RadialProfile t = tent();
  const RadialProfile p = t.scaled(1 / grad_norm(t, 2));
  CHECK(std::abs(grad_norm(p, 2) - 1) < 1e-14);
  const ExponentConfig cfg = make_config(2, 0.0, 0.0, 6.0);
  auto g = [&](double x) {
    const double u = p(x);
    return std::exp(6.0 * u * u) * u * u * x;
  };
  const double num = 2 * pi * trapezoid(g, 0, 1, 1000000);
  const double den = 2 * pi * trapezoid([&](double x) { return std::pow(p(x), 2) * x; }, 0, 1, 1000000);
  const FunctionalReport r = G_ratio(p, cfg);
  CHECK(rel(r.value, num / den) < 1e-8);
  CHECK(r.constraint_held());
  CHECK(r.value > 1.0);
}

TEST_CASE("G exceeds 1 on unit-gradient profiles when s = t") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    RadialProfile p = random_profile(seed, 12, 1.0);
    if (p.is_zero()) continue;
    p = p.scaled(1 / grad_norm(p, 2));
    CHECK(G_ratio(p, make_config(2, 0.5, 0.5, 0.3)).value > 1.0);
  }
}

TEST_CASE("Q ratio") {
  const ExponentConfig crit = make_config(2, 0.0, 0.0, 3.0, 4 * pi);
  double prev = 0.0;
  for (int k = 2; k <= 10; k += 2) {
    const double v = q_ratio(moser_sequence_q(2, 0.0, 3.0, k), crit).value;
    CHECK(v > prev);
    prev = v;
  }
  const RadialProfile p = random_profile(21, 16, 1.0);
  const ExponentConfig half = make_config(2, 0.0, 0.0, 3.0, 2 * pi);
  QuadratureOptions fine;
  fine.gauss_order = 32;
  fine.rel_tol = 1e-11;
  const double v = q_ratio(p, half).value;
  CHECK(std::isfinite(v));
  CHECK(rel(v, q_ratio(p, half, fine).value) < 1e-7);
}

TEST_CASE("AT ratio") {
  const RadialProfile p = random_profile(6, 14, 1.0);
  const double an = moser_alpha(2);
  CHECK(rel(at_ratio(p, 2, 0.6 * an, 0.0).value, F_ratio(p, make_config(2, 0.0, 0.0, 0.6 * an)).value) < 1e-13);
  CHECK(at_ratio(p, 2, 0.3 * an, 0.5).value < at_ratio(p, 2, 0.6 * an, 0.5).value);
  // Truncated-log family at alpha_N grows without bound.
  double prev = 0.0;
  for (int k = 2; k <= 12; k += 2) {
    const double v = at_ratio(moser_sequence(2, 1.0, k), 2, an, 1.0).value;
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > 3 * at_ratio(moser_sequence(2, 1.0, 2), 2, an, 1.0).value);
}

TEST_CASE("CKN ratio") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RadialProfile p = random_profile(seed, 12, 1.0);
    if (p.is_zero()) continue;
    CHECK(std::abs(ckn_ratio(p, make_config(2, 0.5, 0.5, 1.0), 3.0) - 1) < 1e-13);
  }
  const ExponentConfig cfg = make_config(2, 0.0, 1.0, 1.0);
  double c_hat = 0.0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const RadialProfile p = random_profile(seed, 12, 1.0);
    if (p.is_zero()) continue;
    c_hat = std::max(c_hat, ckn_ratio(p, cfg, 2.0));
  }
  CHECK(std::isfinite(c_hat));
  CHECK(c_hat > 0.0);
}

TEST_CASE("all ratios are dilation invariant") {
  const ExponentConfig cfg = make_config(2, -0.5, 1.0, 3.0, 0.5 * critical_alpha(2, 1.0));
  const ExponentConfig c3 = make_config(3, 0.0, 0.5, 4.0, 0.5 * critical_alpha(3, 0.5));
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const RadialProfile p = random_profile(seed, 12, 1.0);
    if (p.is_zero()) continue;
    for (double lambda : {0.5, 2.0, 10.0}) {
      const RadialProfile d = dilate(p, lambda);
      CHECK(rel(F_ratio(d, cfg).value, F_ratio(p, cfg).value) < 1e-9);
      CHECK(rel(G_ratio(d, cfg).value, G_ratio(p, cfg).value) < 1e-9);
      CHECK(rel(q_ratio(d, cfg).value, q_ratio(p, cfg).value) < 1e-9);
      CHECK(rel(q_ratio(d, c3).value, q_ratio(p, c3).value) < 1e-9);
      CHECK(rel(at_ratio(d, 2, 6.0, 1.0).value, at_ratio(p, 2, 6.0, 1.0).value) < 1e-9);
      CHECK(rel(ckn_ratio(d, cfg, 3.0), ckn_ratio(p, cfg, 3.0)) < 1e-9);
    }
  }
}

TEST_CASE("records") {
  const FunctionalReport r = G_ratio(tent(), make_config(2, 0.0, 0.0, 1.0));
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["kind"] == "G");
  CHECK(j["value"].get<double>() == r.value);
  const std::string csv = reports_to_csv({{7, r}});
  CHECK(csv.rfind("seed,kind,value,numerator,denominator,grad_norm\n7,G,", 0) == 0);
}
