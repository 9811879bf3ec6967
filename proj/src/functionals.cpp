#include "mtlab/functionals.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "mtlab/error.hpp"

namespace mtlab {

std::string_view to_string(FunctionalKind kind) noexcept {
  switch (kind) {
    case FunctionalKind::F: return "F";
    case FunctionalKind::G: return "G";
    case FunctionalKind::Q: return "Q";
    case FunctionalKind::AT: return "AT";
    case FunctionalKind::CKN: return "CKN";
  }
  return "?";
}

FunctionalKind functional_kind_from_string(std::string_view name) {
  if (name == "F") return FunctionalKind::F;
  if (name == "G") return FunctionalKind::G;
  if (name == "Q") return FunctionalKind::Q;
  if (name == "AT") return FunctionalKind::AT;
  if (name == "CKN") return FunctionalKind::CKN;
  throw Error(ErrorKind::Parse, "unknown functional kind '" + std::string(name) + "'");
}

namespace {

FunctionalReport finish(FunctionalKind kind, double numerator, double denominator, const ExponentConfig& cfg,
                        const RadialProfile& p) {
  require(denominator > 0.0, ErrorKind::ZeroDenominator, "ratio denominator vanishes (zero profile?)");
  FunctionalReport r;
  r.kind = kind;
  r.numerator = numerator;
  r.denominator = denominator;
  r.value = numerator / denominator;
  r.config = cfg;
  r.grad_norm_used = grad_norm(p, cfg.N);
  return r;
}

double mass_denominator(const RadialProfile& p, const ExponentConfig& cfg, double power,
                        const QuadratureOptions& opts) {
  const double mass = weighted_power_integral(p, cfg.N, power, cfg.s, opts);
  return std::pow(mass, (cfg.N - cfg.t) / (cfg.N - cfg.s));
}

}  // namespace

FunctionalReport F_ratio(const RadialProfile& p, const ExponentConfig& cfg, const QuadratureOptions& opts) {
  const double denominator = mass_denominator(p, cfg, cfg.N, opts);
  require(denominator > 0.0, ErrorKind::ZeroDenominator, "ratio denominator vanishes (zero profile?)");
  return finish(FunctionalKind::F, phi_functional(p, cfg, cfg.t, opts), denominator, cfg, p);
}

FunctionalReport G_ratio(const RadialProfile& p, const ExponentConfig& cfg, const QuadratureOptions& opts) {
  const double denominator = mass_denominator(p, cfg, cfg.N, opts);
  require(denominator > 0.0, ErrorKind::ZeroDenominator, "ratio denominator vanishes (zero profile?)");
  return finish(FunctionalKind::G, exp_functional(p, cfg, cfg.N, cfg.t, opts), denominator, cfg, p);
}

FunctionalReport q_ratio(const RadialProfile& p, const ExponentConfig& cfg, const QuadratureOptions& opts) {
  require(cfg.q > cfg.N, ErrorKind::PowerViolation, "the q-power ratio needs q > N");
  const double denominator = mass_denominator(p, cfg, cfg.q, opts);
  require(denominator > 0.0, ErrorKind::ZeroDenominator, "ratio denominator vanishes (zero profile?)");
  return finish(FunctionalKind::Q, exp_functional(p, cfg, cfg.q, cfg.t, opts), denominator, cfg, p);
}

FunctionalReport at_ratio(const RadialProfile& p, int N, double alpha, double beta, const QuadratureOptions& opts) {
  require(alpha > 0.0, ErrorKind::NonpositiveAlpha, "need alpha > 0");
  require(beta >= 0.0 && beta < N, ErrorKind::InvalidBeta, "need 0 <= beta < N");
  const ExponentConfig cfg = make_config(N, 0.0, beta, alpha);
  const double mass = weighted_power_integral(p, N, N, 0.0, opts);
  require(mass > 0.0, ErrorKind::ZeroDenominator, "ratio denominator vanishes (zero profile?)");
  const double denominator = std::pow(mass, (N - beta) / N);
  const IntegralSpec spec{1.0, beta, alpha * (1.0 - beta / N), IntegrandMode::phi_series};
  return finish(FunctionalKind::AT, integrate(p, N, spec, opts), denominator, cfg, p);
}

FunctionalReport ckn_report(const RadialProfile& p, const ExponentConfig& cfg, double q,
                            const QuadratureOptions& opts) {
  require(q >= cfg.N, ErrorKind::PowerViolation, "need q >= N");
  const double theta = (cfg.N - cfg.t) / (cfg.N - cfg.s);
  const double gradient = grad_norm(p, cfg.N);
  const double lower = weighted_norm(p, cfg.N, q, cfg.s, opts);
  require(lower > 0.0 && gradient > 0.0, ErrorKind::ZeroDenominator, "CKN denominator vanishes");
  const double denominator = std::pow(lower, theta) * std::pow(gradient, 1.0 - theta);
  return finish(FunctionalKind::CKN, weighted_norm(p, cfg.N, q, cfg.t, opts), denominator, cfg, p);
}

double ckn_ratio(const RadialProfile& p, const ExponentConfig& cfg, double q, const QuadratureOptions& opts) {
  return ckn_report(p, cfg, q, opts).value;
}

FunctionalReport ratio(FunctionalKind kind, const RadialProfile& p, const ExponentConfig& cfg,
                       const QuadratureOptions& opts) {
  switch (kind) {
    case FunctionalKind::F: return F_ratio(p, cfg, opts);
    case FunctionalKind::G: return G_ratio(p, cfg, opts);
    case FunctionalKind::Q: return q_ratio(p, cfg, opts);
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, "ratio() dispatches F, G and Q only");
}

std::string to_json(const FunctionalReport& report) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(report.kind));
  j["value"] = report.value;
  j["numerator"] = report.numerator;
  j["denominator"] = report.denominator;
  j["grad_norm_used"] = report.grad_norm_used;
  j["constraint_held"] = report.constraint_held();
  j["N"] = report.config.N;
  j["s"] = report.config.s;
  j["t"] = report.config.t;
  j["q"] = report.config.q;
  j["alpha"] = report.config.alpha;
  return j.dump();
}

std::string reports_to_csv(const std::vector<std::pair<std::uint64_t, FunctionalReport>>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "seed,kind,value,numerator,denominator,grad_norm\n";
  for (const auto& [seed, r] : rows) {
    out << seed << "," << to_string(r.kind) << "," << r.value << "," << r.numerator << "," << r.denominator << ","
        << r.grad_norm_used << "\n";
  }
  return out.str();
}

}  // namespace mtlab
