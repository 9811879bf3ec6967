#include "mtlab/exponents.hpp"

#include <charconv>
#include <map>
#include <sstream>

namespace mtlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionTooSmall: return "dimension-too-small";
    case ErrorKind::WeightOrder: return "weight-order-violation";
    case ErrorKind::WeightIntegrability: return "weight-integrability-violation";
    case ErrorKind::PowerViolation: return "power-violation";
    case ErrorKind::NonpositiveAlpha: return "nonpositive-alpha";
    case ErrorKind::InvalidBeta: return "invalid-beta";
    case ErrorKind::NonMonotoneRadii: return "non-monotone-radii";
    case ErrorKind::NonpositiveRadius: return "nonpositive-radius";
    case ErrorKind::EmptyProfile: return "empty-profile";
    case ErrorKind::NegativeRadius: return "negative-radius";
    case ErrorKind::NegativeArgument: return "negative-argument";
    case ErrorKind::ZeroDenominator: return "zero-denominator";
    case ErrorKind::NonConvergentRefinement: return "nonconvergent-refinement";
    case ErrorKind::OriginInput: return "origin-input";
    case ErrorKind::NonpositiveLambda: return "nonpositive-lambda";
    case ErrorKind::SupercriticalConfig: return "supercritical-config";
    case ErrorKind::FinitenessViolation: return "finiteness-violation";
    case ErrorKind::InadmissibleProfile: return "inadmissible-profile";
    case ErrorKind::FitDegenerate: return "fit-degenerate";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Parse: return "parse-error";
  }
  return "unknown";
}

ExponentConfig make_config(int N, double s, double t, std::optional<double> q, double alpha) {
  const double power = q.value_or(static_cast<double>(N));
  require(std::isfinite(s) && std::isfinite(t) && std::isfinite(power) && std::isfinite(alpha),
          ErrorKind::InvalidArgument, "exponents must be finite");
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2, got " + std::to_string(N));
  require(s <= t, ErrorKind::WeightOrder, "need s <= t");
  require(t < N, ErrorKind::WeightIntegrability, "need t < N");
  require(power >= N, ErrorKind::PowerViolation, "need q >= N");
  require(alpha > 0.0, ErrorKind::NonpositiveAlpha, "need alpha > 0");

  ExponentConfig cfg;
  cfg.N = N;
  cfg.s = s;
  cfg.t = t;
  cfg.q = power;
  cfg.alpha = alpha;
  cfg.nprime = conjugate_exponent(N);
  cfg.omega = sphere_area(N);
  cfg.alpha_crit = (N - t) * std::pow(cfg.omega, 1.0 / (N - 1));
  cfg.subcritical = alpha < cfg.alpha_crit;
  return cfg;
}

ExponentConfig with_alpha(const ExponentConfig& cfg, double alpha) {
  return make_config(cfg.N, cfg.s, cfg.t, cfg.q, alpha);
}

std::string to_record(const ExponentConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "N=" << cfg.N << "\n"
      << "s=" << cfg.s << "\n"
      << "t=" << cfg.t << "\n"
      << "q=" << cfg.q << "\n"
      << "alpha=" << cfg.alpha << "\n";
  return out.str();
}

namespace {

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "bad value for " + key + ": '" + text + "'");
  }
  require(used == text.size(), ErrorKind::Parse, "trailing characters in value for " + key);
  return value;
}

}  // namespace

ExponentConfig config_from_record(const std::string& text) {
  std::map<std::string, std::string> fields;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::Parse, "expected key=value, got '" + line + "'");
    const std::string key = line.substr(0, eq);
    require(key == "N" || key == "s" || key == "t" || key == "q" || key == "alpha", ErrorKind::Parse,
            "unknown config key '" + key + "'");
    fields[key] = line.substr(eq + 1);
  }
  for (const char* key : {"N", "s", "t", "alpha"}) {
    require(fields.count(key) == 1, ErrorKind::Parse, std::string("missing key ") + key);
  }
  const double n = parse_double("N", fields["N"]);
  require(n == std::floor(n), ErrorKind::Parse, "N must be an integer");
  std::optional<double> q;
  if (fields.count("q")) q = parse_double("q", fields["q"]);
  return make_config(static_cast<int>(n), parse_double("s", fields["s"]), parse_double("t", fields["t"]), q,
                     parse_double("alpha", fields["alpha"]));
}

}  // namespace mtlab
