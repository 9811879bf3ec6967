#include "mtlab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mtlab/error.hpp"
#include "mtlab/exponents.hpp"

namespace mtlab {

RadialProfile::RadialProfile(Eigen::VectorXd radii, Eigen::VectorXd values)
    : radii_(std::move(radii)), values_(std::move(values)) {
  require(radii_.size() >= 2 && radii_.size() == values_.size(), ErrorKind::InvalidArgument,
          "profile needs at least two nodes with matching values");
  require(values_[values_.size() - 1] == 0.0, ErrorKind::InvalidArgument, "profile must end at value 0");
}

double RadialProfile::operator()(double r) const {
  require(r >= 0.0, ErrorKind::NegativeRadius, "evaluation radius must be nonnegative");
  if (r <= radii_[0]) return values_[0];
  const Eigen::Index last = radii_.size() - 1;
  if (r >= radii_[last]) return 0.0;
  const double* begin = radii_.data();
  const auto it = std::upper_bound(begin, begin + radii_.size(), r);
  const Eigen::Index i = (it - begin) - 1;
  const double lambda = (r - radii_[i]) / (radii_[i + 1] - radii_[i]);
  return values_[i] + lambda * (values_[i + 1] - values_[i]);
}

RadialProfile RadialProfile::with_values(Eigen::VectorXd values) const {
  return RadialProfile(radii_, std::move(values));
}

RadialProfile RadialProfile::scaled(double factor) const {
  Eigen::VectorXd v = values_ * factor;
  v[v.size() - 1] = 0.0;
  return RadialProfile(radii_, std::move(v));
}

double ComposedProfile::operator()(double r) const {
  require(r >= 0.0, ErrorKind::NegativeRadius, "evaluation radius must be nonnegative");
  return amplitude * base(std::pow(r, radial_exponent));
}

double evaluate(const RadialProfile& p, double r) { return p(r); }
double evaluate(const ComposedProfile& p, double r) { return p(r); }

ProfileBuild make_profile(const std::vector<std::pair<double, double>>& nodes) {
  require(!nodes.empty(), ErrorKind::EmptyProfile, "profile needs at least one node");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto [r, v] = nodes[i];
    require(std::isfinite(r) && std::isfinite(v), ErrorKind::InvalidArgument, "node coordinates must be finite");
    require(r > 0.0, ErrorKind::NonpositiveRadius, "node radii must be positive");
    if (i > 0) {
      require(r > nodes[i - 1].first, ErrorKind::NonMonotoneRadii, "node radii must be strictly increasing");
    }
  }
  const bool append = nodes.back().second != 0.0 || nodes.size() == 1;
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.size()) + (append ? 1 : 0);
  Eigen::VectorXd radii(n), values(n);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    radii[static_cast<Eigen::Index>(i)] = nodes[i].first;
    values[static_cast<Eigen::Index>(i)] = nodes[i].second;
  }
  if (append) {
    radii[n - 1] = 2.0 * nodes.back().first;
    values[n - 1] = 0.0;
  }
  return {RadialProfile(std::move(radii), std::move(values)), append};
}

RadialProfile profile_from_nodes(const std::vector<std::pair<double, double>>& nodes) {
  return make_profile(nodes).profile;
}

Eigen::VectorXd geometric_grid(double inner, double outer, Eigen::Index count) {
  require(inner > 0.0 && outer > inner && count >= 2, ErrorKind::InvalidArgument, "bad geometric grid");
  Eigen::VectorXd r(count);
  const double log_inner = std::log(inner);
  const double span = std::log(outer) - log_inner;
  for (Eigen::Index i = 0; i < count; ++i) {
    r[i] = std::exp(log_inner + span * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  r[0] = inner;
  r[count - 1] = outer;
  return r;
}

MoserShape moser_shape(int N, double t, int k) {
  require(k >= 1, ErrorKind::InvalidArgument, "k must be a positive integer");
  const double omega = sphere_area(N);
  require(t < N, ErrorKind::WeightIntegrability, "need t < N");
  const double log_length = k / (N - t);
  MoserShape shape;
  shape.slope_coefficient = std::pow((N - t) / (omega * k), 1.0 / N);
  shape.plateau_radius = std::exp(-log_length);
  shape.plateau_value = std::pow(1.0 / omega, 1.0 / N) * std::pow(log_length, (N - 1.0) / N);
  return shape;
}

MoserShape moser_shape_q(int N, double t, double q, int k) {
  require(q > N, ErrorKind::PowerViolation, "the power-q sequence needs q > N");
  MoserShape shape = moser_shape(N, t, k);
  shape.slope_coefficient *= (q - t) / (N - t);
  shape.plateau_radius = std::exp(-k / (q - t));
  return shape;
}

namespace {

// Samples c log(1/r) on [plateau_radius, 1] at uniform steps in log r.
RadialProfile sample_log_segment(int N, const MoserShape& shape, const LogSegmentSampling& sampling) {
  require(sampling.grad_norm_tol > 0.0, ErrorKind::InvalidArgument, "grad_norm_tol must be positive");
  const double log_length = -std::log(shape.plateau_radius);
  // Relative gradient-norm excess of linear interpolation on a log step h is (N-1) h^2 / 24.
  const double step = std::sqrt(24.0 * sampling.grad_norm_tol / (N - 1.0));
  const auto cells = static_cast<Eigen::Index>(std::max(1.0, std::ceil(log_length / step)));
  Eigen::VectorXd radii(cells + 1), values(cells + 1);
  for (Eigen::Index i = 0; i <= cells; ++i) {
    const double remaining = log_length * (1.0 - static_cast<double>(i) / static_cast<double>(cells));
    radii[i] = std::exp(-remaining);
    values[i] = shape.slope_coefficient * remaining;
  }
  radii[0] = shape.plateau_radius;
  values[0] = shape.plateau_value;
  radii[cells] = 1.0;
  values[cells] = 0.0;
  return RadialProfile(std::move(radii), std::move(values));
}

}  // namespace

RadialProfile moser_sequence(int N, double t, int k, LogSegmentSampling sampling) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  return sample_log_segment(N, moser_shape(N, t, k), sampling);
}

RadialProfile moser_sequence_q(int N, double t, double q, int k, LogSegmentSampling sampling) {
  require(N >= 2, ErrorKind::DimensionTooSmall, "N must be at least 2");
  return sample_log_segment(N, moser_shape_q(N, t, q, k), sampling);
}

double unit_uniform(std::mt19937_64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

RadialProfile random_profile(std::uint64_t seed, int node_count, double support_radius) {
  require(node_count >= 2, ErrorKind::InvalidArgument, "node_count must be at least 2");
  require(support_radius > 0.0, ErrorKind::InvalidArgument, "support_radius must be positive");
  std::mt19937_64 engine(seed);
  Eigen::VectorXd radii = geometric_grid(support_radius * 1e-4, support_radius, node_count);
  Eigen::VectorXd values(node_count);
  for (int i = 0; i < node_count; ++i) {
    values[i] = unit_uniform(engine);
  }
  values[node_count - 1] = 0.0;
  return RadialProfile(std::move(radii), std::move(values));
}

std::string profile_to_json(const RadialProfile& p) {
  nlohmann::json nodes = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) nodes.push_back({p.radii()[i], p.values()[i]});
  return nlohmann::json{{"nodes", nodes}}.dump();
}

RadialProfile profile_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  require(doc.is_object() && doc.contains("nodes") && doc["nodes"].is_array(), ErrorKind::Parse,
          "expected {\"nodes\": [[r, v], ...]}");
  std::vector<std::pair<double, double>> nodes;
  for (const auto& node : doc["nodes"]) {
    require(node.is_array() && node.size() == 2 && node[0].is_number() && node[1].is_number(), ErrorKind::Parse,
            "each node must be [r, v]");
    nodes.emplace_back(node[0].get<double>(), node[1].get<double>());
  }
  return make_profile(nodes).profile;
}

std::string profile_to_csv(const RadialProfile& p) {
  std::ostringstream out;
  out.precision(17);
  out << "r,value\n";
  for (Eigen::Index i = 0; i < p.size(); ++i) out << p.radii()[i] << "," << p.values()[i] << "\n";
  return out.str();
}

}  // namespace mtlab
