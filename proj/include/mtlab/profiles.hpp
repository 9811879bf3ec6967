#ifndef MTLAB_PROFILES_HPP
#define MTLAB_PROFILES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace mtlab {

/// Compactly supported radial function u(x) = u~(|x|), piecewise linear in r.
///
/// Nodes r_0 < r_1 < ... < r_M with r_0 > 0. The profile is constant
/// (= values[0]) on [0, r_0], linear between nodes, and zero from r_M on;
/// values[M] is always exactly 0.
class RadialProfile {
 public:
  RadialProfile() = default;

  /// Takes already-validated data; use make_profile for untrusted input.
  RadialProfile(Eigen::VectorXd radii, Eigen::VectorXd values);

  const Eigen::VectorXd& radii() const noexcept { return radii_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return radii_.size(); }
  Eigen::Index cell_count() const noexcept { return radii_.size() - 1; }

  double plateau_radius() const { return radii_[0]; }
  double plateau_value() const { return values_[0]; }
  double support_radius() const { return radii_[radii_.size() - 1]; }

  /// Slope of cell i, i.e. on [r_i, r_{i+1}].
  double slope(Eigen::Index i) const { return (values_[i + 1] - values_[i]) / (radii_[i + 1] - radii_[i]); }

  double operator()(double r) const;

  bool is_zero() const { return values_.cwiseAbs().maxCoeff() == 0.0; }

  /// Same radii, new values. Last value must be 0.
  RadialProfile with_values(Eigen::VectorXd values) const;

  /// Pointwise multiple c * u.
  RadialProfile scaled(double factor) const;

 private:
  Eigen::VectorXd radii_;
  Eigen::VectorXd values_;
};

/// r -> amplitude * base(r^radial_exponent).
struct ComposedProfile {
  RadialProfile base;
  double radial_exponent = 1.0;
  double amplitude = 1.0;

  double operator()(double r) const;
};

struct ProfileBuild {
  RadialProfile profile;
  bool appended_terminal_zero = false;
};

/// Validates (radius, value) pairs. A missing terminal zero is appended at
/// twice the last radius and reported through `appended_terminal_zero`.
ProfileBuild make_profile(const std::vector<std::pair<double, double>>& nodes);

/// Convenience that drops the report.
RadialProfile profile_from_nodes(const std::vector<std::pair<double, double>>& nodes);

struct LogSegmentSampling {
  // Target excess of the sampled gradient N-norm over the exact one.
  double grad_norm_tol = 1e-9;
};

/// Truncated-logarithm test function, unit gradient N-norm:
///   ((N-t)/(omega k))^{1/N} log(1/r) on (e^{-k/(N-t)}, 1), constant below, zero above.
RadialProfile moser_sequence(int N, double t, int k, LogSegmentSampling sampling = {});

/// Power-q variant: slope factor ((N-t)/(omega k))^{1/N} (q-t)/(N-t) on
/// (e^{-k/(q-t)}, 1) with plateau (1/omega)^{1/N} (k/(N-t))^{1/N'} below.
RadialProfile moser_sequence_q(int N, double t, double q, int k, LogSegmentSampling sampling = {});

/// Plateau value and logarithmic slope of the truncated-log sequences.
struct MoserShape {
  double slope_coefficient;
  double plateau_radius;
  double plateau_value;
};
MoserShape moser_shape(int N, double t, int k);
MoserShape moser_shape_q(int N, double t, double q, int k);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double unit_uniform(std::mt19937_64& engine);

/// Deterministic nonnegative profile on a geometric grid over
/// [support_radius * 1e-4, support_radius]; values uniform in [0, 1), last value 0.
RadialProfile random_profile(std::uint64_t seed, int node_count, double support_radius);

/// Geometric node grid from inner to outer radius (inclusive), `count` nodes.
Eigen::VectorXd geometric_grid(double inner, double outer, Eigen::Index count);

double evaluate(const RadialProfile& p, double r);
double evaluate(const ComposedProfile& p, double r);

/// {"nodes": [[r, v], ...]}
std::string profile_to_json(const RadialProfile& p);
RadialProfile profile_from_json(const std::string& text);

/// CSV with header r,value.
std::string profile_to_csv(const RadialProfile& p);

}  // namespace mtlab

#endif  // MTLAB_PROFILES_HPP
