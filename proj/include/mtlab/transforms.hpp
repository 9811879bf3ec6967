#ifndef MTLAB_TRANSFORMS_HPP
#define MTLAB_TRANSFORMS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "mtlab/exponents.hpp"
#include "mtlab/profiles.hpp"
#include "mtlab/quadrature.hpp"
#include "mtlab/records.hpp"

namespace mtlab {

/// v(rho) = ((N-e)/N)^{1/N'} u(rho^{N/(N-e)}).
ComposedProfile peel_map(const RadialProfile& p, int N, double e);

/// Compares weighted integrals of u against unweighted integrals of its peel image
/// v = peel_map(u, N, t): N-th power mass, Phi_N and exponential functionals,
/// q-power identities for j in {q, q+2} when q > N, and the gradient norms.
IdentityReport verify_peel_identities(const RadialProfile& p, const ExponentConfig& cfg, double tol = 1e-7,
                                      const QuadratureOptions& opts = {});

/// x -> |x|^{t/(N-t)} x
Eigen::VectorXd peel_point(int N, double t, const Eigen::VectorXd& x);

/// Closed-form Jacobian determinant N/(N-t) |x|^{Nt/(N-t)} of peel_point.
double jacobian_det(int N, double t, const Eigen::VectorXd& x);

/// Central differences with step 1e-5 |x| per coordinate, then an LU determinant.
double jacobian_det_fd(int N, double t, const Eigen::VectorXd& x);

IdentityReport verify_jacobian(int N, double t, const std::vector<Eigen::VectorXd>& points, double tol = 1e-5);

/// For u(x) = exp(-|x - c|^2) and v(x) = ((N-t)/N)^{1/N'} u(peel_point(x)), checks
///   |grad v(x)| <= (N/(N-t))^{1/N} |x|^{t/(N-t)} |grad u(peel_point(x))|
/// with slack `slack` * max(1, rhs), plus the finite-difference Jacobian determinant at each point.
IdentityReport verify_nonradial_gradient_bound(int N, double t, const std::vector<Eigen::VectorXd>& points,
                                               const Eigen::VectorXd& bump_center, double slack = 1e-4,
                                               double jacobian_tol = 1e-5);

/// Uniform points in the annulus inner < |x| < outer.
std::vector<Eigen::VectorXd> annulus_points(int N, int count, double inner, double outer, std::uint64_t seed);

/// w(t) = N^{(N-1)/N} omega^{1/N} u(e^{-t/N}). Nodes are stored in t; between
/// nodes w is linear in e^{-t/N}, so it is exactly the substituted profile.
class LogProfile {
 public:
  LogProfile() = default;
  LogProfile(int N, Eigen::VectorXd t_nodes, Eigen::VectorXd w_nodes);

  int dimension() const noexcept { return N_; }
  const Eigen::VectorXd& t_nodes() const noexcept { return t_; }
  const Eigen::VectorXd& w_nodes() const noexcept { return w_; }
  Eigen::Index size() const noexcept { return t_.size(); }

  /// w = 0 below the first node, w = last node value above the last one.
  double operator()(double t) const;
  double derivative(double t) const;

  LogProfile scaled(double factor) const;

  /// int |w'|^N dt
  double energy(const QuadratureOptions& opts = {}) const;
  /// int g(w(t)) e^{-t} dt for g(0) = 0; the tail beyond the last node is exact.
  double weighted_integral(const std::function<double(double)>& g, const QuadratureOptions& opts = {}) const;

 private:
  int N_ = 2;
  Eigen::VectorXd t_;
  Eigen::VectorXd w_;
  Eigen::VectorXd r_;  // e^{-t/N}
};

/// N^{(N-1)/N} omega_{N-1}^{1/N}
double log_substitution_constant(int N);

LogProfile log_substitution(const RadialProfile& p, int N);
RadialProfile inverse_log_substitution(const LogProfile& w);

/// Gradient energy, N-th power mass and exponential functional on both sides of the substitution.
IdentityReport verify_log_identities(const RadialProfile& p, int N, double alpha, double tol = 1e-7,
                                     const QuadratureOptions& opts = {});

/// u(lambda .), i.e. nodes (r / lambda, v).
RadialProfile dilate(const RadialProfile& p, double lambda);

/// Dilation making ||u||_{L^N(|x|^{-s})} = 1.
RadialProfile renormalize(const RadialProfile& p, int N, double s, const QuadratureOptions& opts = {});

/// Smallest C with 1 + x^{1/N'} <= ((1 + eps) x + C)^{1/N'} for all x >= 0.
double growth_constant(int N, double eps);

struct GrowthBoundCheck {
  double epsilon = 0.0;
  double fitted_c = 0.0;    // max of w^{N'} - (1+eps)(t - T0) over the family, t >= T0
  double analytic_c = 0.0;  // growth_constant(N, eps)
  int violations = 0;       // node points above the analytic bound
};

struct ProbeResult {
  std::vector<SweepRecord> records;  // variable = member index, ratio = LHS/RHS
  double c_hat = 0.0;                // max ratio
  std::vector<double> thresholds;    // T0 per member (+inf if w never exceeds 1)
  std::vector<GrowthBoundCheck> growth;
};

/// sup{t : w(t) <= 1} for nondecreasing w.
double crossing_threshold(const LogProfile& w);

/// Ratio int e^{beta w^{N'}} w^N e^{-t} / int w^N e^{-t} per member after scaling
/// to int |w'|^N = 1, plus the growth bound at each eps.
ProbeResult growth_inequality_probe(const std::vector<LogProfile>& family, double beta,
                                       const std::vector<double>& epsilons = {0.1, 0.5},
                                       const QuadratureOptions& opts = {});

/// Seeded nonnegative nondecreasing members, each vanishing for t <= 0.
std::vector<LogProfile> admissible_log_family(int N, int count, std::uint64_t seed);

}  // namespace mtlab

#endif  // MTLAB_TRANSFORMS_HPP
