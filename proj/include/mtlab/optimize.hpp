#ifndef MTLAB_OPTIMIZE_HPP
#define MTLAB_OPTIMIZE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mtlab/exponents.hpp"
#include "mtlab/functionals.hpp"
#include "mtlab/profiles.hpp"
#include "mtlab/quadrature.hpp"

namespace mtlab {

struct OptimizerParams {
  int node_count = 64;
  int max_iterations = 4000;
  double step_init = 1e-3;
  double rel_tol = 1e-10;
  int restarts = 5;
  std::uint64_t seed = 1;
  // Innermost node of the geometric grid; the support is fixed at r = 1.
  double inner_radius = 1e-4;
  QuadratureOptions quad;
};

void validate(const OptimizerParams& params);

struct MaximizerResult {
  RadialProfile best_profile;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<int, double>> history;
  double constraint_residual = 0.0;
  // Final value of every restart, in seed order.
  std::vector<double> restart_values;
};

/// Includes the full best profile.
std::string to_json(const MaximizerResult& result);

/// CSV with header iteration,value.
std::string history_to_csv(const MaximizerResult& result);

/// A / B^p with A, B radial integrals of the profile.
struct RatioObjective {
  int N = 2;
  IntegralSpec numerator;
  IntegralSpec denominator;
  double exponent = 1.0;
  QuadratureOptions quad;

  double value(const RadialProfile& p) const;
  /// Value and derivative in all node values (the last one included).
  double value_and_gradient(const RadialProfile& p, Eigen::VectorXd& gradient) const;
};

/// F, G or Q ratio of the config.
RatioObjective ratio_objective(const ExponentConfig& cfg, FunctionalKind kind, const QuadratureOptions& quad = {});

/// Adachi-Tanaka ratio at (alpha, beta).
RatioObjective at_objective(int N, double alpha, double beta, const QuadratureOptions& quad = {});

/// Monotone ascent along Polak-Ribiere directions built from `direction`:
/// x <- retract(x + eta d), eta halved until the value increases, then doubled
/// while it keeps increasing. Converged after two consecutive small steps along
/// the plain direction, or when no increase is found along it.
struct AscentProblem {
  std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& gradient)> evaluate;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& x, const Eigen::VectorXd& gradient)> direction;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& x)> retract;
};

struct AscentResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<int, double>> history;
};

AscentResult ascend(const AscentProblem& problem, Eigen::VectorXd x0, int max_iterations, double step_init,
                    double rel_tol);

/// Maximizes the objective over node values on the grid under ||grad u||_N = 1.
/// Sobolev-preconditioned gradient, projected onto the constraint tangent, then
/// retracted by u / ||grad u||_N.
MaximizerResult maximize_on_grid(const RatioObjective& objective, const Eigen::VectorXd& radii,
                                 const OptimizerParams& params, double step_scale);

/// F, G or Q over unit-gradient profiles; rejects alpha >= alpha_crit.
MaximizerResult maximize_ratio(const ExponentConfig& cfg, FunctionalKind kind, const OptimizerParams& params);

/// Lower estimate of AT(alpha, beta); needs 0 < alpha < alpha_N.
MaximizerResult estimate_AT(int N, double alpha, double beta, const OptimizerParams& params);

struct MTResult {
  MaximizerResult result;
  double theta = 0.0;  // ||grad u||_N^a at the optimum
  double alpha = 0.0;  // alpha_N theta^{N'/a}, the inner AT coefficient
};

/// Inner value at level theta: sup of the MT objective over u with
/// ||grad u||_N^a = theta and ||u||_N^b = 1 - theta.
double mt_inner_value(int N, double a, double b, double beta, double theta, const OptimizerParams& params,
                      MaximizerResult* inner = nullptr);

/// Lower estimate of MT_{a,b}(beta): golden-section search over theta.
MTResult estimate_MT(int N, double a, double b, double beta, const OptimizerParams& params,
                     double theta_lo = 0.02, double theta_hi = 0.98, double theta_tol = 2e-3);

/// Profile nodes (knee, height), (1/2, 1), (1, 0), normalized to ||grad u||_N = 1.
RadialProfile plateau_knee_profile(int N, double height, double knee);

struct PlateauKneeScan {
  Eigen::VectorXd heights;
  Eigen::VectorXd knees;
  Eigen::MatrixXd values;  // values(i, j) at heights[i], knees[j]
  double best_value = 0.0;
  double best_height = 0.0;
  double best_knee = 0.0;
  // Largest change of the value from the best point to any neighbouring grid point.
  double resolution = 0.0;
};

/// Brute-force grid over height in (0, max_height] (uniform) and knee in [min_knee, max_knee] (geometric).
PlateauKneeScan plateau_knee_scan(const ExponentConfig& cfg, FunctionalKind kind, int height_count, int knee_count,
                                  double max_height = 20.0, double min_knee = 1e-4, double max_knee = 0.499,
                                  const QuadratureOptions& quad = {});

/// The ascent engine on the two plateau-knee parameters, central-difference gradient.
MaximizerResult maximize_plateau_knee(const ExponentConfig& cfg, FunctionalKind kind, const OptimizerParams& params,
                                      double height0, double knee0);

}  // namespace mtlab

#endif  // MTLAB_OPTIMIZE_HPP
