#ifndef MTLAB_EXPERIMENTS_HPP
#define MTLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mtlab/exponents.hpp"
#include "mtlab/functionals.hpp"
#include "mtlab/optimize.hpp"
#include "mtlab/records.hpp"

namespace mtlab {

/// Truncated-log sequence for kind (the power-q variant for Q), ratio at cfg.alpha.
/// For alpha >= alpha_crit the record carries the known lower bound on the
/// numerator divided by the computed denominator (G and Q only).
std::vector<SweepRecord> sharpness_sweep(const ExponentConfig& cfg, FunctionalKind kind, int k_min, int k_max,
                                         const QuadratureOptions& quad = {}, LogSegmentSampling sampling = {});

/// Numerator lower bound at alpha = alpha_crit: k^{N-1}/(N-t)^N for G,
/// omega^{1-q/N}/(q-t) (k/(N-t))^{q/N'} for Q; NaN for F.
double sharpness_numerator_bound(const ExponentConfig& cfg, FunctionalKind kind, int k);

struct SweepSummary {
  bool strictly_increasing = true;
  double growth = 0.0;        // last ratio / first ratio
  double spread = 0.0;        // max ratio / min ratio
  bool bounds_hold = true;    // ratio >= bound - tol wherever a bound applies
};

SweepSummary summarize_sweep(const std::vector<SweepRecord>& records, double bound_tol = 1e-6);

/// CSV with header k,ratio,paper_bound,grad_norm.
std::string sweep_to_csv(const std::vector<SweepRecord>& records);

struct FitPoint {
  double alpha_frac = 0.0;
  double estimate = 0.0;
  double log_gap = 0.0;  // log(1 - alpha_frac^{N-1})
  bool converged = false;
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double predicted = 0.0;  // -(N - beta)/N
  std::vector<FitPoint> points;
};

/// Least-squares slope of log AT-estimate against log(1 - (alpha/alpha_N)^{N-1}).
ExponentFit at_exponent_fit(int N, double beta, const std::vector<double>& alpha_fracs,
                            const OptimizerParams& params);

/// CSV with header alpha_frac,estimate,log_gap.
std::string fit_to_csv(const ExponentFit& fit);

/// ((1 - x^{(N-1)a/N}) / x^{(N-1)b/N})^{(N-beta)/b} with x = alpha/alpha_N.
double mt_prefactor(int N, double a, double b, double beta, double alpha_frac);

struct MTIdentityRow {
  double alpha = 0.0;
  double prefactor = 0.0;
  double at_estimate = 0.0;
  double product = 0.0;
};

struct MTIdentityCheck {
  IdentityReport report;  // one record: MT estimate vs sup of the products
  std::vector<MTIdentityRow> rows;
  MTResult mt;
};

/// Compares the direct MT_{a,b}(beta) estimate with the sup over alpha_fracs of
/// prefactor * AT estimate. Both are lower estimates of suprema; agreement is within `tol`.
MTIdentityCheck mt_identity_check(int N, double a, double b, double beta, const std::vector<double>& alpha_fracs,
                                  const OptimizerParams& params, double tol = 0.15);

/// CSV with header alpha,prefactor,AT_est,product.
std::string identity_rows_to_csv(const std::vector<MTIdentityRow>& rows);

/// CKN ratio over random_profile(seed + i, 16, 1) for i < count.
std::vector<std::pair<std::uint64_t, FunctionalReport>> ckn_sweep(const ExponentConfig& cfg, double q, int count,
                                                                   std::uint64_t seed,
                                                                   const QuadratureOptions& quad = {});

}  // namespace mtlab

#endif  // MTLAB_EXPERIMENTS_HPP
