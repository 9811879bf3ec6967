#ifndef MTLAB_RECORDS_HPP
#define MTLAB_RECORDS_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mtlab/exponents.hpp"

namespace mtlab {

enum class Relation { equality, upper_bound };

/// One checked relation lhs = rhs (or lhs <= rhs).
struct IdentityRecord {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  Relation relation = Relation::equality;
  double tol = 0.0;

  bool holds() const;
};

struct IdentityReport {
  std::vector<IdentityRecord> identities;
  double tol = 0.0;
  bool pass = true;

  /// Appends a record at the report tolerance (or `tol` when given) and updates `pass`.
  void add(std::string id, double lhs, double rhs, Relation relation = Relation::equality, double tol = -1.0);
  double max_rel_err() const;
};

/// |lhs - rhs| / max(|lhs|, |rhs|, 1e-300)
double relative_error(double lhs, double rhs);

/// {"identities": [{"id", "lhs", "rhs", "rel_err", "relation"}], "pass": bool, "tol": tol}
std::string to_json(const IdentityReport& report);

/// One point of a sweep (over k, alpha, or a family index).
struct SweepRecord {
  double variable = 0.0;
  double ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  // Lower bound on `ratio` where one applies, NaN otherwise.
  double lower_bound = std::numeric_limits<double>::quiet_NaN();
  double grad_norm = 0.0;
  ExponentConfig config;

  bool has_bound() const { return !std::isnan(lower_bound); }
};

}  // namespace mtlab

#endif  // MTLAB_RECORDS_HPP
