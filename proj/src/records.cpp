#include "mtlab/records.hpp"

#include <algorithm>

#include "json.hpp"

namespace mtlab {

double relative_error(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

bool IdentityRecord::holds() const {
  if (relation == Relation::upper_bound) return lhs <= rhs + tol * std::max(1.0, std::abs(rhs));
  return rel_err <= tol;
}

void IdentityReport::add(std::string id, double lhs, double rhs, Relation relation, double record_tol) {
  IdentityRecord r{std::move(id), lhs, rhs, relative_error(lhs, rhs), relation, record_tol < 0.0 ? tol : record_tol};
  pass = pass && r.holds();
  identities.push_back(std::move(r));
}

double IdentityReport::max_rel_err() const {
  double worst = 0.0;
  for (const auto& r : identities) worst = std::max(worst, r.rel_err);
  return worst;
}

std::string to_json(const IdentityReport& report) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : report.identities) {
    list.push_back({{"id", r.id},
                    {"lhs", r.lhs},
                    {"rhs", r.rhs},
                    {"rel_err", r.rel_err},
                    {"relation", r.relation == Relation::equality ? "equality" : "upper_bound"}});
  }
  return nlohmann::json{{"identities", list}, {"pass", report.pass}, {"tol", report.tol}}.dump();
}

}  // namespace mtlab
