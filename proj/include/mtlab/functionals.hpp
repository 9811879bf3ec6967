#ifndef MTLAB_FUNCTIONALS_HPP
#define MTLAB_FUNCTIONALS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mtlab/exponents.hpp"
#include "mtlab/profiles.hpp"
#include "mtlab/quadrature.hpp"

namespace mtlab {

enum class FunctionalKind { F, G, Q, AT, CKN };

std::string_view to_string(FunctionalKind kind) noexcept;
FunctionalKind functional_kind_from_string(std::string_view name);

struct FunctionalReport {
  FunctionalKind kind = FunctionalKind::F;
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  ExponentConfig config;
  double grad_norm_used = 0.0;

  /// Whether the input met ||grad u||_N <= 1 (up to rounding).
  bool constraint_held() const { return grad_norm_used <= 1.0 + 1e-10; }
};

/// int Phi_N(alpha |u|^{N'}) |x|^{-t} / ||u||_{N,s}^{N(N-t)/(N-s)}
FunctionalReport F_ratio(const RadialProfile& p, const ExponentConfig& cfg, const QuadratureOptions& opts = {});

/// int e^{alpha |u|^{N'}} |u|^N |x|^{-t} / ||u||_{N,s}^{N(N-t)/(N-s)}
FunctionalReport G_ratio(const RadialProfile& p, const ExponentConfig& cfg, const QuadratureOptions& opts = {});

/// int e^{alpha |u|^{N'}} |u|^q |x|^{-t} / (int |u|^q |x|^{-s})^{(N-t)/(N-s)}, needs cfg.q > N.
FunctionalReport q_ratio(const RadialProfile& p, const ExponentConfig& cfg, const QuadratureOptions& opts = {});

/// int Phi_N(alpha (1 - beta/N) |u|^{N'}) |x|^{-beta} / ||u||_N^{N-beta}
FunctionalReport at_ratio(const RadialProfile& p, int N, double alpha, double beta,
                          const QuadratureOptions& opts = {});

/// ||u||_{q,t} / (||u||_{q,s}^{theta} ||grad u||_N^{1-theta}), theta = (N-t)/(N-s).
double ckn_ratio(const RadialProfile& p, const ExponentConfig& cfg, double q, const QuadratureOptions& opts = {});
FunctionalReport ckn_report(const RadialProfile& p, const ExponentConfig& cfg, double q,
                            const QuadratureOptions& opts = {});

/// Dispatch for F, G, Q.
FunctionalReport ratio(FunctionalKind kind, const RadialProfile& p, const ExponentConfig& cfg,
                       const QuadratureOptions& opts = {});

/// Flat JSON record.
std::string to_json(const FunctionalReport& report);

/// CSV with header seed,kind,value,numerator,denominator,grad_norm.
std::string reports_to_csv(const std::vector<std::pair<std::uint64_t, FunctionalReport>>& rows);

}  // namespace mtlab

#endif  // MTLAB_FUNCTIONALS_HPP
