#ifndef MTLAB_ERROR_HPP
#define MTLAB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mtlab {

enum class ErrorKind {
  DimensionTooSmall,
  WeightOrder,
  WeightIntegrability,
  PowerViolation,
  NonpositiveAlpha,
  InvalidBeta,
  NonMonotoneRadii,
  NonpositiveRadius,
  EmptyProfile,
  NegativeRadius,
  NegativeArgument,
  ZeroDenominator,
  NonConvergentRefinement,
  OriginInput,
  NonpositiveLambda,
  SupercriticalConfig,
  FinitenessViolation,
  InadmissibleProfile,
  FitDegenerate,
  InvalidArgument,
  Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every validation failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace mtlab

#endif  // MTLAB_ERROR_HPP
