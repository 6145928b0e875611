#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hindsight::approx {

struct Sample {
  double state;
  double target;
};

/// Polynomial in the raw state: coefficient of s^k is stored at index k.
class PolyRegressor {
 public:
  explicit PolyRegressor(std::vector<double> coefficients);

  std::size_t degree() const { return coefficients_.size() - 1; }
  std::span<const double> coefficients() const { return coefficients_; }

 private:
  std::vector<double> coefficients_;
};

/// Least-squares polynomial fit of the given degree.
///
/// States are mapped affinely onto [-1, 1] before the normal equations are
/// formed and the solution is expanded back into the raw monomial basis.
/// Throws RankDeficientError when there are fewer than degree+1 distinct
/// states, ContractViolation when `samples` is empty or non-finite.
PolyRegressor poly_fit(std::span<const Sample> samples, std::size_t degree);

/// Horner evaluation.
double poly_eval(const PolyRegressor& model, double state);

double sum_squared_residuals(const PolyRegressor& model,
                             std::span<const Sample> samples);

}  // namespace hindsight::approx
