#include "hindsight/approx/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "hindsight/common/error.hpp"

namespace hindsight::approx {

PolyRegressor::PolyRegressor(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  require(!coefficients_.empty(), "PolyRegressor needs at least one coefficient");
}

namespace {

std::size_t count_distinct(std::span<const Sample> samples) {
  std::vector<double> states;
  states.reserve(samples.size());
  for (const auto& s : samples) states.push_back(s.state);
  std::sort(states.begin(), states.end());
  return static_cast<std::size_t>(
      std::unique(states.begin(), states.end()) - states.begin());
}

// Coefficients of p(s) = sum_k c_k ((s - center) / scale)^k in powers of s.
std::vector<double> expand_to_raw_basis(const Eigen::VectorXd& scaled,
                                        double center, double scale) {
  const auto n = static_cast<std::size_t>(scaled.size());
  std::vector<double> raw(n, 0.0);
  // binomial row and powers of (-center) built incrementally per k
  for (std::size_t k = 0; k < n; ++k) {
    const double ck = scaled(static_cast<Eigen::Index>(k)) / std::pow(scale, static_cast<double>(k));
    double binom = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
      raw[j] += ck * binom * std::pow(-center, static_cast<double>(k - j));
      binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
  }
  return raw;
}

}  // namespace

PolyRegressor poly_fit(std::span<const Sample> samples, std::size_t degree) {
  require(!samples.empty(), "poly_fit: no samples");
  for (const auto& s : samples) {
    require(std::isfinite(s.state) && std::isfinite(s.target),
            "poly_fit: non-finite sample");
  }
  const std::size_t distinct = count_distinct(samples);
  if (distinct < degree + 1) {
    throw RankDeficientError("poly_fit: " + std::to_string(distinct) +
                             " distinct states for degree " + std::to_string(degree));
  }

  const auto [lo_it, hi_it] = std::minmax_element(
      samples.begin(), samples.end(),
      [](const Sample& a, const Sample& b) { return a.state < b.state; });
  const double center = 0.5 * (lo_it->state + hi_it->state);
  const double half_width = 0.5 * (hi_it->state - lo_it->state);
  const double scale = half_width > 0.0 ? half_width : 1.0;

  const auto n = static_cast<Eigen::Index>(degree + 1);
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd powers(n);
  for (const auto& s : samples) {
    const double x = (s.state - center) / scale;
    powers(0) = 1.0;
    for (Eigen::Index k = 1; k < n; ++k) powers(k) = powers(k - 1) * x;
    normal.noalias() += powers * powers.transpose();
    rhs.noalias() += s.target * powers;
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  if (lu.rank() < n) {
    throw RankDeficientError("poly_fit: normal equations are singular");
  }
  const Eigen::VectorXd scaled = lu.solve(rhs);
  return PolyRegressor(expand_to_raw_basis(scaled, center, scale));
}

double poly_eval(const PolyRegressor& model, double state) {
  const auto c = model.coefficients();
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * state + *it;
  return acc;
}

double sum_squared_residuals(const PolyRegressor& model,
                             std::span<const Sample> samples) {
  double total = 0.0;
  for (const auto& s : samples) {
    const double r = poly_eval(model, s.state) - s.target;
    total += r * r;
  }
  return total;
}

}  // namespace hindsight::approx
