// Reference implementations used only as test oracles. They share no code
// with the library and favour obviousness over speed.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

// Gaussian elimination with partial pivoting in long double.
inline std::vector<long double> solve(std::vector<std::vector<long double>> a,
                                      std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// Least-squares polynomial coefficients from the raw normal equations
// sum_k x_k^(i+j) c_j = sum_k x_k^i y_k.
inline std::vector<double> normal_equations_fit(const std::vector<double>& xs,
                                                const std::vector<double>& ys,
                                                std::size_t degree) {
  const std::size_t n = degree + 1;
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n, 0.0L));
  std::vector<long double> b(n, 0.0L);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const long double xi = std::pow(static_cast<long double>(xs[k]), static_cast<int>(i));
      b[i] += xi * ys[k];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] += xi * std::pow(static_cast<long double>(xs[k]), static_cast<int>(j));
      }
    }
  }
  const auto c = solve(a, b);
  return {c.begin(), c.end()};
}

// Dense layer-by-layer forward pass. weights[l] is out x in.
struct DenseLayer {
  std::vector<std::vector<double>> weights;
  std::vector<double> bias;
  bool tanh_activation = false;
};

inline std::vector<double> dense_forward(const std::vector<DenseLayer>& layers,
                                         std::vector<double> x) {
  for (const auto& layer : layers) {
    std::vector<double> y(layer.weights.size());
    for (std::size_t r = 0; r < y.size(); ++r) {
      double s = layer.bias.empty() ? 0.0 : layer.bias[r];
      for (std::size_t c = 0; c < x.size(); ++c) s += layer.weights[r][c] * x[c];
      y[r] = layer.tanh_activation ? std::tanh(s) : s;
    }
    x = std::move(y);
  }
  return x;
}

// Central difference of a scalar function along coordinate i of `theta`.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> theta, std::size_t i, double h) {
  const double saved = theta[i];
  theta[i] = saved + h;
  const double up = f(theta);
  theta[i] = saved - h;
  const double down = f(theta);
  return (up - down) / (2.0 * h);
}

// Finite MDP in plain tables for brute-force policy enumeration.
struct Mdp {
  std::size_t n_states;
  std::size_t n_actions;
  std::vector<std::vector<double>> p;  // [s*nA+a][s']
  std::vector<double> r;               // [s*nA+a]
  std::vector<bool> terminal;
  double gamma;
};

// Q* as the element-wise maximum of Q^pi over every deterministic policy,
// each Q^pi obtained by an exact linear solve.
inline std::vector<double> enumerate_q_star(const Mdp& m) {
  const std::size_t nS = m.n_states, nA = m.n_actions;
  std::vector<double> best(nS * nA, -INFINITY);
  std::vector<std::size_t> policy(nS, 0);
  for (;;) {
    std::vector<std::vector<long double>> a(nS, std::vector<long double>(nS, 0.0L));
    std::vector<long double> b(nS, 0.0L);
    for (std::size_t s = 0; s < nS; ++s) {
      a[s][s] = 1.0L;
      if (m.terminal[s]) continue;
      const std::size_t i = s * nA + policy[s];
      b[s] = m.r[i];
      for (std::size_t t = 0; t < nS; ++t) {
        if (!m.terminal[t]) a[s][t] -= m.gamma * m.p[i][t];
      }
    }
    const auto v = solve(a, b);
    for (std::size_t s = 0; s < nS; ++s) {
      for (std::size_t act = 0; act < nA; ++act) {
        double q = 0.0;
        if (!m.terminal[s]) {
          long double future = 0.0L;
          for (std::size_t t = 0; t < nS; ++t) {
            if (!m.terminal[t]) future += m.p[s * nA + act][t] * v[t];
          }
          q = static_cast<double>(m.r[s * nA + act] + m.gamma * future);
        }
        if (q > best[s * nA + act]) best[s * nA + act] = q;
      }
    }
    std::size_t k = 0;
    while (k < nS && ++policy[k] == nA) policy[k++] = 0;
    if (k == nS) break;
  }
  return best;
}

// E[max of m iid uniform(-eps, eps)] by composite Simpson quadrature of
// x * m f(x) F(x)^(m-1).
inline double expected_max_uniform(std::size_t m, double eps, std::size_t intervals = 20000) {
  if (eps == 0.0) return 0.0;
  auto integrand = [&](double x) {
    const double f = 1.0 / (2.0 * eps);
    const double cdf = (x + eps) / (2.0 * eps);
    return x * static_cast<double>(m) * f * std::pow(cdf, static_cast<double>(m - 1));
  };
  const double h = 2.0 * eps / static_cast<double>(intervals);
  double sum = integrand(-eps) + integrand(eps);
  for (std::size_t i = 1; i < intervals; ++i) {
    sum += integrand(-eps + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

}  // namespace oracle
