#include <doctest.h>

#include <cmath>
#include <vector>

#include "hindsight/approx/dueling.hpp"
#include "hindsight/approx/mlp.hpp"
#include "hindsight/approx/polynomial.hpp"
#include "hindsight/approx/q_network.hpp"
#include "hindsight/common/error.hpp"
#include "oracles.hpp"

using namespace hindsight;
using namespace hindsight::approx;

namespace {

std::vector<Sample> samples_of(const std::vector<double>& xs, double (*f)(double)) {
  std::vector<Sample> out;
  for (double x : xs) out.push_back({x, f(x)});
  return out;
}

double square(double x) { return x * x; }
double sine(double x) { return std::sin(x); }

MLPSpec linear_spec(std::size_t in, std::size_t out, bool bias = true) {
  MLPSpec spec;
  spec.layer_widths = {in, out};
  spec.bias = bias;
  return spec;
}

MLPSpec tanh_243() {
  MLPSpec spec;
  spec.layer_widths = {2, 4, 3};
  spec.hidden_activations = {Activation::tanh};
  return spec;
}

std::vector<oracle::DenseLayer> to_dense(const MLPSpec& spec, const ParamVector& p) {
  std::vector<oracle::DenseLayer> layers;
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    oracle::DenseLayer layer;
    const std::size_t in = spec.layer_widths[l], out = spec.layer_widths[l + 1];
    layer.weights.assign(out, std::vector<double>(in));
    for (std::size_t r = 0; r < out; ++r) {
      for (std::size_t c = 0; c < in; ++c) layer.weights[r][c] = p.weight(l, r, c);
      if (spec.bias) layer.bias.push_back(p[p.bias_index(l, r)]);
    }
    layer.tanh_activation = spec.activation(l) == Activation::tanh;
    layers.push_back(std::move(layer));
  }
  return layers;
}

MLPSpec random_spec(Rng& rng) {
  MLPSpec spec;
  const std::size_t depth = 1 + uniform_index(rng, 3);
  spec.layer_widths.push_back(1 + uniform_index(rng, 4));
  for (std::size_t l = 0; l < depth; ++l) spec.layer_widths.push_back(1 + uniform_index(rng, 5));
  spec.hidden_activations.assign(depth - 1, uniform01(rng) < 0.5 ? Activation::tanh : Activation::identity);
  spec.output_activation = uniform01(rng) < 0.5 ? Activation::tanh : Activation::identity;
  spec.bias = uniform01(rng) < 0.8;
  return spec;
}

// Max relative error between mlp_backward and central differences of the
// scalar <output_grad, forward>.
double gradient_check_error(const MLPSpec& spec, const ParamVector& params,
                            const std::vector<double>& input, const std::vector<double>& g) {
  const auto analytic = mlp_backward(spec, params, input, g);
  auto scalar = [&](const std::vector<double>& theta) {
    ParamVector p(spec);
    for (std::size_t i = 0; i < theta.size(); ++i) p[i] = theta[i];
    const auto out = mlp_forward(spec, p, input);
    double s = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) s += g[k] * out[k];
    return s;
  };
  const std::vector<double> theta(params.values().begin(), params.values().end());
  double worst = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double fd = oracle::central_difference(scalar, theta, i, 1e-5);
    const double err = std::abs(fd - analytic[i]) / std::max(1.0, std::abs(fd) + std::abs(analytic[i]));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace

TEST_SUITE("approx") {

TEST_CASE("poly_fit constant data with degree 0") {
  const std::vector<Sample> s = {{0, 3}, {1, 3}, {2, 3}};
  const auto model = poly_fit(s, 0);
  REQUIRE(model.degree() == 0);
  CHECK(model.coefficients()[0] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("poly_fit interpolates seven points of s^2 at degree 6") {
  const auto s = samples_of({-3, -2, -1, 0, 1, 2, 3}, square);
  const auto model = poly_fit(s, 6);
  CHECK(model.coefficients().size() == 7);
  for (const auto& x : s) CHECK(std::abs(poly_eval(model, x.state) - x.target) < 1e-10);
}

TEST_CASE("poly_fit of sin on eleven integers matches raw normal equations") {
  std::vector<double> xs, ys;
  for (int k = -5; k <= 5; ++k) {
    xs.push_back(k);
    ys.push_back(std::sin(k));
  }
  const auto expected = oracle::normal_equations_fit(xs, ys, 6);
  std::vector<Sample> s;
  for (std::size_t i = 0; i < xs.size(); ++i) s.push_back({xs[i], ys[i]});
  const auto model = poly_fit(s, 6);
  for (std::size_t j = 0; j <= 6; ++j) {
    CHECK(std::abs(model.coefficients()[j] - expected[j]) < 1e-8);
  }
}

TEST_CASE("poly_fit rejects too few distinct states") {
  const std::vector<Sample> s = {{1, 0}, {1, 1}, {2, 0}};
  CHECK_THROWS_AS(poly_fit(s, 2), RankDeficientError);
  CHECK_THROWS_AS(poly_fit(std::vector<Sample>{}, 0), ContractViolation);
}

TEST_CASE("poly_fit coefficients are a least-squares minimum") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Sample> s;
    for (int k = -6; k <= 6; ++k) s.push_back({double(k), uniform_real(rng, -2, 2)});
    const std::size_t degree = uniform_index(rng, 7);
    const auto model = poly_fit(s, degree);
    const double base = sum_squared_residuals(model, s);
    for (std::size_t j = 0; j <= degree; ++j) {
      for (double step : {-1e-3, 1e-3}) {
        std::vector<double> c(model.coefficients().begin(), model.coefficients().end());
        c[j] += step;
        CHECK(sum_squared_residuals(PolyRegressor(c), s) >= base);
      }
    }
  }
}

TEST_CASE("poly_eval examples") {
  CHECK(poly_eval(PolyRegressor({1, 2}), 3) == 7);
  CHECK(poly_eval(PolyRegressor({0, 0, 1}), -2) == 4);
  const PolyRegressor any({0.25, -3, 8, 1e3});
  CHECK(poly_eval(any, 0) == 0.25);
  CHECK(std::isfinite(poly_eval(any, 1e50)));
}

TEST_CASE("mlp spec validation") {
  MLPSpec bad;
  bad.layer_widths = {3};
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  auto spec = tanh_243();
  CHECK(spec.param_count() == 2 * 4 + 4 + 4 * 3 + 3);
  CHECK(ParamVector(spec).size() == spec.param_count());
}

TEST_CASE("param layout is a bijection") {
  for (bool bias : {true, false}) {
    auto spec = tanh_243();
    spec.bias = bias;
    ParamVector p(spec);
    std::vector<int> hits(p.size(), 0);
    for (std::size_t l = 0; l < spec.num_layers(); ++l) {
      for (std::size_t r = 0; r < spec.layer_widths[l + 1]; ++r) {
        for (std::size_t c = 0; c < spec.layer_widths[l]; ++c) ++hits[p.weight_index(l, r, c)];
        if (bias) ++hits[p.bias_index(l, r)];
      }
    }
    for (int h : hits) CHECK(h == 1);
  }
}

TEST_CASE("mlp_forward zero network gives zero output") {
  auto spec = linear_spec(3, 2);
  ParamVector p(spec);
  const auto out = mlp_forward(spec, p, std::vector<double>{1, 2, 3});
  CHECK(out == std::vector<double>{0, 0});
}

TEST_CASE("mlp_forward identity layer copies the input") {
  auto spec = linear_spec(3, 3);
  ParamVector p(spec);
  for (std::size_t i = 0; i < 3; ++i) p.weight(0, i, i) = 1.0;
  const std::vector<double> x = {0.5, -2, 7};
  CHECK(mlp_forward(spec, p, x) == x);
}

TEST_CASE("mlp_forward matches a hand-rolled dense forward pass") {
  const auto spec = tanh_243();
  Rng rng(11);
  const auto p = init_params(spec, rng);
  const std::vector<double> x = {1, -1};
  const auto out = mlp_forward(spec, p, x);
  const auto expected = oracle::dense_forward(to_dense(spec, p), x);
  REQUIRE(out.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(out[k] - expected[k]) <= 1e-12);
  CHECK(mlp_forward(spec, p, x) == out);
}

TEST_CASE("mlp_forward rejects width mismatch") {
  const auto spec = tanh_243();
  ParamVector p(spec);
  CHECK_THROWS_AS(mlp_forward(spec, p, std::vector<double>{1, 2, 3}), ContractViolation);
  CHECK_THROWS_AS(mlp_backward(spec, p, std::vector<double>{1, 2}, std::vector<double>{1}),
                  ContractViolation);
}

TEST_CASE("init_params stays within the fan-in bound") {
  const auto spec = tanh_243();
  Rng rng(3);
  const auto p = init_params(spec, rng);
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(double(spec.layer_widths[l]));
    for (std::size_t r = 0; r < spec.layer_widths[l + 1]; ++r) {
      for (std::size_t c = 0; c < spec.layer_widths[l]; ++c) CHECK(std::abs(p.weight(l, r, c)) <= bound);
    }
  }
}

TEST_CASE("mlp_backward with zero output gradient is zero") {
  const auto spec = tanh_243();
  Rng rng(5);
  const auto p = init_params(spec, rng);
  const auto g = mlp_backward(spec, p, std::vector<double>{0.3, 0.7}, std::vector<double>{0, 0, 0});
  for (double v : g.values()) CHECK(v == 0.0);
}

TEST_CASE("mlp_backward of a linear layer picks out row k") {
  const auto spec = linear_spec(3, 2);
  Rng rng(5);
  const auto p = init_params(spec, rng);
  const std::vector<double> x = {0.5, -1.5, 2};
  const auto g = mlp_backward(spec, p, x, std::vector<double>{0, 1});
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(g.weight(0, r, c) == (r == 1 ? x[c] : 0.0));
    CHECK(g[g.bias_index(0, r)] == (r == 1 ? 1.0 : 0.0));
  }
}

TEST_CASE("mlp_backward matches central differences on the 2-4-3 tanh net") {
  const auto spec = tanh_243();
  Rng rng(21);
  const auto p = init_params(spec, rng);
  CHECK(gradient_check_error(spec, p, {0.4, -0.9}, {1.0, -0.5, 2.0}) <= 1e-5);
}

TEST_CASE("mlp_backward matches central differences on random specs") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = random_spec(rng);
    const auto p = init_params(spec, rng);
    std::vector<double> x(spec.input_width()), g(spec.output_width());
    for (auto& v : x) v = uniform_real(rng, -1, 1);
    for (auto& v : g) v = uniform_real(rng, -1, 1);
    CHECK(gradient_check_error(spec, p, x, g) <= 1e-5);
  }
}

TEST_CASE("dueling_aggregate examples") {
  CHECK(dueling_aggregate(std::vector<double>{1, -1}, 0) == std::vector<double>{1, -1});
  const auto q = dueling_aggregate(std::vector<double>{2, 0, 1}, 5);
  CHECK(q == std::vector<double>{6, 4, 5});
  for (double v : dueling_aggregate(std::vector<double>{3.5, 3.5, 3.5, 3.5}, -2)) CHECK(v == -2);
  CHECK_THROWS_AS(dueling_aggregate(std::vector<double>{}, 0), ContractViolation);
}

TEST_CASE("dueling_aggregate ignores a constant advantage shift") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(1 + uniform_index(rng, 6));
    for (auto& v : a) v = uniform_real(rng, -3, 3);
    const double v = uniform_real(rng, -3, 3);
    const double c = uniform_real(rng, -10, 10);
    auto shifted = a;
    for (auto& x : shifted) x += c;
    const auto q1 = dueling_aggregate(a, v), q2 = dueling_aggregate(shifted, v);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(q1[i] - q2[i]) <= 1e-12);
  }
}

TEST_CASE("dueling network gradient matches central differences") {
  DuelingSpec spec;
  spec.shared.layer_widths = {3, 5};
  spec.shared.output_activation = Activation::tanh;
  spec.advantage.layer_widths = {5, 4};
  spec.value.layer_widths = {5, 1};
  Rng rng(8);
  auto net = QNetwork::make_dueling(spec, rng);
  CHECK(net.num_actions() == 4);
  const std::vector<double> x = {0.2, -0.4, 0.9};
  const std::vector<double> g = {1, -2, 0.5, 0.25};
  const auto analytic = net.gradient(x, g);
  for (std::size_t b = 0; b < analytic.size(); ++b) {
    for (std::size_t i = 0; i < analytic[b].size(); ++i) {
      auto probe = [&](double shift) {
        auto copy = net;
        copy.blocks()[b][i] += shift;
        const auto q = copy.q_values(x);
        double s = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) s += g[k] * q[k];
        return s;
      };
      const double fd = (probe(1e-5) - probe(-1e-5)) / 2e-5;
      CHECK(std::abs(fd - analytic[b][i]) / std::max(1.0, std::abs(fd)) <= 1e-5);
    }
  }
}

TEST_CASE("dueling head rejects mismatched streams") {
  DuelingSpec spec;
  spec.shared.layer_widths = {3, 5};
  spec.advantage.layer_widths = {4, 2};
  spec.value.layer_widths = {5, 1};
  CHECK_THROWS_AS(spec.validate(), ContractViolation);
  spec.advantage.layer_widths = {5, 2};
  spec.value.layer_widths = {5, 2};
  CHECK_THROWS_AS(spec.validate(), ContractViolation);
}

}
