#include <catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "adclin/errors.hpp"
#include "adclin/linearizer.hpp"

using namespace adclin;
using Catch::Approx;

namespace {

SignalBuffer random_signal(std::mt19937_64& gen, std::size_t n, double amp = 0.95) {
  std::uniform_real_distribution<double> u(-amp, amp);
  std::vector<double> s(n);
  for (auto& v : s) v = u(gen);
  return SignalBuffer(std::move(s));
}

ProposedParams random_proposed(std::mt19937_64& gen, int n, NonlinearityKind kind) {
  std::uniform_real_distribution<double> w(-0.3, 0.3);
  ProposedParams p;
  p.kind = kind;
  p.c0 = w(gen);
  p.delta_c1 = w(gen);
  p.biases = n == 1 ? std::vector<double>{0.1} : bias_grid(0.8, n);
  for (int m = 0; m < n; ++m) p.weights.push_back(w(gen));
  return p;
}

}  // namespace

TEST_CASE("nonlinearity", "[linearizer]") {
  CHECK(nonlinearity(NonlinearityKind::Abs, -0.3) == 0.3);
  CHECK(nonlinearity(NonlinearityKind::Relu, -0.3) == 0.0);
  CHECK(nonlinearity(NonlinearityKind::Relu, 0.2) == 0.2);
  CHECK(parse_nonlinearity("relu") == NonlinearityKind::Relu);
  CHECK(to_string(NonlinearityKind::Abs) == "abs");
  CHECK_THROWS_AS(parse_nonlinearity("tanh"), ValidationError);
}

TEST_CASE("bias_grid", "[linearizer]") {
  CHECK(bias_grid(1.0, 3) == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(bias_grid(0.5, 2) == std::vector<double>{-0.5, 0.5});
  CHECK(bias_grid(0.75, 5) == std::vector<double>{-0.75, -0.375, 0.0, 0.375, 0.75});
  CHECK_THROWS_AS(bias_grid(1.0, 1), ValidationError);
  CHECK_THROWS_AS(bias_grid(0.0, 4), ValidationError);
}

TEST_CASE("bias_grid is symmetric and strictly increasing", "[linearizer][property]") {
  for (int n = 2; n <= 40; ++n) {
    for (double b_max : {0.5, 0.55, 0.8, 1.0}) {
      const auto b = bias_grid(b_max, n);
      CHECK(b.front() == -b_max);
      CHECK(b.back() == Approx(b_max).epsilon(1e-15));
      for (std::size_t m = 0; m < b.size(); ++m) {
        REQUIRE(b[m] == Approx(-b[b.size() - 1 - m]).margin(1e-15));
        if (m > 0) REQUIRE(b[m] > b[m - 1]);
      }
    }
  }
}

TEST_CASE("proposed_forward", "[linearizer]") {
  const SignalBuffer v({-0.9, -0.4, 0.0, 0.123, 0.77});

  SECTION("all-zero coefficients pass v through bit-exactly") {
    ProposedParams p;
    p.weights = {0.0, 0.0, 0.0};
    p.biases = bias_grid(0.6, 3);
    CHECK(proposed_forward(p, v) == v);
  }

  SECTION("v + |v| vanishes for negative v") {
    ProposedParams p;
    p.weights = {1.0};
    p.biases = {0.0};
    CHECK(proposed_forward(p, SignalBuffer({-0.4}))[0] == 0.0);
  }

  SECTION("invalid params") {
    ProposedParams p;
    p.weights = {1.0, 2.0};
    p.biases = {0.5, -0.5};
    CHECK_THROWS_AS(proposed_forward(p, v), ValidationError);
    p.biases = {0.0};
    CHECK_THROWS_AS(proposed_forward(p, v), ValidationError);
  }
}

TEST_CASE("hammerstein_forward", "[linearizer]") {
  SECTION("all-zero coefficients pass v through bit-exactly") {
    const SignalBuffer v({-0.9, 0.0, 0.31});
    HammersteinParams h;
    h.poly_weights = {0.0, 0.0, 0.0};
    CHECK(hammerstein_forward(h, v) == v);
  }
  SECTION("v + v^2") {
    HammersteinParams h;
    h.poly_weights = {1.0};
    CHECK(hammerstein_forward(h, SignalBuffer({0.5}))[0] == 0.75);
  }
  SECTION("matches direct polynomial evaluation") {
    HammersteinParams h;
    h.c0 = 0.01;
    h.delta_c1 = -0.02;
    h.poly_weights = {0.1, -0.2, 0.05};
    const double v = 0.37;
    const double expected = 0.01 + 0.98 * v + 0.1 * v * v - 0.2 * v * v * v + 0.05 * v * v * v * v;
    CHECK(hammerstein_forward(h, SignalBuffer({v}))[0] == Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("ABS and RELU linearizers are related by |u| = 2 max(0,u) - u", "[linearizer][property]") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 24);
    const ProposedParams abs = random_proposed(gen, n, NonlinearityKind::Abs);
    ProposedParams relu = abs;
    relu.kind = NonlinearityKind::Relu;
    double sum_w = 0.0, sum_wb = 0.0;
    for (int m = 0; m < n; ++m) {
      relu.weights[static_cast<std::size_t>(m)] = 2.0 * abs.weights[static_cast<std::size_t>(m)];
      sum_w += abs.weights[static_cast<std::size_t>(m)];
      sum_wb += abs.weights[static_cast<std::size_t>(m)] * abs.biases[static_cast<std::size_t>(m)];
    }
    relu.delta_c1 = abs.delta_c1 - sum_w;
    relu.c0 = abs.c0 - sum_wb;

    const SignalBuffer v = random_signal(gen, 257);
    const SignalBuffer ya = proposed_forward(abs, v);
    const SignalBuffer yr = proposed_forward(relu, v);
    for (std::size_t i = 0; i < v.size(); ++i) REQUIRE(ya[i] == Approx(yr[i]).margin(1e-12));
  }
}

TEST_CASE("forward paths are memoryless", "[linearizer][property]") {
  std::mt19937_64 gen(11);
  const ProposedParams p = random_proposed(gen, 7, NonlinearityKind::Relu);
  HammersteinParams h;
  h.poly_weights = {0.1, -0.05, 0.02, 0.01};
  const SignalBuffer v = random_signal(gen, 128);
  std::vector<std::size_t> perm(v.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), gen);
  std::vector<double> shuffled(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) shuffled[i] = v[perm[i]];
  const SignalBuffer vs(std::move(shuffled));

  const SignalBuffer yp = proposed_forward(p, v), yps = proposed_forward(p, vs);
  const SignalBuffer yh = hammerstein_forward(h, v), yhs = hammerstein_forward(h, vs);
  for (std::size_t i = 0; i < v.size(); ++i) {
    REQUIRE(yps[i] == yp[perm[i]]);
    REQUIRE(yhs[i] == yh[perm[i]]);
  }
}

TEST_CASE("mult_add_count", "[linearizer]") {
  HammersteinParams h;
  h.poly_weights = {0.0, 0.0};  // K = 3
  CHECK(mult_add_count(h) == OpCount{5, 3});

  ProposedParams p;
  p.weights.assign(4, 0.0);
  p.biases = bias_grid(1.0, 4);
  CHECK(mult_add_count(p) == OpCount{5, 9});

  p.weights = {0.0};
  p.biases = {0.0};
  CHECK(mult_add_count(LinearizerParams{p}) == OpCount{2, 3});

  for (int k = 2; k <= 13; ++k) CHECK(hammerstein_cost(k) == OpCount{2 * k - 1, k});
  for (int n = 1; n <= 24; ++n) CHECK(proposed_cost(n) == OpCount{n + 1, 2 * n + 1});
}
