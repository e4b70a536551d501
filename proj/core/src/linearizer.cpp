#include "adclin/linearizer.hpp"

#include <string>

#include "adclin/errors.hpp"

namespace adclin {

std::string_view to_string(NonlinearityKind kind) noexcept {
  return kind == NonlinearityKind::Abs ? "abs" : "relu";
}

NonlinearityKind parse_nonlinearity(std::string_view name) {
  if (name == "abs") return NonlinearityKind::Abs;
  if (name == "relu") return NonlinearityKind::Relu;
  throw ValidationError("unknown nonlinearity '" + std::string(name) + "' (expected abs or relu)");
}

std::vector<double> bias_grid(double b_max, int n_branches) {
  if (n_branches < 2) throw ValidationError("bias_grid: n_branches must be >= 2");
  if (!(b_max > 0.0) || !std::isfinite(b_max)) throw ValidationError("bias_grid: b_max must be > 0");
  std::vector<double> b(static_cast<std::size_t>(n_branches));
  const double denom = n_branches - 1;
  for (int m = 0; m < n_branches; ++m) b[static_cast<std::size_t>(m)] = -b_max + 2.0 * m * b_max / denom;
  return b;
}

void ProposedParams::validate() const {
  if (weights.empty()) throw ValidationError("ProposedParams: need at least one branch");
  if (weights.size() != biases.size())
    throw ValidationError("ProposedParams: weights and biases must have equal length");
  for (std::size_t m = 1; m < biases.size(); ++m)
    if (!(biases[m] > biases[m - 1])) throw ValidationError("ProposedParams: biases must be strictly increasing");
}

void HammersteinParams::validate() const {
  if (!std::isfinite(c0) || !std::isfinite(delta_c1))
    throw ValidationError("HammersteinParams: coefficients must be finite");
}

double proposed_sample(const ProposedParams& p, double v) noexcept {
  double acc = 0.0;
  const std::size_t n = p.weights.size();
  if (p.kind == NonlinearityKind::Abs) {
    for (std::size_t m = 0; m < n; ++m) acc += p.weights[m] * std::abs(v + p.biases[m]);
  } else {
    for (std::size_t m = 0; m < n; ++m) {
      const double u = v + p.biases[m];
      acc += p.weights[m] * (u > 0.0 ? u : 0.0);
    }
  }
  acc += p.delta_c1 * v;
  acc += p.c0;
  return v + acc;
}

double hammerstein_sample(const HammersteinParams& p, double v) noexcept {
  double acc = 0.0;
  double power = v;
  for (double c : p.poly_weights) {
    power *= v;
    acc += c * power;
  }
  acc += p.delta_c1 * v;
  acc += p.c0;
  return v + acc;
}

SignalBuffer proposed_forward(const ProposedParams& params, const SignalBuffer& v) {
  params.validate();
  std::vector<double> y(v.size());
  for (std::size_t n = 0; n < v.size(); ++n) y[n] = proposed_sample(params, v[n]);
  return SignalBuffer(std::move(y));
}

SignalBuffer hammerstein_forward(const HammersteinParams& params, const SignalBuffer& v) {
  params.validate();
  std::vector<double> y(v.size());
  for (std::size_t n = 0; n < v.size(); ++n) y[n] = hammerstein_sample(params, v[n]);
  return SignalBuffer(std::move(y));
}

SignalBuffer forward(const LinearizerParams& params, const SignalBuffer& v) {
  return std::visit(
      [&](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, ProposedParams>)
          return proposed_forward(p, v);
        else
          return hammerstein_forward(p, v);
      },
      params);
}

OpCount mult_add_count(const ProposedParams& params) noexcept { return proposed_cost(params.branches()); }

OpCount mult_add_count(const HammersteinParams& params) noexcept { return hammerstein_cost(params.order()); }

OpCount mult_add_count(const LinearizerParams& params) noexcept {
  return std::visit([](const auto& p) { return mult_add_count(p); }, params);
}

}  // namespace adclin
