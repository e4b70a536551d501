#pragma once

#include <cmath>
#include <string_view>
#include <variant>
#include <vector>

#include "adclin/signals.hpp"

namespace adclin {

enum class NonlinearityKind { Abs, Relu };

std::string_view to_string(NonlinearityKind kind) noexcept;
/// Accepts "abs" or "relu"; throws ValidationError otherwise.
NonlinearityKind parse_nonlinearity(std::string_view name);

inline double nonlinearity(NonlinearityKind kind, double v) noexcept {
  return kind == NonlinearityKind::Abs ? std::abs(v) : (v > 0.0 ? v : 0.0);
}

/// Uniform grid b_m = -b_max + 2 (m-1) b_max / (N-1), m = 1..N.
std::vector<double> bias_grid(double b_max, int n_branches);

/// y = v + delta_c1 v + c0 + sum_m w_m f(v + b_m).
struct ProposedParams {
  double c0 = 0.0;
  double delta_c1 = 0.0;
  std::vector<double> weights;
  std::vector<double> biases;
  NonlinearityKind kind = NonlinearityKind::Abs;

  int branches() const noexcept { return static_cast<int>(weights.size()); }
  void validate() const;

  friend bool operator==(const ProposedParams&, const ProposedParams&) = default;
};

/// y = v + delta_c1 v + c0 + sum_{k=2..K} c_k v^k; poly_weights holds c_2..c_K.
struct HammersteinParams {
  double c0 = 0.0;
  double delta_c1 = 0.0;
  std::vector<double> poly_weights;

  int order() const noexcept { return static_cast<int>(poly_weights.size()) + 1; }
  void validate() const;

  friend bool operator==(const HammersteinParams&, const HammersteinParams&) = default;
};

using LinearizerParams = std::variant<ProposedParams, HammersteinParams>;

// Per-sample corrections. Accumulation order is fixed (nonlinear branches in
// ascending order, then delta_c1 v, then c0, then the pass-through v) so that
// outputs are bit-reproducible and equal to apply_correction().
double proposed_sample(const ProposedParams& p, double v) noexcept;
double hammerstein_sample(const HammersteinParams& p, double v) noexcept;

SignalBuffer proposed_forward(const ProposedParams& params, const SignalBuffer& v);
SignalBuffer hammerstein_forward(const HammersteinParams& params, const SignalBuffer& v);
SignalBuffer forward(const LinearizerParams& params, const SignalBuffer& v);

struct OpCount {
  int multiplications = 0;
  int additions = 0;
  friend bool operator==(const OpCount&, const OpCount&) = default;
};

/// N+1 multiplications and 2N+1 two-input additions per sample.
constexpr OpCount proposed_cost(int n_branches) noexcept { return {n_branches + 1, 2 * n_branches + 1}; }
/// 2K-1 multiplications and K two-input additions per sample.
constexpr OpCount hammerstein_cost(int order) noexcept { return {2 * order - 1, order}; }

OpCount mult_add_count(const ProposedParams& params) noexcept;
OpCount mult_add_count(const HammersteinParams& params) noexcept;
OpCount mult_add_count(const LinearizerParams& params) noexcept;

}  // namespace adclin
