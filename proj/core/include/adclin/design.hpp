#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "adclin/linearizer.hpp"
#include "adclin/signals.hpp"

namespace adclin {

/// How the best of the Q bias-grid candidates is chosen.
enum class SelectionRule {
  TrainingCost,    ///< minimum least-squares cost E on the training set
  ValidationSndr,  ///< maximum SNDR on a held-out validation signal
};

std::string_view to_string(SelectionRule rule) noexcept;
SelectionRule parse_selection_rule(std::string_view name);

struct DesignConfig {
  int n_branches = 16;  ///< N for the proposed linearizer, K for Hammerstein
  NonlinearityKind kind = NonlinearityKind::Abs;
  double lambda = 0.02;
  int q_grid = 11;
  double b_max_lo = 0.5;
  double b_max_hi = 1.0;
  int r_train = 1;
  SelectionRule selection = SelectionRule::TrainingCost;

  void validate() const;
  /// Candidate b_max values; the single midpoint when q_grid == 1.
  std::vector<double> b_max_candidates() const;
};

/// L x (N+2) design matrix. Columns: N nonlinear branch outputs, then v, then ones.
struct RegressorMatrix {
  Eigen::MatrixXd values;

  Eigen::Index rows() const noexcept { return values.rows(); }
  Eigen::Index cols() const noexcept { return values.cols(); }
  double operator()(Eigen::Index n, Eigen::Index c) const { return values(n, c); }
};

struct NormalEquations {
  Eigen::MatrixXd gram;
  Eigen::VectorXd rhs;
};

struct DesignSolution {
  LinearizerParams params;
  std::optional<double> chosen_b_max;  ///< proposed linearizer only
  double training_cost = 0.0;
  double gram_condition_estimate = 0.0;
  double lambda = 0.0;
};

/// entry(n, m) = f(v(n) + b_m), entry(n, N) = v(n), entry(n, N+1) = 1.
RegressorMatrix build_regressor(const SignalBuffer& v, std::span<const double> biases, NonlinearityKind kind);

/// Hammerstein columns v^2 .. v^K (successive multiplication), then v, then ones.
RegressorMatrix build_power_regressor(const SignalBuffer& v, int order);

/// Per-sample x(n) - v(n), the target of the delta-c1 parameterization.
SignalBuffer residual_target(const SignalBuffer& reference, const SignalBuffer& distorted);

/// gram = lambda I + sum_r A_r^T A_r,  rhs = sum_r A_r^T b_r.
NormalEquations accumulate_normal_equations(std::span<const RegressorMatrix> regressors,
                                            std::span<const SignalBuffer> targets, double lambda);

/// Solves gram w = rhs. Cholesky first; pivoted LU if the matrix is not
/// numerically positive definite. Throws SingularSystemError if both fail.
Eigen::VectorXd spd_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs);

/// Ratio of extreme eigenvalue magnitudes of a symmetric matrix.
double condition_estimate(const Eigen::MatrixXd& gram);

/// y(n) = v(n) + (row n of A) . w
SignalBuffer apply_correction(const SignalBuffer& v, const RegressorMatrix& regressor, const Eigen::VectorXd& w);

/// Unpacks [w_1..w_N, delta_c1, c0].
ProposedParams unpack_proposed(const Eigen::VectorXd& w, std::vector<double> biases, NonlinearityKind kind);
/// Unpacks [c_2..c_K, delta_c1, c0].
HammersteinParams unpack_hammerstein(const Eigen::VectorXd& w);

/// Closed-form design of the proposed linearizer over the b_max grid.
/// `validation` is required when cfg.selection == SelectionRule::ValidationSndr.
DesignSolution design_proposed(std::span<const SignalBuffer> train_refs, std::span<const SignalBuffer> train_dist,
                               const DesignConfig& cfg, const SignalPair* validation = nullptr);

/// Same least-squares design with integer powers in place of the biased nonlinearities.
DesignSolution design_hammerstein(std::span<const SignalBuffer> train_refs, std::span<const SignalBuffer> train_dist,
                                  const DesignConfig& cfg);

}  // namespace adclin
