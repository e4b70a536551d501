#include "adclin/design.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "adclin/errors.hpp"
#include "adclin/metrics.hpp"

namespace adclin {

std::string_view to_string(SelectionRule rule) noexcept {
  return rule == SelectionRule::TrainingCost ? "training_cost" : "validation_sndr";
}

SelectionRule parse_selection_rule(std::string_view name) {
  if (name == "training_cost") return SelectionRule::TrainingCost;
  if (name == "validation_sndr") return SelectionRule::ValidationSndr;
  throw ValidationError("unknown selection rule '" + std::string(name) +
                        "' (expected training_cost or validation_sndr)");
}

void DesignConfig::validate() const {
  if (n_branches < 1) throw ValidationError("DesignConfig: n_branches must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("DesignConfig: lambda must be >= 0");
  if (q_grid < 1) throw ValidationError("DesignConfig: q_grid must be >= 1");
  if (!(b_max_lo > 0.0)) throw ValidationError("DesignConfig: b_max_range lower bound must be > 0");
  if (!(b_max_hi >= b_max_lo) || !std::isfinite(b_max_hi))
    throw ValidationError("DesignConfig: b_max_range must be a closed interval lo <= hi");
  if (r_train < 1) throw ValidationError("DesignConfig: r_train must be >= 1");
}

std::vector<double> DesignConfig::b_max_candidates() const {
  if (q_grid == 1) return {0.5 * (b_max_lo + b_max_hi)};
  std::vector<double> out(static_cast<std::size_t>(q_grid));
  for (int q = 0; q < q_grid; ++q)
    out[static_cast<std::size_t>(q)] = b_max_lo + (b_max_hi - b_max_lo) * q / (q_grid - 1);
  return out;
}

RegressorMatrix build_regressor(const SignalBuffer& v, std::span<const double> biases, NonlinearityKind kind) {
  if (biases.empty()) throw ValidationError("build_regressor: biases must be nonempty");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto n = static_cast<Eigen::Index>(biases.size());
  RegressorMatrix a{Eigen::MatrixXd(rows, n + 2)};
  for (Eigen::Index m = 0; m < n; ++m) {
    const double b = biases[static_cast<std::size_t>(m)];
    for (Eigen::Index i = 0; i < rows; ++i) a.values(i, m) = nonlinearity(kind, v[static_cast<std::size_t>(i)] + b);
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    a.values(i, n) = v[static_cast<std::size_t>(i)];
    a.values(i, n + 1) = 1.0;
  }
  return a;
}

RegressorMatrix build_power_regressor(const SignalBuffer& v, int order) {
  if (order < 2) throw ValidationError("build_power_regressor: order must be >= 2");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const Eigen::Index n = order - 1;
  RegressorMatrix a{Eigen::MatrixXd(rows, n + 2)};
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double s = v[static_cast<std::size_t>(i)];
    double power = s;
    for (Eigen::Index k = 0; k < n; ++k) {
      power *= s;
      a.values(i, k) = power;
    }
    a.values(i, n) = s;
    a.values(i, n + 1) = 1.0;
  }
  return a;
}

SignalBuffer residual_target(const SignalBuffer& reference, const SignalBuffer& distorted) {
  if (reference.size() != distorted.size())
    throw ValidationError("residual_target: reference and distorted lengths differ");
  std::vector<double> b(reference.size());
  for (std::size_t n = 0; n < b.size(); ++n) b[n] = reference[n] - distorted[n];
  return SignalBuffer(std::move(b));
}

NormalEquations accumulate_normal_equations(std::span<const RegressorMatrix> regressors,
                                            std::span<const SignalBuffer> targets, double lambda) {
  if (regressors.empty()) throw ValidationError("accumulate_normal_equations: no regressors");
  if (regressors.size() != targets.size())
    throw ValidationError("accumulate_normal_equations: regressor and target counts differ");
  const Eigen::Index cols = regressors.front().cols();
  NormalEquations ne{lambda * Eigen::MatrixXd::Identity(cols, cols), Eigen::VectorXd::Zero(cols)};
  for (std::size_t r = 0; r < regressors.size(); ++r) {
    const auto& a = regressors[r].values;
    if (a.cols() != cols) throw ValidationError("accumulate_normal_equations: column counts differ");
    if (static_cast<std::size_t>(a.rows()) != targets[r].size())
      throw ValidationError("accumulate_normal_equations: regressor rows differ from target length");
    const Eigen::Map<const Eigen::VectorXd> b(targets[r].samples().data(), a.rows());
    ne.gram.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
    ne.rhs.noalias() += a.transpose() * b;
  }
  ne.gram = ne.gram.selfadjointView<Eigen::Lower>();
  return ne;
}

Eigen::VectorXd spd_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs) {
  if (gram.rows() != gram.cols() || gram.rows() != rhs.size())
    throw ValidationError("spd_solve: dimension mismatch");
  if (!gram.allFinite() || !rhs.allFinite()) throw ValidationError("spd_solve: non-finite entries");

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd w = llt.solve(rhs);
    if (w.allFinite()) return w;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible()) throw SingularSystemError("spd_solve: system is singular");
  Eigen::VectorXd w = lu.solve(rhs);
  if (!w.allFinite()) throw SingularSystemError("spd_solve: solution is not finite");
  return w;
}

double condition_estimate(const Eigen::MatrixXd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = eig.eigenvalues().cwiseAbs();
  const double lo = ev.minCoeff();
  return lo > 0.0 ? ev.maxCoeff() / lo : std::numeric_limits<double>::infinity();
}

SignalBuffer apply_correction(const SignalBuffer& v, const RegressorMatrix& regressor, const Eigen::VectorXd& w) {
  if (static_cast<std::size_t>(regressor.rows()) != v.size() || regressor.cols() != w.size())
    throw ValidationError("apply_correction: dimension mismatch");
  std::vector<double> y(v.size());
  for (Eigen::Index i = 0; i < regressor.rows(); ++i) {
    double acc = 0.0;
    for (Eigen::Index c = 0; c < regressor.cols(); ++c) acc += regressor.values(i, c) * w[c];
    y[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] + acc;
  }
  return SignalBuffer(std::move(y));
}

ProposedParams unpack_proposed(const Eigen::VectorXd& w, std::vector<double> biases, NonlinearityKind kind) {
  const auto n = static_cast<Eigen::Index>(biases.size());
  if (w.size() != n + 2) throw ValidationError("unpack_proposed: solution length must be N+2");
  ProposedParams p;
  p.weights.assign(w.data(), w.data() + n);
  p.delta_c1 = w[n];
  p.c0 = w[n + 1];
  p.biases = std::move(biases);
  p.kind = kind;
  return p;
}

HammersteinParams unpack_hammerstein(const Eigen::VectorXd& w) {
  if (w.size() < 2) throw ValidationError("unpack_hammerstein: solution too short");
  const Eigen::Index n = w.size() - 2;
  HammersteinParams p;
  p.poly_weights.assign(w.data(), w.data() + n);
  p.delta_c1 = w[n];
  p.c0 = w[n + 1];
  return p;
}

namespace {

void check_training_lists(std::span<const SignalBuffer> refs, std::span<const SignalBuffer> dist) {
  if (refs.empty()) throw ValidationError("design: training set is empty");
  if (refs.size() != dist.size()) throw ValidationError("design: reference and distorted lists differ in length");
}

struct Candidate {
  Eigen::VectorXd w;
  double cost = 0.0;
  double condition = 0.0;
};

// Solves one least-squares problem over all training signals.
template <typename BuildRegressor>
Candidate solve_candidate(std::span<const SignalBuffer> refs, std::span<const SignalBuffer> dist, double lambda,
                          BuildRegressor&& build) {
  std::vector<RegressorMatrix> regs;
  std::vector<SignalBuffer> targets;
  regs.reserve(refs.size());
  targets.reserve(refs.size());
  for (std::size_t r = 0; r < refs.size(); ++r) {
    regs.push_back(build(dist[r]));
    targets.push_back(residual_target(refs[r], dist[r]));
  }
  const NormalEquations ne = accumulate_normal_equations(regs, targets, lambda);
  Candidate c;
  c.w = spd_solve(ne.gram, ne.rhs);
  c.condition = condition_estimate(ne.gram);
  for (std::size_t r = 0; r < refs.size(); ++r) {
    const SignalBuffer y = apply_correction(dist[r], regs[r], c.w);
    for (std::size_t n = 0; n < y.size(); ++n) {
      const double e = y[n] - refs[r][n];
      c.cost += e * e;
    }
  }
  return c;
}

}  // namespace

DesignSolution design_proposed(std::span<const SignalBuffer> train_refs, std::span<const SignalBuffer> train_dist,
                               const DesignConfig& cfg, const SignalPair* validation) {
  cfg.validate();
  check_training_lists(train_refs, train_dist);
  if (cfg.selection == SelectionRule::ValidationSndr && validation == nullptr)
    throw ValidationError("design_proposed: validation_sndr selection needs a validation signal");

  // A single branch has no grid; it sits at the midpoint of [-b_max, b_max].
  const std::vector<double> grid = cfg.n_branches == 1 ? std::vector<double>{0.0} : cfg.b_max_candidates();

  std::optional<DesignSolution> best;
  double best_score = -std::numeric_limits<double>::infinity();
  std::string last_error;
  for (double b_max : grid) {
    std::vector<double> biases = cfg.n_branches == 1 ? std::vector<double>{0.0} : bias_grid(b_max, cfg.n_branches);
    Candidate c;
    try {
      c = solve_candidate(train_refs, train_dist, cfg.lambda,
                          [&](const SignalBuffer& v) { return build_regressor(v, biases, cfg.kind); });
    } catch (const SingularSystemError& e) {
      last_error = e.what();
      continue;
    }
    ProposedParams params = unpack_proposed(c.w, std::move(biases), cfg.kind);

    double score = -c.cost;
    if (cfg.selection == SelectionRule::ValidationSndr) {
      const SignalBuffer y = proposed_forward(params, validation->distorted);
      score = sndr(validation->reference, y).sndr_db;
    }
    // Strict improvement keeps ties on the smaller b_max.
    if (!best || score > best_score) {
      best_score = score;
      best = DesignSolution{std::move(params), cfg.n_branches == 1 ? 0.0 : b_max, c.cost, c.condition, cfg.lambda};
    }
  }
  if (!best) throw DesignFailure("design_proposed: every candidate failed (" + last_error + ")");
  return *std::move(best);
}

DesignSolution design_hammerstein(std::span<const SignalBuffer> train_refs, std::span<const SignalBuffer> train_dist,
                                  const DesignConfig& cfg) {
  cfg.validate();
  check_training_lists(train_refs, train_dist);
  if (cfg.n_branches < 2) throw ValidationError("design_hammerstein: order K must be >= 2");
  Candidate c;
  try {
    c = solve_candidate(train_refs, train_dist, cfg.lambda,
                        [&](const SignalBuffer& v) { return build_power_regressor(v, cfg.n_branches); });
  } catch (const SingularSystemError& e) {
    throw DesignFailure(std::string("design_hammerstein: ") + e.what());
  }
  return DesignSolution{unpack_hammerstein(c.w), std::nullopt, c.cost, c.condition, cfg.lambda};
}

}  // namespace adclin
