#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adclin/design.hpp"
#include "adclin/linearizer.hpp"
#include "adclin/metrics.hpp"
#include "adclin/signals.hpp"

namespace adclin {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

/// Seed substreams; per-signal seeds are derive_seed(master, stream, index).
enum class SeedStream : std::uint64_t {
  TrainOffset = 1,
  TrainPhases = 2,
  EvalOffset = 3,
  EvalPhases = 4,
  ValidationOffset = 5,
  ValidationPhases = 6,
};

std::uint64_t stream_seed(std::uint64_t master, SeedStream stream, std::uint64_t index) noexcept;

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int ensemble_size = 500;
  std::size_t signal_length = 8192;
  int quant_bits = 12;  ///< 0 disables quantization
  DesignConfig design;
  DistortionModel distortion = default_distortion_model();
  std::vector<int> branch_sweep;  ///< proposed N values; Hammerstein uses K = N + 1
  int hammerstein_max_order = 13;
  std::vector<NonlinearityKind> kinds{NonlinearityKind::Abs, NonlinearityKind::Relu};
  int threads = 1;  ///< 0 = hardware concurrency; outputs do not depend on it

  void validate() const;

  /// Signal chain, design and sweep constants of the reference experiment.
  static ExperimentConfig defaults();
};

struct TrainingSet {
  std::vector<SignalBuffer> refs;
  std::vector<SignalBuffer> distorted;
};

/// x -> distortion -> quantization (when enabled).
SignalBuffer distort_and_quantize(const ExperimentConfig& cfg, const SignalBuffer& x);

/// R signals; the first has all phases zero, the rest QPSK phases. Offsets are seeded.
TrainingSet make_training_set(const ExperimentConfig& cfg);
/// Ensemble element `index`: seeded QPSK phases and frequency offset.
SignalPair make_eval_signal(const ExperimentConfig& cfg, std::size_t index);
std::vector<SignalPair> make_eval_ensemble(const ExperimentConfig& cfg);
/// Held-out QPSK signal used by SelectionRule::ValidationSndr.
SignalPair make_validation_signal(const ExperimentConfig& cfg);

/// Calls fn(i) for i in [0, count) on up to `threads` workers over contiguous chunks.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

struct EvalSummary {
  EnsembleSndr stats;
  std::vector<SndrReport> per_signal;
};

struct SweepRow {
  std::string type;  ///< "proposed_abs", "proposed_relu" or "hammerstein"
  int branches = 0;  ///< nonlinear branches (N, or K-1)
  int mults = 0;
  int adds = 0;
  double mean_sndr_db = 0.0;
  double std_sndr_db = 0.0;
  double min_sndr_db = 0.0;
  double pooled_sndr_db = 0.0;
  std::optional<double> chosen_b_max;
  bool valid = true;
  std::string error;
};

struct SpectrumCase {
  SpectrumTable before;
  SpectrumTable after;
  DesignSolution design;
};

/// Shared state of one experiment: the training set and a lazily built ensemble.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg);
  ~Experiment();
  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;

  const ExperimentConfig& config() const noexcept { return cfg_; }
  const TrainingSet& training() const noexcept { return training_; }
  const std::vector<SignalPair>& ensemble() const;

  DesignSolution design_proposed(int n_branches, NonlinearityKind kind) const;
  DesignSolution design_hammerstein(int order) const;
  /// Design with cfg.design as given (proposed linearizer).
  DesignSolution design_default() const;

  EvalSummary evaluate(const LinearizerParams& params) const;
  EvalSummary evaluate_uncompensated() const;

  std::vector<SweepRow> branch_sweep() const;
  std::vector<SweepRow> mult_sweep() const;
  SpectrumCase spectrum_case(int n_branches) const;

 private:
  SweepRow proposed_row(int n, NonlinearityKind kind) const;
  SweepRow hammerstein_row(int order) const;

  struct Lazy;
  ExperimentConfig cfg_;
  TrainingSet training_;
  std::unique_ptr<Lazy> lazy_;
};

std::vector<SweepRow> run_branch_sweep(const ExperimentConfig& cfg);
std::vector<SweepRow> run_mult_sweep(const ExperimentConfig& cfg);
SpectrumCase run_spectrum_case(const ExperimentConfig& cfg, int n_branches);

/// Header `type,branches,mults,adds,mean_sndr_db,std_sndr_db,min_sndr_db`; 12 significant digits.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace adclin
