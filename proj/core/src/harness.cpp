#include "adclin/harness.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "adclin/errors.hpp"
#include "adclin/rng.hpp"

namespace adclin {

std::uint64_t stream_seed(std::uint64_t master, SeedStream stream, std::uint64_t index) noexcept {
  return derive_seed(master, static_cast<std::uint64_t>(stream), index);
}

void ExperimentConfig::validate() const {
  if (ensemble_size < 1) throw ValidationError("ExperimentConfig: ensemble_size must be >= 1");
  if (!std::has_single_bit(signal_length)) throw ValidationError("ExperimentConfig: signal_length must be a power of two");
  if (quant_bits != 0 && (quant_bits < 2 || quant_bits > 24))
    throw ValidationError("ExperimentConfig: quant_bits must be 0 (disabled) or in [2, 24]");
  design.validate();
  for (int n : branch_sweep)
    if (n < 1) throw ValidationError("ExperimentConfig: branch_sweep entries must be >= 1");
  if (hammerstein_max_order < 1) throw ValidationError("ExperimentConfig: hammerstein_max_order must be >= 1");
  if (kinds.empty()) throw ValidationError("ExperimentConfig: kinds must be nonempty");
  if (threads < 0) throw ValidationError("ExperimentConfig: threads must be >= 0");
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig cfg;
  for (int n = 1; n <= 24; ++n) cfg.branch_sweep.push_back(n);
  return cfg;
}

SignalBuffer distort_and_quantize(const ExperimentConfig& cfg, const SignalBuffer& x) {
  SignalBuffer v = apply_distortion(cfg.distortion, x);
  return cfg.quant_bits == 0 ? v : quantize(v, cfg.quant_bits);
}

namespace {

SignalPair make_pair(const ExperimentConfig& cfg, std::vector<double> phases, double offset) {
  SignalBuffer x = gen_multitone(MultiToneSpec::ofdm_quadrature(std::move(phases), offset), cfg.signal_length);
  SignalBuffer v = distort_and_quantize(cfg, x);
  return {std::move(x), std::move(v)};
}

constexpr std::size_t kCarriers = 31;

}  // namespace

TrainingSet make_training_set(const ExperimentConfig& cfg) {
  cfg.validate();
  TrainingSet set;
  for (int r = 0; r < cfg.design.r_train; ++r) {
    const auto idx = static_cast<std::uint64_t>(r);
    std::vector<double> phases = r == 0 ? std::vector<double>(kCarriers, 0.0)
                                        : qpsk_phases(stream_seed(cfg.seed, SeedStream::TrainPhases, idx), kCarriers);
    const double offset = sample_freq_offset(stream_seed(cfg.seed, SeedStream::TrainOffset, idx));
    SignalPair p = make_pair(cfg, std::move(phases), offset);
    set.refs.push_back(std::move(p.reference));
    set.distorted.push_back(std::move(p.distorted));
  }
  return set;
}

SignalPair make_eval_signal(const ExperimentConfig& cfg, std::size_t index) {
  return make_pair(cfg, qpsk_phases(stream_seed(cfg.seed, SeedStream::EvalPhases, index), kCarriers),
                   sample_freq_offset(stream_seed(cfg.seed, SeedStream::EvalOffset, index)));
}

std::vector<SignalPair> make_eval_ensemble(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto count = static_cast<std::size_t>(cfg.ensemble_size);
  std::vector<std::optional<SignalPair>> slots(count);
  parallel_for(count, cfg.threads, [&](std::size_t i) { slots[i] = make_eval_signal(cfg, i); });
  std::vector<SignalPair> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(*std::move(s));
  return out;
}

SignalPair make_validation_signal(const ExperimentConfig& cfg) {
  return make_pair(cfg, qpsk_phases(stream_seed(cfg.seed, SeedStream::ValidationPhases, 0), kCarriers),
                   sample_freq_offset(stream_seed(cfg.seed, SeedStream::ValidationOffset, 0)));
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : static_cast<std::size_t>(threads);
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

struct Experiment::Lazy {
  std::once_flag ensemble_once;
  std::vector<SignalPair> ensemble;
  std::once_flag validation_once;
  std::optional<SignalPair> validation;
};

Experiment::Experiment(ExperimentConfig cfg) : cfg_(std::move(cfg)), lazy_(std::make_unique<Lazy>()) {
  cfg_.validate();
  training_ = make_training_set(cfg_);
}

Experiment::~Experiment() = default;

const std::vector<SignalPair>& Experiment::ensemble() const {
  std::call_once(lazy_->ensemble_once, [this] { lazy_->ensemble = make_eval_ensemble(cfg_); });
  return lazy_->ensemble;
}

DesignSolution Experiment::design_proposed(int n_branches, NonlinearityKind kind) const {
  DesignConfig dc = cfg_.design;
  dc.n_branches = n_branches;
  dc.kind = kind;
  const SignalPair* validation = nullptr;
  if (dc.selection == SelectionRule::ValidationSndr) {
    std::call_once(lazy_->validation_once, [this] { lazy_->validation = make_validation_signal(cfg_); });
    validation = &*lazy_->validation;
  }
  return adclin::design_proposed(training_.refs, training_.distorted, dc, validation);
}

DesignSolution Experiment::design_hammerstein(int order) const {
  DesignConfig dc = cfg_.design;
  dc.n_branches = order;
  return adclin::design_hammerstein(training_.refs, training_.distorted, dc);
}

DesignSolution Experiment::design_default() const {
  return design_proposed(cfg_.design.n_branches, cfg_.design.kind);
}

EvalSummary Experiment::evaluate(const LinearizerParams& params) const {
  const auto& ens = ensemble();
  EvalSummary out;
  out.per_signal.resize(ens.size());
  parallel_for(ens.size(), cfg_.threads, [&](std::size_t i) {
    out.per_signal[i] = sndr(ens[i].reference, forward(params, ens[i].distorted));
  });
  out.stats = summarize(out.per_signal);
  return out;
}

EvalSummary Experiment::evaluate_uncompensated() const {
  const auto& ens = ensemble();
  EvalSummary out;
  out.per_signal.resize(ens.size());
  parallel_for(ens.size(), cfg_.threads,
               [&](std::size_t i) { out.per_signal[i] = sndr(ens[i].reference, ens[i].distorted); });
  out.stats = summarize(out.per_signal);
  return out;
}

namespace {

void fill_stats(SweepRow& row, const EvalSummary& s) {
  row.mean_sndr_db = s.stats.mean_db;
  row.std_sndr_db = s.stats.std_db;
  row.min_sndr_db = s.stats.min_db;
  row.pooled_sndr_db = s.stats.pooled_db;
}

void mark_invalid(SweepRow& row, const std::exception& e) {
  row.valid = false;
  row.error = e.what();
  row.mean_sndr_db = row.std_sndr_db = row.min_sndr_db = row.pooled_sndr_db = std::nan("");
}

}  // namespace

SweepRow Experiment::proposed_row(int n, NonlinearityKind kind) const {
  SweepRow row;
  row.type = "proposed_" + std::string(to_string(kind));
  row.branches = n;
  const OpCount cost = proposed_cost(n);
  row.mults = cost.multiplications;
  row.adds = cost.additions;
  try {
    const DesignSolution d = design_proposed(n, kind);
    row.chosen_b_max = d.chosen_b_max;
    fill_stats(row, evaluate(d.params));
  } catch (const Error& e) {
    mark_invalid(row, e);
  }
  return row;
}

SweepRow Experiment::hammerstein_row(int order) const {
  SweepRow row;
  row.type = "hammerstein";
  row.branches = order - 1;
  const OpCount cost = hammerstein_cost(order);
  row.mults = cost.multiplications;
  row.adds = cost.additions;
  try {
    fill_stats(row, evaluate(design_hammerstein(order).params));
  } catch (const Error& e) {
    mark_invalid(row, e);
  }
  return row;
}

std::vector<SweepRow> Experiment::branch_sweep() const {
  if (cfg_.branch_sweep.empty()) throw ValidationError("branch_sweep: branch_sweep must be nonempty");
  std::vector<SweepRow> rows;
  for (int n : cfg_.branch_sweep) {
    for (NonlinearityKind kind : cfg_.kinds) rows.push_back(proposed_row(n, kind));
    if (n + 1 <= cfg_.hammerstein_max_order) rows.push_back(hammerstein_row(n + 1));
  }
  return rows;
}

std::vector<SweepRow> Experiment::mult_sweep() const {
  std::vector<SweepRow> rows = branch_sweep();
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.mults < b.mults; });
  return rows;
}

SpectrumCase Experiment::spectrum_case(int n_branches) const {
  DesignSolution d = design_proposed(n_branches, cfg_.design.kind);
  const SignalPair first = make_eval_signal(cfg_, 0);
  const SignalBuffer y = forward(d.params, first.distorted);
  return {spectrum(first.distorted), spectrum(y), std::move(d)};
}

std::vector<SweepRow> run_branch_sweep(const ExperimentConfig& cfg) { return Experiment(cfg).branch_sweep(); }

std::vector<SweepRow> run_mult_sweep(const ExperimentConfig& cfg) { return Experiment(cfg).mult_sweep(); }

SpectrumCase run_spectrum_case(const ExperimentConfig& cfg, int n_branches) {
  return Experiment(cfg).spectrum_case(n_branches);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "type,branches,mults,adds,mean_sndr_db,std_sndr_db,min_sndr_db\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%.12g,%.12g,%.12g\n", r.type.c_str(), r.branches, r.mults, r.adds,
                  r.mean_sndr_db, r.std_sndr_db, r.min_sndr_db);
    out << buf;
  }
}

}  // namespace adclin
