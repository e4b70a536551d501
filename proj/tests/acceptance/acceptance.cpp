// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adclin/design.hpp"
#include "adclin/harness.hpp"
#include "adclin/linearizer.hpp"
#include "adclin/serialization.hpp"
#include "oracle.hpp"

using namespace adclin;

namespace {

// Tolerances.
constexpr double kGainTarget = 25.0;
constexpr double kGainTol = 3.0;
constexpr double kRuntimeLimitS = 60.0;
constexpr double kFloorTarget = 58.0;
constexpr double kFloorTol = 2.0;
constexpr int kCrossoverMults = 4;
constexpr double kPlateauMargin = 3.0;
constexpr double kKindTol = 2.0;
constexpr int kOracleInstances = 100;
constexpr double kOracleRelTol = 1e-8;
constexpr double kZeroCoeffTol = 1e-6;
constexpr double kWeightBound = 0.6;

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s %s  %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void info(const char* id, const std::string& detail) {
  std::printf("INFO %s  %s\n", id, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig load_paper_config() {
  std::ifstream in(ADCLIN_PAPER_CONFIG);
  if (!in) throw std::runtime_error("cannot open " + std::string(ADCLIN_PAPER_CONFIG));
  return config_from_json(nlohmann::json::parse(in));
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_sweep_csv(out, rows);
  return out.str();
}

using RowIndex = std::map<std::pair<std::string, int>, const SweepRow*>;

RowIndex index_rows(const std::vector<SweepRow>& rows) {
  RowIndex idx;
  for (const auto& r : rows) idx[{r.type, r.branches}] = &r;
  return idx;
}

void a1(const ExperimentConfig& paper) {
  ExperimentConfig cfg = paper;
  cfg.threads = 1;
  const auto start = std::chrono::steady_clock::now();
  Experiment exp(cfg);
  const DesignSolution d = exp.design_proposed(16, NonlinearityKind::Abs);
  const double compensated = exp.evaluate(d.params).stats.mean_db;
  const double baseline = exp.evaluate_uncompensated().stats.mean_db;
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double gain = compensated - baseline;
  const bool gain_ok = std::abs(gain - kGainTarget) <= kGainTol;
  report("A1", gain_ok && seconds < kRuntimeLimitS,
         fmt("mean gain %.2f dB (target %.0f +- %.0f; %.2f -> %.2f dB), runtime %.1f s (limit %.0f s)", gain,
             kGainTarget, kGainTol, baseline, compensated, seconds, kRuntimeLimitS));
}

void a2(const RowIndex& rows) {
  const SweepRow* r = rows.at({"proposed_abs", 20});
  report("A2", r->valid && std::abs(r->mean_sndr_db - kFloorTarget) <= kFloorTol,
         fmt("N=20 mean SNDR %.2f dB (target %.0f +- %.0f)", r->mean_sndr_db, kFloorTarget, kFloorTol));
}

void a3(const std::vector<SweepRow>& mult_rows) {
  std::map<int, double> proposed, ham;
  for (const auto& r : mult_rows) {
    if (!r.valid) continue;
    if (r.type == "proposed_abs") proposed[r.mults] = r.mean_sndr_db;
    if (r.type == "hammerstein") ham[r.mults] = r.mean_sndr_db;
  }
  bool ok = true;
  int shared = 0;
  double worst = std::numeric_limits<double>::infinity();
  int worst_mults = 0;
  for (const auto& [m, h] : ham) {
    if (m <= kCrossoverMults || !proposed.count(m)) continue;
    ++shared;
    const double lead = proposed.at(m) - h;
    if (lead < worst) {
      worst = lead;
      worst_mults = m;
    }
    ok = ok && lead > 0.0;
  }
  report("A3", ok && shared > 0,
         fmt("%d shared mult counts > %d; smallest proposed lead %.2f dB at %d mults", shared, kCrossoverMults, worst,
             worst_mults));
}

void a4(const std::vector<SweepRow>& rows) {
  double prop = -std::numeric_limits<double>::infinity(), ham = prop;
  for (const auto& r : rows) {
    if (!r.valid) continue;
    if (r.type == "proposed_abs") prop = std::max(prop, r.mean_sndr_db);
    if (r.type == "hammerstein") ham = std::max(ham, r.mean_sndr_db);
  }
  report("A4", prop - ham >= kPlateauMargin,
         fmt("proposed plateau %.2f dB, Hammerstein plateau %.2f dB, margin %.2f dB (need >= %.0f)", prop, ham,
             prop - ham, kPlateauMargin));
}

void a5() {
  bool ok = true;
  for (int k = 2; k <= 13; ++k) {
    const OpCount c = mult_add_count(HammersteinParams{0.0, 0.0, std::vector<double>(k - 1, 0.0)});
    ok = ok && c.multiplications == 2 * k - 1 && c.additions == k;
  }
  for (int n = 1; n <= 24; ++n) {
    const std::vector<double> biases = n == 1 ? std::vector<double>{0.0} : bias_grid(1.0, n);
    ProposedParams p{0.0, 0.0, std::vector<double>(n, 0.0), biases, NonlinearityKind::Abs};
    const OpCount c = mult_add_count(p);
    ok = ok && c.multiplications == n + 1 && c.additions == 2 * n + 1;
  }
  report("A5", ok, "Hammerstein K=2..13 and proposed N=1..24 operation counts");
}

double worst_kind_gap(const std::vector<SweepRow>& rows, int* at) {
  const RowIndex idx = index_rows(rows);
  double worst = 0.0;
  for (const auto& r : rows) {
    if (r.type != "proposed_abs") continue;
    const auto it = idx.find({"proposed_relu", r.branches});
    if (it == idx.end()) continue;
    const double gap = (r.valid && it->second->valid) ? std::abs(r.mean_sndr_db - it->second->mean_sndr_db)
                                                      : std::numeric_limits<double>::infinity();
    if (!(gap <= worst)) {
      worst = gap;
      *at = r.branches;
    }
  }
  return worst;
}

void a6(const std::vector<SweepRow>& rows, const ExperimentConfig& paper) {
  int at = 0;
  const double gap = worst_kind_gap(rows, &at);
  report("A6", gap < kKindTol, fmt("largest |ABS - RELU| %.2f dB at N=%d (need < %.0f)", gap, at, kKindTol));

  ExperimentConfig v = paper;
  v.design.selection = SelectionRule::ValidationSndr;
  v.hammerstein_max_order = 1;
  int vat = 0;
  const double vgap = worst_kind_gap(run_branch_sweep(v), &vat);
  info("A6", fmt("with validation_sndr selection: largest |ABS - RELU| %.2f dB at N=%d", vgap, vat));
}

void a7() {
  std::mt19937_64 gen(20240607);
  std::uniform_real_distribution<double> amp(-0.9, 0.9);
  const DistortionModel model = default_distortion_model();
  double worst = 0.0;
  int failed = 0;
  for (int t = 0; t < kOracleInstances; ++t) {
    const std::size_t len = 8 + gen() % 57;
    const int n = 1 + static_cast<int>(gen() % 3);
    const bool relu = gen() % 2;
    std::vector<double> xs(len);
    for (auto& x : xs) x = amp(gen);
    const SignalBuffer x(xs);
    const SignalBuffer v = quantize(apply_distortion(model, x), 12);

    DesignConfig cfg;
    cfg.n_branches = n;
    cfg.kind = relu ? NonlinearityKind::Relu : NonlinearityKind::Abs;
    cfg.q_grid = 1 + static_cast<int>(gen() % 3);
    try {
      const DesignSolution sol =
          design_proposed(std::vector<SignalBuffer>{x}, std::vector<SignalBuffer>{v}, cfg);
      const auto& p = std::get<ProposedParams>(sol.params);
      const std::vector<double> vs(v.begin(), v.end());
      const auto sys = oracle::normal_equations({xs}, {vs}, cfg.lambda, static_cast<std::size_t>(n + 2),
                                                [&](double s) { return oracle::proposed_row(s, p.biases, relu); });
      const auto ref = oracle::solve(sys.gram, sys.rhs);
      std::vector<double> got(p.weights);
      got.push_back(p.delta_c1);
      got.push_back(p.c0);
      long double diff = 0, norm = 0;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        diff += (got[i] - ref[i]) * (got[i] - ref[i]);
        norm += ref[i] * ref[i];
      }
      const double rel = static_cast<double>(std::sqrt(diff / norm));
      worst = std::max(worst, rel);
      if (!(rel < kOracleRelTol)) ++failed;
    } catch (const std::exception&) {
      ++failed;
    }
  }

  ExperimentConfig clean = ExperimentConfig::defaults();
  clean.distortion = DistortionModel({0.0, 1.0});
  clean.quant_bits = 0;
  clean.ensemble_size = 1;
  Experiment exp(clean);
  double largest = 0.0;
  auto track = [&](double c) { largest = std::max(largest, std::abs(c)); };
  for (auto kind : {NonlinearityKind::Abs, NonlinearityKind::Relu}) {
    const auto p = std::get<ProposedParams>(exp.design_proposed(16, kind).params);
    track(p.c0);
    track(p.delta_c1);
    for (double w : p.weights) track(w);
  }
  const auto h = std::get<HammersteinParams>(exp.design_hammerstein(13).params);
  track(h.c0);
  track(h.delta_c1);
  for (double w : h.poly_weights) track(w);

  report("A7", failed == 0 && largest < kZeroCoeffTol,
         fmt("%d/%d instances within %.0e (worst %.2e); undistorted max |coef| %.2e (need < %.0e)",
             kOracleInstances - failed, kOracleInstances, kOracleRelTol, worst, largest, kZeroCoeffTol));
}

void a8(const ExperimentConfig& paper) {
  Experiment exp(paper);
  double prop = 0.0, ham = 0.0, relu = 0.0;
  int prop_at = 0, ham_at = 0;
  for (int n = 1; n <= 24; ++n) {
    const DesignSolution abs = exp.design_proposed(n, NonlinearityKind::Abs);
    for (double w : std::get<ProposedParams>(abs.params).weights)
      if (std::abs(w) > prop) {
        prop = std::abs(w);
        prop_at = n;
      }
    const DesignSolution rel = exp.design_proposed(n, NonlinearityKind::Relu);
    for (double w : std::get<ProposedParams>(rel.params).weights) relu = std::max(relu, std::abs(w));
  }
  for (int k = 2; k <= paper.hammerstein_max_order; ++k) {
    const DesignSolution h = exp.design_hammerstein(k);
    for (double w : std::get<HammersteinParams>(h.params).poly_weights)
      if (std::abs(w) > ham) {
        ham = std::abs(w);
        ham_at = k;
      }
  }
  report("A8", prop < kWeightBound && ham < kWeightBound,
         fmt("max |w| proposed %.3f (N=%d), Hammerstein %.3f (K=%d), bound %.1f", prop, prop_at, ham, ham_at,
             kWeightBound));
  info("A8", fmt("RELU max |w| %.3f", relu));
}

void a9(const ExperimentConfig& paper, const std::string& first) {
  ExperimentConfig other = paper;
  other.threads = paper.threads == 1 ? 4 : 1;
  const std::string second = sweep_csv(run_branch_sweep(other));
  report("A9", first == second,
         fmt("branch sweep CSV (%zu bytes) identical across runs with threads %d and %d", first.size(),
             paper.threads, other.threads));
}

}  // namespace

int main() {
  try {
    const ExperimentConfig paper = load_paper_config();
    a1(paper);

    Experiment exp(paper);
    const std::vector<SweepRow> rows = exp.branch_sweep();
    const std::vector<SweepRow> mult_rows = exp.mult_sweep();
    const RowIndex idx = index_rows(rows);
    a2(idx);
    a3(mult_rows);
    a4(rows);
    a5();
    a6(rows, paper);
    a7();
    a8(paper);
    a9(paper, sweep_csv(rows));
  } catch (const std::exception& e) {
    std::printf("FAIL setup  %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
