#include "adclin/metrics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>

#include "adclin/errors.hpp"

namespace adclin {

SndrReport sndr(const SignalBuffer& reference, const SignalBuffer& y) {
  if (reference.size() != y.size()) throw ValidationError("sndr: reference and output lengths differ");
  double signal = 0.0;
  double error = 0.0;
  for (std::size_t n = 0; n < y.size(); ++n) {
    const double e = y[n] - reference[n];
    signal += reference[n] * reference[n];
    error += e * e;
  }
  if (signal == 0.0) throw MetricError("sndr: reference has zero power");
  const double len = static_cast<double>(y.size());
  SndrReport r;
  r.signal_power_db = 10.0 * std::log10(signal / len);
  if (error == 0.0) {
    r.error_power_db = -std::numeric_limits<double>::infinity();
    r.sndr_db = std::numeric_limits<double>::infinity();
  } else {
    r.error_power_db = 10.0 * std::log10(error / len);
    r.sndr_db = r.signal_power_db - r.error_power_db;
  }
  return r;
}

EnsembleSndr summarize(std::span<const SndrReport> reports) {
  if (reports.empty()) throw ValidationError("summarize: no reports");
  EnsembleSndr s;
  s.min_db = std::numeric_limits<double>::infinity();
  double signal = 0.0;
  double error = 0.0;
  for (const auto& r : reports) {
    s.mean_db += r.sndr_db;
    s.min_db = std::min(s.min_db, r.sndr_db);
    signal += std::pow(10.0, r.signal_power_db / 10.0);
    error += std::pow(10.0, r.error_power_db / 10.0);
  }
  const double count = static_cast<double>(reports.size());
  s.mean_db /= count;
  if (reports.size() > 1) {
    double ss = 0.0;
    for (const auto& r : reports) ss += (r.sndr_db - s.mean_db) * (r.sndr_db - s.mean_db);
    s.std_db = std::sqrt(ss / (count - 1.0));
  }
  s.pooled_db = error > 0.0 ? 10.0 * std::log10(signal / error) : std::numeric_limits<double>::infinity();
  s.mean_signal_power_db = 10.0 * std::log10(signal / count);
  return s;
}

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SpectrumTable spectrum(const SignalBuffer& x) {
  const std::size_t len = x.size();
  if (!std::has_single_bit(len)) throw ValidationError("spectrum: length must be a power of two");

  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(len / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(len), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  SpectrumTable t;
  t.bins.reserve(out.size());
  const double norm = 2.0 / static_cast<double>(len);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double mag = norm * std::abs(out[k]);
    const double db = mag > 0.0 ? std::max(20.0 * std::log10(mag), kSpectrumFloorDb) : kSpectrumFloorDb;
    t.bins.push_back({2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len), db});
  }
  return t;
}

double spectrum_energy(const SpectrumTable& table, std::size_t length) {
  if (length == 0 || table.bins.size() != length / 2 + 1)
    throw ValidationError("spectrum_energy: table does not match the signal length");
  const double len = static_cast<double>(length);
  double energy = 0.0;
  for (std::size_t k = 0; k < table.bins.size(); ++k) {
    if (table.bins[k].mag_db <= kSpectrumFloorDb) continue;
    const double mag = std::pow(10.0, table.bins[k].mag_db / 20.0) * len / 2.0;  // |X_k|
    const bool edge = k == 0 || k == length / 2;
    energy += (edge ? 1.0 : 2.0) * mag * mag;
  }
  return energy / len;
}

void write_spectrum_csv(std::ostream& out, const SpectrumTable& table) {
  out << "freq_rad,mag_db\n";
  char buf[64];
  for (const auto& b : table.bins) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", b.freq_rad, b.mag_db);
    out << buf;
  }
}

}  // namespace adclin
