#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "adclin/signals.hpp"

namespace adclin {

/// Floor used in place of -infinity in spectra.
inline constexpr double kSpectrumFloorDb = -200.0;

struct SndrReport {
  double sndr_db = 0.0;          ///< +infinity when the error is exactly zero
  double signal_power_db = 0.0;  ///< P_x = 10 log10(mean x^2), relative to full scale
  double error_power_db = 0.0;
};

/// Time-domain SNDR = 10 log10(sum x^2 / sum (y - x)^2) against the unquantized reference.
SndrReport sndr(const SignalBuffer& reference, const SignalBuffer& y);

/// ENOB = (SNDR + 4.77 + P_x) / 6.02.
constexpr double enob(double sndr_db, double signal_power_db) noexcept {
  return (sndr_db + 4.77 + signal_power_db) / 6.02;
}

/// Statistics over a set of per-signal reports.
struct EnsembleSndr {
  double mean_db = 0.0;
  double std_db = 0.0;  ///< sample standard deviation (0 for a single signal)
  double min_db = 0.0;
  double pooled_db = 0.0;  ///< 10 log10(sum of signal powers / sum of error powers)
  double mean_signal_power_db = 0.0;
};

EnsembleSndr summarize(std::span<const SndrReport> reports);

struct SpectrumBin {
  double freq_rad;
  double mag_db;
};

/// One-sided magnitude spectrum, bins 0..L/2, strictly increasing frequency.
struct SpectrumTable {
  std::vector<SpectrumBin> bins;
};

/// Rectangular-window DFT magnitude scaled so a unit sinusoid centred on a bin
/// reads 0 dB. Length must be a power of two.
SpectrumTable spectrum(const SignalBuffer& x);

/// sum x^2 reconstructed from a spectrum of a length-`length` signal (Parseval).
double spectrum_energy(const SpectrumTable& table, std::size_t length);

void write_spectrum_csv(std::ostream& out, const SpectrumTable& table);

}  // namespace adclin
