#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace adclin {

/// Immutable, non-empty sequence of real samples (normalized T = 1).
class SignalBuffer {
 public:
  explicit SignalBuffer(std::vector<double> samples);

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t n) const noexcept { return samples_[n]; }
  auto begin() const noexcept { return samples_.cbegin(); }
  auto end() const noexcept { return samples_.cend(); }

  friend bool operator==(const SignalBuffer&, const SignalBuffer&) = default;

 private:
  std::vector<double> samples_;
};

/// Unquantized reference x(n) and the distorted, quantized v(n) seen by a linearizer.
struct SignalPair {
  SignalBuffer reference;
  SignalBuffer distorted;
};

/// Sum of sinusoids on an OFDM carrier grid:
///   x(n) = scale * sum_k A_k sin(w_k n + alpha_k),  w_k = 2 pi k / total + dw.
struct MultiToneSpec {
  int total_carriers = 64;
  int active_carriers = 31;
  std::vector<double> amplitudes;
  std::vector<double> phases;
  double freq_offset = 0.0;
  double scale = 0.9 / 31.0;

  /// Throws ValidationError naming the violated invariant.
  void validate() const;

  /// Quadrature part of a 31-of-64 carrier QPSK OFDM symbol with unit amplitudes.
  static MultiToneSpec ofdm_quadrature(std::vector<double> phases, double freq_offset);
};

/// Memoryless polynomial v = a_0 + a_1 x + ... + a_P x^P.
class DistortionModel {
 public:
  explicit DistortionModel(std::vector<double> coefficients);

  std::span<const double> coefficients() const noexcept { return coefficients_; }
  int order() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }

  /// Horner evaluation.
  double operator()(double x) const noexcept;

  friend bool operator==(const DistortionModel&, const DistortionModel&) = default;

 private:
  std::vector<double> coefficients_;
};

SignalBuffer gen_multitone(const MultiToneSpec& spec, std::size_t length);

/// `count` angles drawn uniformly from {pi/4, -pi/4, 3pi/4, -3pi/4}.
std::vector<double> qpsk_phases(std::uint64_t seed, std::size_t count);

/// Carrier-grid offset drawn uniformly from [-pi/total, pi/total].
double sample_freq_offset(std::uint64_t seed, int total_carriers = 64);

SignalBuffer apply_distortion(const DistortionModel& model, const SignalBuffer& x);

/// a_0 = 0, a_1 = 1, a_p = (-1)^p 0.15 / p for p = 2..10.
DistortionModel default_distortion_model();

/// Mid-tread uniform quantizer on [-1, 1): step 2^(1-bits), round half away
/// from zero, clamp to the two's-complement code range.
SignalBuffer quantize(const SignalBuffer& x, int bits);

// CSV with a single `sample` column.
void write_signal_csv(std::ostream& out, const SignalBuffer& x);
SignalBuffer read_signal_csv(std::istream& in);

}  // namespace adclin
