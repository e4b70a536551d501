#include "adclin/signals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "adclin/errors.hpp"
#include "adclin/rng.hpp"

namespace adclin {

SignalBuffer::SignalBuffer(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw ValidationError("SignalBuffer: length must be > 0");
}

void MultiToneSpec::validate() const {
  if (total_carriers <= 0) throw ValidationError("MultiToneSpec: total_carriers must be positive");
  if (active_carriers <= 0) throw ValidationError("MultiToneSpec: active_carriers must be positive");
  if (active_carriers > total_carriers / 2 - 1)
    throw ValidationError("MultiToneSpec: active_carriers must be <= total_carriers/2 - 1");
  const auto active = static_cast<std::size_t>(active_carriers);
  if (amplitudes.size() != active)
    throw ValidationError("MultiToneSpec: amplitudes must have exactly active_carriers entries");
  if (phases.size() != active)
    throw ValidationError("MultiToneSpec: phases must have exactly active_carriers entries");
  if (!(std::abs(freq_offset) <= std::numbers::pi / total_carriers))
    throw ValidationError("MultiToneSpec: |freq_offset| must be <= pi/total_carriers");
  if (!std::isfinite(scale)) throw ValidationError("MultiToneSpec: scale must be finite");
}

MultiToneSpec MultiToneSpec::ofdm_quadrature(std::vector<double> phases, double freq_offset) {
  MultiToneSpec spec;
  spec.amplitudes.assign(static_cast<std::size_t>(spec.active_carriers), 1.0);
  spec.phases = std::move(phases);
  spec.freq_offset = freq_offset;
  return spec;
}

DistortionModel::DistortionModel(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.size() < 2) throw ValidationError("DistortionModel: need at least a_0 and a_1");
  if (coefficients_[1] == 0.0) throw ValidationError("DistortionModel: a_1 must be nonzero");
  for (double a : coefficients_)
    if (!std::isfinite(a)) throw ValidationError("DistortionModel: coefficients must be finite");
}

double DistortionModel::operator()(double x) const noexcept {
  double acc = coefficients_.back();
  for (auto it = coefficients_.rbegin() + 1; it != coefficients_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

SignalBuffer gen_multitone(const MultiToneSpec& spec, std::size_t length) {
  spec.validate();
  if (length == 0) throw ValidationError("gen_multitone: length must be >= 1");

  std::vector<double> omega(spec.phases.size());
  for (std::size_t k = 0; k < omega.size(); ++k)
    omega[k] = 2.0 * std::numbers::pi * static_cast<double>(k + 1) / spec.total_carriers + spec.freq_offset;

  std::vector<double> out(length);
  for (std::size_t n = 0; n < length; ++n) {
    const double t = static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k)
      acc += spec.amplitudes[k] * std::sin(omega[k] * t + spec.phases[k]);
    out[n] = spec.scale * acc;
  }
  return SignalBuffer(std::move(out));
}

std::vector<double> qpsk_phases(std::uint64_t seed, std::size_t count) {
  constexpr double q = std::numbers::pi / 4.0;
  static constexpr double kAngles[4] = {q, -q, 3.0 * q, -3.0 * q};
  Rng rng(seed);
  std::vector<double> out(count);
  for (auto& a : out) a = kAngles[rng.quarter()];
  return out;
}

double sample_freq_offset(std::uint64_t seed, int total_carriers) {
  if (total_carriers <= 0) throw ValidationError("sample_freq_offset: total_carriers must be positive");
  const double limit = std::numbers::pi / total_carriers;
  Rng rng(seed);
  return rng.uniform(-limit, limit);
}

SignalBuffer apply_distortion(const DistortionModel& model, const SignalBuffer& x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [&](double s) { return model(s); });
  return SignalBuffer(std::move(out));
}

DistortionModel default_distortion_model() {
  constexpr int kOrder = 10;
  std::vector<double> a(kOrder + 1, 0.0);
  a[1] = 1.0;
  for (int p = 2; p <= kOrder; ++p) a[static_cast<std::size_t>(p)] = (p % 2 == 0 ? 0.15 : -0.15) / p;
  return DistortionModel(std::move(a));
}

SignalBuffer quantize(const SignalBuffer& x, int bits) {
  if (bits < 2 || bits > 24) throw ValidationError("quantize: bits must be in [2, 24]");
  const double step = std::ldexp(1.0, 1 - bits);
  const double top = std::ldexp(1.0, bits - 1) - 1.0;
  const double bottom = -std::ldexp(1.0, bits - 1);
  std::vector<double> out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double s = x[n];
    if (!(std::abs(s) <= 1.0)) throw RangeError("quantize: sample magnitude exceeds full scale");
    out[n] = std::clamp(std::round(s / step), bottom, top) * step;
  }
  return SignalBuffer(std::move(out));
}

void write_signal_csv(std::ostream& out, const SignalBuffer& x) {
  out << "sample\n";
  char buf[32];
  for (double s : x) {
    std::snprintf(buf, sizeof buf, "%.12g\n", s);
    out << buf;
  }
}

SignalBuffer read_signal_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("sample", 0) != 0)
    throw ValidationError("signal CSV: missing `sample` header");
  std::vector<double> samples;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      throw ValidationError("signal CSV: malformed sample line '" + line + "'");
    }
    samples.push_back(v);
  }
  return SignalBuffer(std::move(samples));
}

}  // namespace adclin
