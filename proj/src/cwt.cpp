#include "msst/cwt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msst {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kMinSignalLength = 64;
}  // namespace

void WaveletSpec::validate(double sample_rate_hz) const {
  if (!(center_frequency_cycles > 0.0))
    throw std::invalid_argument("wavelet center frequency must be positive");
  if (voices_per_octave < 4) throw std::invalid_argument("voices per octave must be >= 4");
  if (!(min_freq_hz > 0.0) || !(min_freq_hz < max_freq_hz))
    throw std::invalid_argument("invalid wavelet frequency range");
  if (max_freq_hz > sample_rate_hz / 2.0)
    throw std::invalid_argument("frequency range exceeds Nyquist");
}

std::vector<double> wavelet_frequency_grid(const WaveletSpec& spec) {
  std::vector<double> freqs;
  const double ratio = std::pow(2.0, 1.0 / spec.voices_per_octave);
  double f = spec.min_freq_hz;
  while (f <= spec.max_freq_hz * (1.0 + 1e-12)) {
    freqs.push_back(std::min(f, spec.max_freq_hz));
    f *= ratio;
  }
  return freqs;
}

std::vector<double> linear_frequency_axis(double min_hz, double max_hz, std::size_t bins) {
  if (bins < 2 || !(min_hz < max_hz)) throw std::invalid_argument("invalid frequency axis");
  std::vector<double> axis(bins);
  const double step = (max_hz - min_hz) / static_cast<double>(bins - 1);
  for (std::size_t i = 0; i < bins; ++i) axis[i] = min_hz + step * static_cast<double>(i);
  axis.back() = max_hz;
  return axis;
}

std::size_t nearest_bin(const std::vector<double>& axis, double f) {
  const auto it = std::lower_bound(axis.begin(), axis.end(), f);
  if (it == axis.begin()) return 0;
  if (it == axis.end()) return axis.size() - 1;
  const std::size_t hi = static_cast<std::size_t>(it - axis.begin());
  const std::size_t lo = hi - 1;
  return (f - axis[lo] <= axis[hi] - f) ? lo : hi;
}

namespace {
std::vector<double> checked_frequency_grid(std::size_t signal_length, double sample_rate_hz,
                                           const WaveletSpec& spec) {
  if (signal_length < kMinSignalLength) throw std::invalid_argument("signal too short");
  spec.validate(sample_rate_hz);
  return wavelet_frequency_grid(spec);
}
}  // namespace

CwtPlan::CwtPlan(std::size_t signal_length, double sample_rate_hz, const WaveletSpec& spec)
    : n_(signal_length),
      pad_(signal_length / 2),
      fft_len_(next_power_of_two(signal_length + 2 * (signal_length / 2))),
      fs_(sample_rate_hz),
      freqs_(checked_frequency_grid(signal_length, sample_rate_hz, spec)),
      plan_(fft_len_) {
  const double omega0 = 2.0 * kPi * spec.center_frequency_cycles;
  const double norm = std::pow(kPi, -0.25);

  filters_.resize(freqs_.size());
  for (std::size_t j = 0; j < freqs_.size(); ++j) {
    const double a = spec.center_frequency_cycles / freqs_[j];  // scale in seconds
    auto& filt = filters_[j];
    filt.assign(fft_len_, 0.0);
    // analytic Morlet: psi_hat(w) = pi^-1/4 exp(-(w - omega0)^2 / 2), w > 0
    for (std::size_t k = 1; k <= fft_len_ / 2; ++k) {
      const double xi = 2.0 * kPi * static_cast<double>(k) * fs_ / static_cast<double>(fft_len_);
      const double u = a * xi - omega0;
      filt[k] = std::sqrt(a * fs_) * norm * std::exp(-0.5 * u * u);
    }
  }
}

TimeFrequencyMatrix CwtPlan::run(const std::vector<double>& channel) const {
  if (channel.size() != n_) throw std::invalid_argument("channel length does not match plan");

  // Reflect pad_ samples on each side, zero-fill the rest.
  std::vector<cplx> ext(fft_len_, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < n_; ++i) ext[pad_ + i] = channel[i];
  for (std::size_t i = 0; i < pad_; ++i) {
    ext[pad_ - 1 - i] = channel[std::min(i + 1, n_ - 1)];
    ext[pad_ + n_ + i] = channel[n_ - 2 - std::min(i, n_ - 2)];
  }

  plan_.transform(ext.data(), false);

  TimeFrequencyMatrix out;
  out.freq_axis_hz = freqs_;
  out.time_axis_s.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) out.time_axis_s[i] = static_cast<double>(i) / fs_;
  out.sample_rate_hz = fs_;
  out.edge_cols = n_ / 20;  // first/last 5% of columns carry extension effects
  out.coeff.assign(freqs_.size() * n_, cplx(0.0, 0.0));

  std::vector<cplx> row(fft_len_);
  for (std::size_t j = 0; j < freqs_.size(); ++j) {
    const auto& filt = filters_[j];
    for (std::size_t k = 0; k < fft_len_; ++k) row[k] = ext[k] * filt[k];
    plan_.transform(row.data(), true);
    const double scale = 1.0 / static_cast<double>(fft_len_);
    for (std::size_t i = 0; i < n_; ++i) out.coeff[j * n_ + i] = row[pad_ + i] * scale;
  }
  return out;
}

TimeFrequencyMatrix cwt(const std::vector<double>& channel, double sample_rate_hz,
                        const WaveletSpec& spec) {
  CwtPlan plan(channel.size(), sample_rate_hz, spec);
  return plan.run(channel);
}

}  // namespace msst
