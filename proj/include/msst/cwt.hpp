#pragma once

#include <cstddef>
#include <vector>

#include "msst/fft.hpp"
#include "msst/tfmatrix.hpp"

namespace msst {

// Analytic Morlet bank on a logarithmic scale grid. center_frequency_cycles
// is the wavelet center frequency omega0/(2*pi); the default corresponds to
// the standard omega0 = 6 Morlet.
struct WaveletSpec {
  double center_frequency_cycles = 0.9549296585513721;  // 6 / (2*pi)
  int voices_per_octave = 16;
  double min_freq_hz = 5.0;
  double max_freq_hz = 500.0;

  void validate(double sample_rate_hz) const;
};

// Frequencies of the scale grid: min_freq * 2^(j/voices) up to max_freq.
std::vector<double> wavelet_frequency_grid(const WaveletSpec& spec);

// Precomputed transform state for one (signal length, wavelet) combination.
// Reusable across channels and segments of identical length.
class CwtPlan {
 public:
  CwtPlan(std::size_t signal_length, double sample_rate_hz, const WaveletSpec& spec);

  TimeFrequencyMatrix run(const std::vector<double>& channel) const;

  const std::vector<double>& frequencies() const { return freqs_; }

 private:
  std::size_t n_;           // signal length
  std::size_t pad_;         // reflected samples per side
  std::size_t fft_len_;
  double fs_;
  std::vector<double> freqs_;
  std::vector<std::vector<double>> filters_;  // per scale: sqrt(a)*psi_hat(a*xi_k), k in [0, fft_len)
  FftPlan plan_;
};

// Complex coefficient matrix W(a,b) of the channel, rows ordered by
// increasing frequency, one column per input sample.
TimeFrequencyMatrix cwt(const std::vector<double>& channel, double sample_rate_hz,
                        const WaveletSpec& spec);

}  // namespace msst
