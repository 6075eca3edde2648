#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace msst {

// Uniformly sampled real-valued multichannel recording, channels x time.
struct MultichannelSignal {
  std::vector<std::vector<double>> samples;  // [channel][time]
  double sample_rate_hz = 0.0;

  std::size_t channel_count() const { return samples.size(); }
  std::size_t length_samples() const { return samples.empty() ? 0 : samples[0].size(); }

  // Enforces: equal channel lengths, positive sample rate, finite samples.
  void validate() const {
    if (sample_rate_hz <= 0.0) throw std::invalid_argument("sample rate must be positive");
    if (samples.empty()) throw std::invalid_argument("empty signal");
    const std::size_t n = samples[0].size();
    if (n == 0) throw std::invalid_argument("empty signal");
    for (const auto& ch : samples) {
      if (ch.size() != n) throw std::invalid_argument("channel length mismatch");
      for (double v : ch) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite sample");
      }
    }
  }
};

}  // namespace msst
