#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace msst {

// Time-frequency coefficient matrix, frequency bins x time samples, with the
// bin-to-Hz mapping carried alongside. CWT/SST stages hold complex values;
// reassigned and fused stages hold nonnegative real mass (imaginary part 0).
struct TimeFrequencyMatrix {
  std::vector<std::complex<double>> coeff;  // row-major [bin][time]
  std::vector<double> freq_axis_hz;         // one entry per bin, strictly increasing
  std::vector<double> time_axis_s;          // one entry per time index
  double sample_rate_hz = 0.0;
  std::size_t edge_cols = 0;  // boundary columns per side affected by extension

  std::size_t rows() const { return freq_axis_hz.size(); }
  std::size_t cols() const { return time_axis_s.size(); }

  std::complex<double>& at(std::size_t bin, std::size_t t) { return coeff[bin * cols() + t]; }
  const std::complex<double>& at(std::size_t bin, std::size_t t) const {
    return coeff[bin * cols() + t];
  }

  void validate() const {
    if (coeff.size() != rows() * cols()) throw std::invalid_argument("coefficient shape mismatch");
    if (sample_rate_hz <= 0.0) throw std::invalid_argument("sample rate must be positive");
    for (std::size_t i = 0; i + 1 < freq_axis_hz.size(); ++i) {
      if (!(freq_axis_hz[i] < freq_axis_hz[i + 1]))
        throw std::invalid_argument("frequency axis not strictly increasing");
    }
    if (!freq_axis_hz.empty()) {
      if (!(freq_axis_hz.front() > 0.0) || freq_axis_hz.back() > sample_rate_hz / 2.0)
        throw std::invalid_argument("frequency axis outside (0, Nyquist]");
    }
    for (const auto& c : coeff) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw std::invalid_argument("non-finite coefficient");
    }
  }
};

// Evenly spaced frequency axis over [min_hz, max_hz] with the given bin count.
std::vector<double> linear_frequency_axis(double min_hz, double max_hz, std::size_t bins);

// Index of the axis entry nearest to f (axis strictly increasing, clamped).
std::size_t nearest_bin(const std::vector<double>& axis, double f);

}  // namespace msst
