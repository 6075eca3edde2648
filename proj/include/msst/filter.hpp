#pragma once

#include <cstddef>
#include <vector>

#include "msst/signal.hpp"

namespace msst {

enum class FilterKind { butterworth_bandpass, notch };

struct IirFilterSpec {
  FilterKind kind = FilterKind::butterworth_bandpass;
  int order = 6;               // band-pass: analog prototype order (even)
  double low_cut_hz = 5.0;     // band-pass
  double high_cut_hz = 500.0;  // band-pass
  double center_hz = 50.0;     // notch
  double quality_factor = 35.0;
};

// One second-order section, normalized so a0 == 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

struct SosCascade {
  std::vector<Biquad> sections;

  // Filter order as realized (two poles per section).
  int order() const { return static_cast<int>(sections.size()) * 2; }

  // |H(f)| of the cascade at frequency f for the given sample rate.
  double magnitude_at(double freq_hz, double sample_rate_hz) const;

  // Largest pole modulus over all sections.
  double max_pole_modulus() const;
};

// Designs the coefficient cascade for the given spec. Band-pass cutoffs must
// satisfy 0 < low < high < Nyquist; the notch center must lie below Nyquist.
SosCascade design_filter(const IirFilterSpec& spec, double sample_rate_hz);

// Forward-backward (zero net phase) application, each channel independently.
// Requires signal length >= 3x the realized filter order.
MultichannelSignal apply_filter_zero_phase(const MultichannelSignal& signal,
                                           const SosCascade& cascade);

}  // namespace msst
