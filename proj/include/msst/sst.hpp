#pragma once

#include <cstdint>
#include <vector>

#include "msst/cwt.hpp"
#include "msst/tfmatrix.hpp"

namespace msst {

// Instantaneous-frequency estimates per CWT cell. Cells below the magnitude
// threshold (or with non-finite estimates) are flagged invalid.
struct InstFreqField {
  std::vector<double> omega_hz;   // row-major [bin][time]; NaN where invalid
  std::vector<std::uint8_t> valid;
  std::size_t rows = 0;
  std::size_t cols = 0;

  double at(std::size_t r, std::size_t c) const { return omega_hz[r * cols + c]; }
  bool is_valid(std::size_t r, std::size_t c) const { return valid[r * cols + c] != 0; }
};

// omega(a,b) = Im[(dW/db) / W] / (2*pi), time derivative by central
// differences. Validity threshold: |W| >= 1e-8 * max|W|.
InstFreqField phase_transform(const TimeFrequencyMatrix& W);

// Reassigns each valid cell's mass |W| a^-3/2 da to the output bin nearest
// its instantaneous frequency, same column. Output entries are nonnegative
// real, so per-column mass is conserved by construction.
TimeFrequencyMatrix synchrosqueeze(const TimeFrequencyMatrix& W, const InstFreqField& omega,
                                   const std::vector<double>& out_freq_axis);

// CWT followed by phase transform and reassignment onto the given axis.
TimeFrequencyMatrix sst(const std::vector<double>& channel, double sample_rate_hz,
                        const WaveletSpec& wavelet, const std::vector<double>& out_freq_axis);

// Plan-backed variant for repeated equal-length segments.
TimeFrequencyMatrix sst_with_plan(const CwtPlan& plan, const std::vector<double>& channel,
                                  const std::vector<double>& out_freq_axis);

}  // namespace msst
